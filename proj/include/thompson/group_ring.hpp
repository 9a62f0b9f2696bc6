#pragma once

#include <cstddef>
#include <map>
#include <string>

#include <gmpxx.h>

#include "thompson/doubletree.hpp"
#include "thompson/taction.hpp"

namespace thompson {

// Finitely supported element of the integral group ring of T, keyed by
// serialized reduced doubletrees. Zero coefficients are never stored.
class GroupRingVector {
 public:
  using Map = std::map<std::string, mpz_class>;

  GroupRingVector() = default;
  static GroupRingVector identity();

  void add(const std::string& key, const mpz_class& coefficient);
  void add(const DoubleTree& x, const mpz_class& coefficient) { add(serialize(x), coefficient); }
  mpz_class coefficient(const std::string& key) const;
  mpz_class coefficient(const DoubleTree& x) const { return coefficient(serialize(x)); }
  // Coefficient of the identity, i.e. the trace.
  mpz_class trace() const;

  GroupRingVector& operator+=(const GroupRingVector& other);
  GroupRingVector& operator-=(const GroupRingVector& other);
  GroupRingVector scaled(const mpz_class& factor) const;
  // ℓ·v for a single letter.
  GroupRingVector left_mul(Letter l) const;

  // Sum of squared coefficients: the squared 2-norm under the trace.
  mpz_class norm_squared() const;
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }
  const Map& terms() const noexcept { return terms_; }
  // Rough heap footprint, used for memory budgets.
  std::size_t memory_bytes() const noexcept;

  friend bool operator==(const GroupRingVector&, const GroupRingVector&) = default;

 private:
  Map terms_;
};

// Estimated heap bytes for `entries` terms whose keys average `key_bytes`.
std::size_t estimate_group_ring_bytes(std::size_t entries, std::size_t key_bytes) noexcept;

}  // namespace thompson
