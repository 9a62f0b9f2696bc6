#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include <gmpxx.h>

namespace thompson {

// Non-negative count that stays in 64 bits until an addition or
// multiplication would overflow, then switches to a GMP integer.
class Multiplicity {
 public:
  Multiplicity() = default;
  Multiplicity(std::uint64_t v) : value_(v) {}  // NOLINT(google-explicit-constructor)
  explicit Multiplicity(mpz_class v);

  bool is_small() const noexcept { return std::holds_alternative<std::uint64_t>(value_); }
  std::uint64_t small() const { return std::get<std::uint64_t>(value_); }
  mpz_class to_mpz() const;
  bool is_zero() const noexcept;
  std::string to_string() const;
  static Multiplicity parse(std::string_view decimal);

  Multiplicity& operator+=(const Multiplicity& other);
  friend Multiplicity operator+(Multiplicity a, const Multiplicity& b) { return a += b; }
  friend Multiplicity operator*(const Multiplicity& a, const Multiplicity& b);
  friend bool operator==(const Multiplicity& a, const Multiplicity& b);

  // LEB128.
  void append_to(std::string& out) const;
  static Multiplicity read(std::string_view in, std::size_t& pos);

 private:
  void normalize();
  std::variant<std::uint64_t, mpz_class> value_{std::uint64_t{0}};
};

}  // namespace thompson
