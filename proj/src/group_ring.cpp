#include "thompson/group_ring.hpp"

namespace thompson {

GroupRingVector GroupRingVector::identity() {
  GroupRingVector v;
  v.add(DoubleTree(), 1);
  return v;
}

void GroupRingVector::add(const std::string& key, const mpz_class& coefficient) {
  if (coefficient == 0) return;
  auto [it, inserted] = terms_.try_emplace(key, coefficient);
  if (!inserted) {
    it->second += coefficient;
    if (it->second == 0) terms_.erase(it);
  }
}

mpz_class GroupRingVector::coefficient(const std::string& key) const {
  const auto it = terms_.find(key);
  return it == terms_.end() ? mpz_class(0) : it->second;
}

mpz_class GroupRingVector::trace() const {
  static const std::string e = serialize(DoubleTree());
  return coefficient(e);
}

GroupRingVector& GroupRingVector::operator+=(const GroupRingVector& other) {
  for (const auto& [key, c] : other.terms_) add(key, c);
  return *this;
}

GroupRingVector& GroupRingVector::operator-=(const GroupRingVector& other) {
  for (const auto& [key, c] : other.terms_) add(key, -c);
  return *this;
}

GroupRingVector GroupRingVector::scaled(const mpz_class& factor) const {
  GroupRingVector out;
  if (factor == 0) return out;
  for (const auto& [key, c] : terms_) out.terms_.emplace_hint(out.terms_.end(), key, c * factor);
  return out;
}

GroupRingVector GroupRingVector::left_mul(Letter l) const {
  GroupRingVector out;
  for (const auto& [key, c] : terms_) out.add(serialize(thompson::left_mul(l, deserialize(key))), c);
  return out;
}

mpz_class GroupRingVector::norm_squared() const {
  mpz_class total = 0;
  for (const auto& [key, c] : terms_) total += c * c;
  return total;
}

std::size_t estimate_group_ring_bytes(std::size_t entries, std::size_t key_bytes) noexcept {
  // Red-black tree node, std::string with heap buffer, mpz limb storage.
  constexpr std::size_t kPerEntry = 48 + 32 + 16 + 16;
  return entries * (kPerEntry + key_bytes);
}

std::size_t GroupRingVector::memory_bytes() const noexcept {
  std::size_t keys = 0;
  for (const auto& [key, c] : terms_) keys += key.capacity() > 15 ? key.capacity() : 0;
  return estimate_group_ring_bytes(terms_.size(), 0) + keys;
}

}  // namespace thompson
