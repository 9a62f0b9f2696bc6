#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace thompson {

// A point k / 2^e of the circle Z[1/2]/Z, stored in lowest terms.
class DyadicPoint {
 public:
  static constexpr unsigned kMaxExponent = 62;

  constexpr DyadicPoint() = default;
  // Reduces modulo 1 and to lowest terms. Throws ParameterError when the
  // exponent exceeds kMaxExponent.
  DyadicPoint(std::uint64_t numerator, unsigned exponent);

  std::uint64_t numerator() const noexcept { return numerator_; }
  unsigned exponent() const noexcept { return exponent_; }

  // Sum modulo 1.
  DyadicPoint operator+(const DyadicPoint& other) const;
  // Difference modulo 1.
  DyadicPoint operator-(const DyadicPoint& other) const;
  // Multiplication by 2^shift (shift may be negative), modulo 1.
  DyadicPoint scaled(int shift) const;

  double to_double() const noexcept;
  std::string to_string() const;

  friend bool operator==(const DyadicPoint&, const DyadicPoint&) = default;
  friend std::strong_ordering operator<=>(const DyadicPoint& a, const DyadicPoint& b);

 private:
  std::uint64_t numerator_ = 0;
  unsigned exponent_ = 0;
};

}  // namespace thompson
