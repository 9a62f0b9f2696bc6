#include "thompson/dyadic.hpp"

#include <algorithm>
#include <bit>

#include "thompson/errors.hpp"

namespace thompson {

namespace {

void check_exponent(unsigned e) {
  if (e > DyadicPoint::kMaxExponent) {
    throw ParameterError("dyadic exponent " + std::to_string(e) + " exceeds " +
                         std::to_string(DyadicPoint::kMaxExponent));
  }
}

}  // namespace

DyadicPoint::DyadicPoint(std::uint64_t numerator, unsigned exponent) {
  check_exponent(exponent);
  numerator &= (std::uint64_t{1} << exponent) - 1;
  if (numerator == 0) {
    numerator_ = 0;
    exponent_ = 0;
    return;
  }
  const unsigned tz = static_cast<unsigned>(std::countr_zero(numerator));
  const unsigned shift = std::min(tz, exponent);
  numerator_ = numerator >> shift;
  exponent_ = exponent - shift;
}

DyadicPoint DyadicPoint::operator+(const DyadicPoint& other) const {
  const unsigned e = std::max(exponent_, other.exponent_);
  const std::uint64_t a = numerator_ << (e - exponent_);
  const std::uint64_t b = other.numerator_ << (e - other.exponent_);
  return DyadicPoint(a + b, e);
}

DyadicPoint DyadicPoint::operator-(const DyadicPoint& other) const {
  const unsigned e = std::max(exponent_, other.exponent_);
  const std::uint64_t modulus = std::uint64_t{1} << e;
  const std::uint64_t a = numerator_ << (e - exponent_);
  const std::uint64_t b = other.numerator_ << (e - other.exponent_);
  return DyadicPoint(a + modulus - b, e);
}

DyadicPoint DyadicPoint::scaled(int shift) const {
  if (numerator_ == 0) return {};
  if (shift <= 0) {
    return DyadicPoint(numerator_, exponent_ + static_cast<unsigned>(-shift));
  }
  const unsigned s = static_cast<unsigned>(shift);
  if (s >= exponent_) return {};
  return DyadicPoint(numerator_, exponent_ - s);
}

double DyadicPoint::to_double() const noexcept {
  return static_cast<double>(numerator_) / static_cast<double>(std::uint64_t{1} << exponent_);
}

std::string DyadicPoint::to_string() const {
  if (exponent_ == 0) return std::to_string(numerator_);
  return std::to_string(numerator_) + "/" + std::to_string(std::uint64_t{1} << exponent_);
}

std::strong_ordering operator<=>(const DyadicPoint& a, const DyadicPoint& b) {
  const unsigned e = std::max(a.exponent_, b.exponent_);
  return (a.numerator_ << (e - a.exponent_)) <=> (b.numerator_ << (e - b.exponent_));
}

}  // namespace thompson
