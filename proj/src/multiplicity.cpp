#include "thompson/multiplicity.hpp"

#include "thompson/errors.hpp"
#include "thompson/varint.hpp"

namespace thompson {

Multiplicity::Multiplicity(mpz_class v) : value_(std::move(v)) {
  if (std::get<mpz_class>(value_) < 0) throw ParameterError("negative multiplicity");
  normalize();
}

void Multiplicity::normalize() {
  if (auto* big = std::get_if<mpz_class>(&value_); big && mpz_sizeinbase(big->get_mpz_t(), 2) <= 64) {
    std::uint64_t v = 0;
    mpz_export(&v, nullptr, -1, sizeof(v), 0, 0, big->get_mpz_t());
    value_ = v;
  }
}

mpz_class Multiplicity::to_mpz() const {
  if (const auto* big = std::get_if<mpz_class>(&value_)) return *big;
  mpz_class out;
  const std::uint64_t v = small();
  mpz_import(out.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
  return out;
}

bool Multiplicity::is_zero() const noexcept { return is_small() && std::get<std::uint64_t>(value_) == 0; }

std::string Multiplicity::to_string() const {
  if (is_small()) return std::to_string(small());
  return std::get<mpz_class>(value_).get_str();
}

Multiplicity Multiplicity::parse(std::string_view decimal) {
  if (decimal.empty() || decimal.find_first_not_of("0123456789") != std::string_view::npos) {
    throw DecodeError("bad multiplicity '" + std::string(decimal) + "'");
  }
  return Multiplicity(mpz_class(std::string(decimal)));
}

Multiplicity& Multiplicity::operator+=(const Multiplicity& other) {
  if (is_small() && other.is_small()) {
    std::uint64_t sum = 0;
    if (!__builtin_add_overflow(small(), other.small(), &sum)) {
      value_ = sum;
      return *this;
    }
  }
  value_ = to_mpz() + other.to_mpz();
  normalize();
  return *this;
}

Multiplicity operator*(const Multiplicity& a, const Multiplicity& b) {
  if (a.is_small() && b.is_small()) {
    std::uint64_t product = 0;
    if (!__builtin_mul_overflow(a.small(), b.small(), &product)) return Multiplicity(product);
  }
  return Multiplicity(mpz_class(a.to_mpz() * b.to_mpz()));
}

bool operator==(const Multiplicity& a, const Multiplicity& b) {
  if (a.is_small() && b.is_small()) return a.small() == b.small();
  return a.to_mpz() == b.to_mpz();
}

void Multiplicity::append_to(std::string& out) const {
  if (is_small()) {
    varint::append(out, small());
  } else {
    varint::append(out, std::get<mpz_class>(value_));
  }
}

Multiplicity Multiplicity::read(std::string_view in, std::size_t& pos) {
  // Up to nine LEB128 bytes always fit in 63 bits.
  std::size_t end = pos;
  while (end < in.size() && (static_cast<std::uint8_t>(in[end]) & 0x80) != 0) ++end;
  if (end - pos < 9) return Multiplicity(varint::read_u64(in, pos));
  return Multiplicity(varint::read_big(in, pos));
}

}  // namespace thompson
