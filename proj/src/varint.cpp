#include "thompson/varint.hpp"

#include "thompson/errors.hpp"

namespace thompson::varint {

void append(std::string& out, std::uint64_t value) {
  do {
    std::uint8_t byte = value & 0x7f;
    value >>= 7;
    if (value != 0) byte |= 0x80;
    out.push_back(static_cast<char>(byte));
  } while (value != 0);
}

void append(std::string& out, const mpz_class& value) {
  if (value < 0) throw ParameterError("LEB128 encodes non-negative integers only");
  if (value.fits_ulong_p()) {
    append(out, static_cast<std::uint64_t>(value.get_ui()));
    return;
  }
  mpz_class rest = value;
  do {
    const auto low = static_cast<std::uint8_t>(mpz_fdiv_ui(rest.get_mpz_t(), 128));
    mpz_fdiv_q_2exp(rest.get_mpz_t(), rest.get_mpz_t(), 7);
    out.push_back(static_cast<char>(rest != 0 ? (low | 0x80) : low));
  } while (rest != 0);
}

std::uint64_t read_u64(std::string_view in, std::size_t& pos) {
  std::uint64_t value = 0;
  unsigned shift = 0;
  while (true) {
    if (pos >= in.size()) throw DecodeError("truncated varint");
    const auto byte = static_cast<std::uint8_t>(in[pos++]);
    const std::uint64_t chunk = byte & 0x7f;
    if (shift >= 64 || (shift > 57 && (chunk >> (64 - shift)) != 0)) {
      throw DecodeError("varint does not fit in 64 bits");
    }
    value |= chunk << shift;
    if ((byte & 0x80) == 0) return value;
    shift += 7;
  }
}

mpz_class read_big(std::string_view in, std::size_t& pos) {
  mpz_class value = 0;
  mpz_class chunk;
  unsigned long shift = 0;
  while (true) {
    if (pos >= in.size()) throw DecodeError("truncated varint");
    const auto byte = static_cast<std::uint8_t>(in[pos++]);
    chunk = byte & 0x7f;
    mpz_mul_2exp(chunk.get_mpz_t(), chunk.get_mpz_t(), shift);
    value += chunk;
    if ((byte & 0x80) == 0) return value;
    shift += 7;
  }
}

}  // namespace thompson::varint
