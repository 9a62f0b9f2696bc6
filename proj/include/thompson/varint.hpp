#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace thompson::varint {

// Unsigned LEB128.
void append(std::string& out, std::uint64_t value);
void append(std::string& out, const mpz_class& value);

// Decodes at `pos` and advances it. Throws DecodeError on truncation or when
// a 64-bit read does not fit.
std::uint64_t read_u64(std::string_view in, std::size_t& pos);
mpz_class read_big(std::string_view in, std::size_t& pos);

}  // namespace thompson::varint
