#pragma once

#include <string>

#include <boost/multiprecision/mpfr.hpp>
#include <gmpxx.h>

namespace thompson {

// Working precision for everything downstream of the exact moments.
inline constexpr unsigned kHighFloatDigits = 100;
using HighFloat =
    boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<kHighFloatDigits>,
                                  boost::multiprecision::et_off>;

HighFloat to_high(const mpq_class& q);

// Decimal string with `decimals` digits after the point, ties to even.
std::string round_half_even(const HighFloat& x, unsigned decimals);

}  // namespace thompson
