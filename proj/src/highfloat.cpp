#include "thompson/highfloat.hpp"

#include <gmpxx.h>

namespace thompson {

HighFloat to_high(const mpq_class& q) {
  return HighFloat(q.get_num().get_str()) / HighFloat(q.get_den().get_str());
}

std::string round_half_even(const HighFloat& x, unsigned decimals) {
  const bool negative = x < 0;
  HighFloat scaled = boost::multiprecision::abs(x) * boost::multiprecision::pow(HighFloat(10), decimals);
  HighFloat whole = boost::multiprecision::floor(scaled);
  const HighFloat frac = scaled - whole;
  mpz_class digits(whole.str(0, std::ios_base::fixed).substr(0, whole.str(0, std::ios_base::fixed).find('.')));
  if (frac > HighFloat(0.5) || (frac == HighFloat(0.5) && mpz_odd_p(digits.get_mpz_t()))) digits += 1;
  std::string s = digits.get_str();
  if (s.size() <= decimals) s.insert(0, decimals + 1 - s.size(), '0');
  if (decimals > 0) s.insert(s.size() - decimals, ".");
  if (negative && digits != 0) s.insert(0, "-");
  return s;
}

}  // namespace thompson
