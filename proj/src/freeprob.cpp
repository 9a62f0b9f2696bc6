#include "thompson/freeprob.hpp"

#include <cmath>
#include <sstream>

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "thompson/errors.hpp"

namespace thompson {

namespace {

constexpr double kPi = boost::math::constants::pi<double>();

void check_hypotheses(const mpq_class& alpha, const mpq_class& beta) {
  if (!(beta > 0 && beta <= alpha && alpha < 1 && alpha + beta < 1)) {
    throw ParameterError("free measure needs 0 < beta <= alpha < 1 and alpha + beta < 1, got alpha = " +
                         alpha.get_str() + ", beta = " + beta.get_str());
  }
}

mpz_class binomial(unsigned n, unsigned k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

mpz_class power(unsigned base, unsigned e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, e);
  return r;
}

}  // namespace

FreeMeasure make_free_measure(const mpq_class& alpha, const mpq_class& beta) {
  check_hypotheses(alpha, beta);
  const double a = alpha.get_d();
  const double b = beta.get_d();
  FreeMeasure fm;
  fm.alpha = alpha;
  fm.beta = beta;
  const double u = std::sqrt(a * (1 - b));
  const double v = std::sqrt(b * (1 - a));
  fm.lambda1 = u + v;
  fm.lambda2 = u - v;
  fm.atom_mass = 1 - b;
  return fm;
}

double free_norm(const mpq_class& alpha, const mpq_class& beta) { return make_free_measure(alpha, beta).lambda1; }

double free_density_at(const FreeMeasure& fm, double t) {
  const double x = std::abs(t);
  if (x <= fm.lambda2 || x >= fm.lambda1) return 0.0;
  const double l1 = fm.lambda1 * fm.lambda1;
  const double l2 = fm.lambda2 * fm.lambda2;
  const double s = x * x;
  return std::sqrt((l1 - s) * (s - l2)) / (2 * kPi * x * (1 - s));
}

double free_band_mass(const FreeMeasure& fm, double tolerance) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  double error = 0;
  const double band = integrator.integrate([&](double t) { return free_density_at(fm, t); }, fm.lambda2, fm.lambda1,
                                           tolerance, &error);
  if (!(error <= tolerance * std::max(1.0, std::abs(band)) * 10)) {
    std::ostringstream msg;
    msg << "band mass quadrature reached error " << error << ", wanted " << tolerance;
    throw ConvergenceError(msg.str());
  }
  return 2 * band;
}

std::vector<mpz_class> free_moments(unsigned n_max) {
  if (n_max == 0) throw ParameterError("free_moments needs n_max >= 1");
  std::vector<mpz_class> catalan{1};
  std::vector<mpz_class> m{1};
  for (unsigned n = 1; n < n_max; ++n) {
    mpz_class sum = 0;
    for (unsigned j = 0; 2 * j <= n - 1; ++j) {
      while (catalan.size() <= j) {
        const unsigned k = static_cast<unsigned>(catalan.size());
        catalan.push_back(binomial(2 * k, k) / (k + 1));
      }
      sum += catalan[j] * binomial(n - 1, 2 * j) * power(6, j) * power(5, n - 1 - 2 * j);
    }
    m.push_back(12 * m.back() - 6 * sum);
  }
  return m;
}

std::vector<double> free_moments_quadrature(unsigned n_max, double relative_tolerance) {
  if (n_max == 0) throw ParameterError("free_moments_quadrature needs n_max >= 1");
  // With t² = 5 + √24 cos θ the square-root endpoints become a smooth
  // integrand on [0, π]:  m_n = (12/π) ∫ (t²)^(n−1) sin²θ / (12 − t²) dθ.
  const double r = std::sqrt(24.0);
  std::vector<double> out;
  for (unsigned n = 1; n <= n_max; ++n) {
    const auto f = [&](double theta) {
      const double s = 5 + r * std::cos(theta);
      const double sn = std::sin(theta);
      return std::pow(s, n - 1) * sn * sn / (12 - s);
    };
    double error = 0;
    const double integral =
        boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, kPi, 15, relative_tolerance, &error);
    const double value = 12 / kPi * integral;
    error /= std::abs(integral);
    if (!(error <= relative_tolerance * 100)) {
      std::ostringstream msg;
      msg << "quadrature for free moment " << n << " reached relative error " << error;
      throw ConvergenceError(msg.str());
    }
    out.push_back(value);
  }
  return out;
}

}  // namespace thompson
