#include <doctest.h>

#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "thompson/density.hpp"
#include "thompson/errors.hpp"
#include "thompson/freeprob.hpp"
#include "thompson/golden.hpp"

using namespace thompson;

namespace {

MomentTable qr_moments() {
  std::vector<mpz_class> m;
  for (const auto& row : golden::zeta_moments()) m.push_back(row.m);
  return make_moment_table(MomentConvention::TwoProjections, m);
}

MomentTable free_table(unsigned n) {
  return make_moment_table(MomentConvention::TwoProjections, free_moments(n));
}

HighFloat qr_width() { return 2 + boost::multiprecision::sqrt(HighFloat(2)); }

// Closed-form free density on the √12 scale (continuous part only).
double free_closed_form(double x) {
  static const FreeMeasure fm = make_free_measure(mpq_class(1, 3), mpq_class(1, 4));
  const double s = std::sqrt(12.0);
  return free_density_at(fm, x / s) / s;
}

// ∫ f(x²) over both bands of the free density, with x² = 5 + √24 cos θ.
template <class F>
double free_band_integral(F f) {
  const double r = std::sqrt(24.0);
  const auto g = [&](double theta) {
    const double s = 5 + r * std::cos(theta);
    const double sn = std::sin(theta);
    return f(s) * sn * sn / (s * (12 - s));
  };
  return 12 / M_PI * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, 0.0, M_PI, 15, 1e-14);
}

}  // namespace

TEST_CASE("modified moments from power moments") {
  const MomentTable m = qr_moments();
  const HighFloat w = qr_width();
  for (const auto basis : {DensityBasis::Chebyshev, DensityBasis::Legendre}) {
    const ModifiedMoments mm = power_to_modified_moments(m, w, basis, 28);
    REQUIRE(mm.values.size() == 57);
    CHECK(mm.values[0] == HighFloat(0.25));
    for (std::size_t n = 1; n < mm.values.size(); n += 2) CHECK(mm.values[n] == 0);
  }
  const ModifiedMoments cheb = power_to_modified_moments(m, w, DensityBasis::Chebyshev, 3);
  CHECK(boost::multiprecision::abs(cheb.values[2] - (2 * HighFloat(1) / (w * w) - HighFloat(0.25))) < HighFloat("1e-90"));
  CHECK(basis_polynomial(DensityBasis::Legendre, 2) == std::vector<mpq_class>{mpq_class(-1, 2), 0, mpq_class(3, 2)});
  CHECK_THROWS_AS(power_to_modified_moments(m, w, DensityBasis::Chebyshev, 29), ParameterError);
  CHECK_THROWS_AS(power_to_modified_moments(m, HighFloat(0), DensityBasis::Chebyshev, 3), ParameterError);
}

TEST_CASE("free modified moments against quadrature of the closed form") {
  const HighFloat w = qr_width();
  const double wd = static_cast<double>(w);
  for (const auto basis : {DensityBasis::Chebyshev, DensityBasis::Legendre}) {
    const ModifiedMoments mm = power_to_modified_moments(free_table(28), w, basis, 28);
    for (unsigned n = 0; n <= 56; n += 2) {
      const double direct = free_band_integral([&](double s) {
        // B_n(√s / W) by the three-term recurrence.
        const double x = std::sqrt(s) / wd;
        double prev = 1, cur = x;
        if (n == 0) return 1.0;
        for (unsigned k = 1; k < n; ++k) {
          const double next = basis == DensityBasis::Chebyshev ? 2 * x * cur - prev
                                                               : ((2 * k + 1) * x * cur - k * prev) / (k + 1);
          prev = cur;
          cur = next;
        }
        return cur;
      });
      CAPTURE(n);
      CHECK(std::abs(static_cast<double>(mm.values[n]) - direct) < 1e-9);
    }
  }
}

TEST_CASE("free density reconstruction") {
  const HighFloat w = qr_width();
  const auto grid = symmetric_grid(static_cast<double>(w), 2048);
  const DensityCurve cheb = chebyshev_density(free_table(28), w, 28, grid);
  const DensityCurve leg = legendre_density(free_table(28), w, 28, grid);
  double cheb_err = 0, leg_err = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid[i];
    if (std::abs(t) < 1 || std::abs(t) > 3) continue;
    cheb_err = std::max(cheb_err, std::abs(cheb.points[i].second - free_closed_form(t)));
    leg_err = std::max(leg_err, std::abs(leg.points[i].second - free_closed_form(t)));
  }
  MESSAGE("sup error on 1 <= |t| <= 3: chebyshev " << cheb_err << ", legendre " << leg_err);
  CHECK(cheb_err < 0.02);
  CHECK(leg_err < 0.05);
}

TEST_CASE("reconstructed densities integrate to m_0 and are symmetric") {
  const HighFloat w = qr_width();
  for (const MomentTable& m : {qr_moments(), free_table(28)}) {
    for (const auto basis : {DensityBasis::Chebyshev, DensityBasis::Legendre}) {
      const ModifiedMoments mm = power_to_modified_moments(m, w, basis, 28);
      CHECK(std::abs(integrate_density(mm) - 0.25) < 1e-8);
    }
  }
  const auto grid = symmetric_grid(static_cast<double>(w), 301);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(grid[i] == -grid[grid.size() - 1 - i]);
  const DensityCurve c = legendre_density(qr_moments(), w, 28, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(c.points[i].second == c.points[grid.size() - 1 - i].second);

  const ModifiedMoments mm = power_to_modified_moments(qr_moments(), w, DensityBasis::Chebyshev, 4);
  CHECK_THROWS_AS(density_at(mm, static_cast<double>(w)), ParameterError);
  CHECK_THROWS_AS(density_at(mm, -4.0), ParameterError);
}

TEST_CASE("little mass in the tail") {
  const HighFloat w = qr_width();
  const DensityCurve c = chebyshev_density(qr_moments(), w, 28, symmetric_grid(static_cast<double>(w), 2048));
  const double tail = max_on(c, 3.22, 3.414);
  MESSAGE("max density on [3.22, 3.414]: " << tail);
  CHECK(tail < 0.01);

  std::ostringstream out;
  write_plot_data(c, out, true);
  CHECK(out.str().rfind("t,rho\n", 0) == 0);
}
