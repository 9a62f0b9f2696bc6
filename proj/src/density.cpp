#include "thompson/density.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "thompson/errors.hpp"

namespace thompson {

namespace {

constexpr double kPi = boost::math::constants::pi<double>();

// B_n(x) for all n ≤ n_max by the three-term recurrences, in double.
std::vector<double> basis_values(DensityBasis basis, std::size_t n_max, double x) {
  std::vector<double> v(n_max + 1);
  v[0] = 1;
  if (n_max >= 1) v[1] = x;
  for (std::size_t n = 1; n < n_max; ++n) {
    if (basis == DensityBasis::Chebyshev) {
      v[n + 1] = 2 * x * v[n] - v[n - 1];
    } else {
      v[n + 1] = ((2 * n + 1) * x * v[n] - n * v[n - 1]) / (n + 1);
    }
  }
  return v;
}

DensityCurve make_curve(const MomentTable& m, const HighFloat& half_width, unsigned order,
                        const std::vector<double>& grid, DensityBasis basis) {
  const ModifiedMoments mm = power_to_modified_moments(m, half_width, basis, order);
  DensityCurve c;
  c.basis = basis;
  c.order = order;
  c.half_width = static_cast<double>(half_width);
  for (const double t : grid) c.points.emplace_back(t, density_at(mm, t));
  return c;
}

}  // namespace

std::vector<mpq_class> basis_polynomial(DensityBasis basis, unsigned n) {
  std::vector<mpq_class> prev{1};
  if (n == 0) return prev;
  std::vector<mpq_class> cur{0, 1};
  for (unsigned k = 1; k < n; ++k) {
    std::vector<mpq_class> next(k + 2, 0);
    // Chebyshev: 2x T_k − T_{k−1};  Legendre: ((2k+1) x P_k − k P_{k−1}) / (k+1).
    const mpq_class lead = basis == DensityBasis::Chebyshev ? mpq_class(2) : mpq_class(2 * k + 1, k + 1);
    const mpq_class tail = basis == DensityBasis::Chebyshev ? mpq_class(1) : mpq_class(k, k + 1);
    for (std::size_t j = 0; j < cur.size(); ++j) next[j + 1] += lead * cur[j];
    for (std::size_t j = 0; j < prev.size(); ++j) next[j] -= tail * prev[j];
    for (auto& v : next) v.canonicalize();
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

ModifiedMoments power_to_modified_moments(const MomentTable& m, const HighFloat& half_width, DensityBasis basis,
                                          unsigned order) {
  if (!(half_width > 0)) throw ParameterError("half width must be positive");
  if (m.horizon() < order) {
    throw ParameterError("order " + std::to_string(order) + " needs moments up to m_" + std::to_string(order) +
                         ", table ends at m_" + std::to_string(m.horizon()));
  }
  ModifiedMoments mm;
  mm.basis = basis;
  mm.half_width = half_width;
  mm.values.assign(2 * order + 1, HighFloat(0));
  std::vector<HighFloat> scaled;  // m_k / W^(2k)
  const HighFloat w2 = half_width * half_width;
  HighFloat wk = 1;
  for (unsigned k = 0; k <= order; ++k) {
    scaled.push_back(to_high(m.m[k]) / wk);
    wk *= w2;
  }
  for (unsigned n = 0; n <= 2 * order; n += 2) {
    const auto poly = basis_polynomial(basis, n);
    HighFloat sum = 0;
    HighFloat magnitude = 0;
    for (unsigned k = 0; k <= n; k += 2) {
      const HighFloat term = to_high(poly[k]) * scaled[k / 2];
      sum += term;
      magnitude += boost::multiprecision::abs(term);
    }
    if (magnitude > 0 && boost::multiprecision::abs(sum) < magnitude * HighFloat("1e-30")) {
      mm.cancellation.push_back(n);
    }
    mm.values[n] = sum;
  }
  return mm;
}

double density_at(const ModifiedMoments& mm, double t) {
  const double w = static_cast<double>(mm.half_width);
  const double a = std::abs(t);
  if (!(a < w)) throw ParameterError("density is defined on |t| < W only");
  const double x = a / w;
  const auto b = basis_values(mm.basis, mm.values.size() - 1, x);
  double sum = 0;
  for (std::size_t n = 0; n < mm.values.size(); n += 2) {
    const double mn = static_cast<double>(mm.values[n]);
    if (mm.basis == DensityBasis::Chebyshev) {
      sum += (n == 0 ? 1.0 : 2.0) * mn * b[n];
    } else {
      sum += (n + 0.5) / w * mn * b[n];
    }
  }
  if (mm.basis == DensityBasis::Chebyshev) sum /= kPi * std::sqrt(w * w - a * a);
  return sum;
}

DensityCurve chebyshev_density(const MomentTable& m, const HighFloat& half_width, unsigned order,
                               const std::vector<double>& grid) {
  return make_curve(m, half_width, order, grid, DensityBasis::Chebyshev);
}

DensityCurve legendre_density(const MomentTable& m, const HighFloat& half_width, unsigned order,
                              const std::vector<double>& grid) {
  return make_curve(m, half_width, order, grid, DensityBasis::Legendre);
}

std::vector<double> symmetric_grid(double half_width, unsigned count) {
  if (count < 2) throw ParameterError("grid needs at least two points");
  const unsigned half = count / 2;
  const double step = 2 * half_width / count;
  std::vector<double> positive;
  for (unsigned i = 0; i < half; ++i) positive.push_back(count % 2 == 0 ? (i + 0.5) * step : (i + 1) * step);
  std::vector<double> grid;
  for (auto it = positive.rbegin(); it != positive.rend(); ++it) grid.push_back(-*it);
  if (count % 2 == 1) grid.push_back(0.0);
  grid.insert(grid.end(), positive.begin(), positive.end());
  return grid;
}

double integrate_density(const ModifiedMoments& mm) {
  const double w = static_cast<double>(mm.half_width);
  boost::math::quadrature::tanh_sinh<double> integrator;
  // Half the interval by symmetry; the endpoint singularity sits at w.
  return 2 * integrator.integrate([&](double t) { return t < w ? density_at(mm, t) : 0.0; }, 0.0, w, 1e-13);
}

double max_on(const DensityCurve& c, double lo, double hi) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& [t, rho] : c.points) {
    if (std::abs(t) >= lo && std::abs(t) <= hi) best = std::max(best, rho);
  }
  return best;
}

void write_plot_data(const DensityCurve& c, std::ostream& out, bool csv) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::setprecision(12);
  if (csv) out << "t,rho\n";
  for (const auto& [t, rho] : c.points) out << t << (csv ? "," : " ") << rho << '\n';
  out.flags(flags);
  out.precision(precision);
}

}  // namespace thompson
