#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include "thompson/highfloat.hpp"
#include "thompson/momentbridge.hpp"

namespace thompson {

enum class DensityBasis { Chebyshev, Legendre };

// ∫ B_n(s/W) dμ(s), n = 0..2N, for the symmetric measure with even moments
// m_k. Odd entries are zero by construction and never evaluated.
struct ModifiedMoments {
  DensityBasis basis = DensityBasis::Chebyshev;
  HighFloat half_width;
  std::vector<HighFloat> values;
  // Indices whose value lost more than 30 orders of magnitude to
  // cancellation; the value is kept.
  std::vector<unsigned> cancellation;
};

ModifiedMoments power_to_modified_moments(const MomentTable& m, const HighFloat& half_width, DensityBasis basis,
                                          unsigned order);

// Coefficients of T_n or P_n in x, lowest degree first.
std::vector<mpq_class> basis_polynomial(DensityBasis basis, unsigned n);

// Truncated expansion of the density on (−W, W):
//   Chebyshev  ρ_N(t) = Σ c_n² M_n T_n(t/W) / (π √(W² − t²)),  c_0² = 1, c_n² = 2
//   Legendre   ρ′_N(t) = Σ (n + ½)/W · M_n P_n(t/W)
// Evaluated at |t|, so ρ(t) = ρ(−t) exactly. |t| ≥ W is a ParameterError.
// Note: the atom of the spectral measure at zero is not subtracted; with
// m_0 = 1/4 the expansion targets the remaining mass.
double density_at(const ModifiedMoments& mm, double t);

struct DensityCurve {
  DensityBasis basis = DensityBasis::Chebyshev;
  unsigned order = 0;
  double half_width = 0;
  std::vector<std::pair<double, double>> points;  // (t, ρ(t))
};

DensityCurve chebyshev_density(const MomentTable& m, const HighFloat& half_width, unsigned order,
                               const std::vector<double>& grid);
DensityCurve legendre_density(const MomentTable& m, const HighFloat& half_width, unsigned order,
                              const std::vector<double>& grid);

// `count` points strictly inside (−W, W), mirror-symmetric about zero.
std::vector<double> symmetric_grid(double half_width, unsigned count);

// ∫ ρ dt over (−W, W) by tanh-sinh quadrature.
double integrate_density(const ModifiedMoments& mm);

// Largest ρ on the grid points with lo ≤ |t| ≤ hi.
double max_on(const DensityCurve& c, double lo, double hi);

// "t ρ" lines, or CSV with a header row.
void write_plot_data(const DensityCurve& c, std::ostream& out, bool csv);

}  // namespace thompson
