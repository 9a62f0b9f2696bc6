#pragma once

#include <utility>
#include <vector>

#include <gmpxx.h>

namespace thompson {

// Which operator the moments belong to. For h = (1/√12)(I+C+C²)(I+D+D²+D³)
// the sequence starts at m_0 = 1/4 (only the part of the spectral measure
// away from the kernel atom); for a sum of generators and inverses it starts
// at m_0 = 1.
enum class MomentConvention { TwoProjections, GeneratorSum };

struct MomentTable {
  MomentConvention convention = MomentConvention::TwoProjections;
  std::vector<mpq_class> m;  // m_0 .. m_N

  std::size_t horizon() const noexcept { return m.empty() ? 0 : m.size() - 1; }
};

MomentTable make_moment_table(MomentConvention convention, const std::vector<mpz_class>& m1_to_mN);

// Row n holds the coefficients (in t, lowest degree first) of
// 6^(n/2) T_n(√6 (t − 5/12)), n = 0..n_max.
std::vector<std::vector<mpq_class>> cheb_subst_coeffs(unsigned n_max);

// Solves ζ_n − (5 + (−2)^n)/12 = 2 Σ_k c_{n,k} m_k / 12^k for m_1..m_N with
// m_0 = 1/4. `zetas` holds ζ_1..ζ_N. Every m_n must be a positive integer;
// otherwise InputCorruptionError.
MomentTable zeta_to_moments(const std::vector<mpz_class>& zetas);
// The forward direction; returns ζ_1..ζ_N. Exact rationals, since arbitrary
// moment tables need not give integers.
std::vector<mpq_class> moments_to_zeta(const MomentTable& table);

// Traces α = τ(P), β = τ(Q) of two projections, 0 < β ≤ α ≤ 1/2.
struct TwoProjParams {
  mpq_class alpha;
  mpq_class beta;
};
void validate(const TwoProjParams& p);

// Atom weights of the joint spectral picture: μ_00 = 1 − α − β and
// μ_10 − μ_01 = α − β.
struct AtomWeights {
  mpq_class mu00;
  mpq_class mu10_minus_mu01;
};
AtomWeights atom_weights(const TwoProjParams& p);

// τ(((P − α)(Q − β))^n) from the moments ∫ t^k dν, k = 0..n, of the measure
// ν on [0,1] (total mass 2β, checked exactly):
//   (αβ)^n μ_00 + (−β(1−α))^n (μ_10 − μ_01) + ∫ s^(n/2) T_n((t − α − β + 2αβ)/(2√s)) dν,
// with s = α(1−α)β(1−β). The Chebyshev term is a polynomial in t with
// rational coefficients.
mpq_class general_cyclic_from_moments(const TwoProjParams& p, const std::vector<mpq_class>& nu_moments,
                                      unsigned n);

// Same quantity for a discrete ν given as (point, mass) pairs, in double
// precision. The total mass must equal 2β within `mass_tolerance`.
double general_cyclic_from_atoms(const TwoProjParams& p, const std::vector<std::pair<double, double>>& atoms,
                                 unsigned n, double mass_tolerance = 1e-12);

}  // namespace thompson
