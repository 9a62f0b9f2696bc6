#pragma once

#include <vector>

#include <gmpxx.h>

namespace thompson {

// Spectral measure of pq for free projections p, q with traces α ≥ β:
// a density on [−λ₁,−λ₂] ∪ [λ₂,λ₁] of total mass β plus an atom of mass
// 1 − β at zero. Requires 0 < β ≤ α < 1 and α + β < 1.
struct FreeMeasure {
  mpq_class alpha;
  mpq_class beta;
  double lambda1 = 0;
  double lambda2 = 0;
  double atom_mass = 0;
};

FreeMeasure make_free_measure(const mpq_class& alpha, const mpq_class& beta);

// ‖pq‖ = √(α(1−β)) + √(β(1−α)).
double free_norm(const mpq_class& alpha, const mpq_class& beta);

// Continuous part of the density; zero outside the open bands.
double free_density_at(const FreeMeasure& fm, double t);

// Mass of the continuous part, by tanh-sinh quadrature of the density over
// both bands. Throws ConvergenceError when the estimate misses `tolerance`.
double free_band_mass(const FreeMeasure& fm, double tolerance = 1e-11);

// Moments of the free case α = 1/3, β = 1/4 on the √12 scale, m_1..m_nMax,
// by the Catalan-number recursion. Index 0 of the result is m_1.
std::vector<mpz_class> free_moments(unsigned n_max);

// The same moments by quadrature of ∫ t^(2n)/π · √(24−(t²−5)²)/(t(12−t²)) dt
// over [√3−√2, √3+√2]. Throws ConvergenceError with the achieved error.
std::vector<double> free_moments_quadrature(unsigned n_max, double relative_tolerance = 1e-12);

}  // namespace thompson
