#pragma once

#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "thompson/highfloat.hpp"
#include "thompson/momentbridge.hpp"

namespace thompson {

// Leading principal minors D_n = det[μ_{i+j}]_{i,j=0..n} of the Hankel matrix
// of the symmetric measure whose even moments are m_k (odd moments zero).
// D_{−1} = 1 is implicit. If a minor vanishes before the horizon the measure
// has finite support; the sequence stops there and `degenerate` is set.
struct HankelSeq {
  std::vector<mpq_class> d;  // D_0 .. D_K
  bool degenerate = false;
};

HankelSeq hankel_dets(const MomentTable& m);

// α_n = √(D_{n−2} D_n / D_{n−1}²), n = 1..K; index 0 holds α_1.
std::vector<HighFloat> alphas(const HankelSeq& h);

// The same coefficients from the moments by Chebyshev's algorithm (the
// three-term recurrence of the monic orthogonal polynomials), in floating
// point only. Used as a cross-check.
std::vector<HighFloat> alphas_by_recurrence(const MomentTable& m);

// Largest eigenvalue of the zero-diagonal tridiagonal matrix with
// off-diagonal entries α_1..α_n, by bisection on Sturm counts.
HighFloat jacobi_top_eigenvalue(const std::vector<HighFloat>& alpha, std::size_t n,
                                const HighFloat& tolerance = HighFloat("1e-40"));

struct EstimatorRow {
  unsigned n = 0;
  HighFloat root;        // m_n^(1/2n)
  HighFloat ratio;       // √(m_n / m_{n−1})
  HighFloat alpha;       // α_n
  HighFloat lambda_max;  // λ_max(M_n)
  std::optional<HighFloat> bracket;  // α_{n−1} + α_n, n ≥ 2
};

// All rows n = 1..N. Throws InputCorruptionError if root ≤ ratio ≤ λ_max or
// the monotonicity of the three lower bounds fails (1e−9 slack).
std::vector<EstimatorRow> estimator_table(const MomentTable& m);

// |value − printed| ≤ 5e−6, the rounding slack of a 5-decimal table entry.
bool matches_printed(const HighFloat& value, const std::string& printed);

// Least-squares fit of f(n) = a − b (n − c)^(−d), b, d > 0, c < window start.
struct FitResult {
  double a = 0, b = 0, c = 0, d = 0;
  double residual = 0;  // root-mean-square
  unsigned window_start = 0, window_end = 0;
  // The best fit ran into d → 0, where a is poorly determined.
  bool at_boundary = false;
};

// `values[i]` belongs to n = window_start + i. Multi-start damped
// Gauss-Newton over a (c, d) grid; returns the lowest residual found. With
// `fixed_c` the shift is held and only a, b, d are fitted.
FitResult extrapolate_fit(const std::vector<double>& values, unsigned window_start,
                          std::optional<double> fixed_c = std::nullopt);

// Root-mean-square residual of given parameters on the data.
double fit_residual(const std::vector<double>& values, unsigned window_start, double a, double b, double c, double d);

}  // namespace thompson
