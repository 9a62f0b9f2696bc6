#include "thompson/momentbridge.hpp"

#include <cmath>

#include "thompson/errors.hpp"

namespace thompson {

namespace {

using Poly = std::vector<mpq_class>;

// a·p + b·(t − shift)·p for polynomials in t.
Poly times_linear(const Poly& p, const mpq_class& slope, const mpq_class& shift) {
  Poly out(p.size() + 1, 0);
  for (std::size_t k = 0; k < p.size(); ++k) {
    out[k + 1] += slope * p[k];
    out[k] -= slope * shift * p[k];
  }
  return out;
}

Poly combine(const Poly& a, const Poly& b, const mpq_class& b_factor) {
  Poly out(std::max(a.size(), b.size()), 0);
  for (std::size_t k = 0; k < a.size(); ++k) out[k] += a[k];
  for (std::size_t k = 0; k < b.size(); ++k) out[k] += b_factor * b[k];
  return out;
}

mpq_class pow_q(const mpq_class& x, unsigned n) {
  mpq_class out = 1;
  for (unsigned k = 0; k < n; ++k) out *= x;
  return out;
}

mpq_class constant_term(int n) {
  // (5 + (−2)^n) / 12
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(n));
  if (n % 2 == 1) p = -p;
  mpq_class out(5 + p, 12);
  out.canonicalize();
  return out;
}

}  // namespace

MomentTable make_moment_table(MomentConvention convention, const std::vector<mpz_class>& m1_to_mN) {
  MomentTable t;
  t.convention = convention;
  t.m.push_back(convention == MomentConvention::TwoProjections ? mpq_class(1, 4) : mpq_class(1));
  for (const auto& v : m1_to_mN) t.m.emplace_back(v);
  return t;
}

std::vector<std::vector<mpq_class>> cheb_subst_coeffs(unsigned n_max) {
  // P_0 = 1, P_1 = 6u, P_{n+1} = 12u P_n − 6 P_{n−1} with u = t − 5/12.
  const mpq_class shift(5, 12);
  std::vector<Poly> rows;
  rows.push_back({1});
  if (n_max >= 1) rows.push_back(times_linear(rows[0], 6, shift));
  for (unsigned n = 1; n < n_max; ++n) {
    rows.push_back(combine(times_linear(rows[n], 12, shift), rows[n - 1], -6));
  }
  for (auto& row : rows) {
    for (auto& c : row) c.canonicalize();
  }
  return rows;
}

MomentTable zeta_to_moments(const std::vector<mpz_class>& zetas) {
  const auto n_max = static_cast<unsigned>(zetas.size());
  const auto c = cheb_subst_coeffs(n_max);
  MomentTable t;
  t.convention = MomentConvention::TwoProjections;
  t.m.push_back(mpq_class(1, 4));
  mpq_class scale = 1;  // 12^n
  for (unsigned n = 1; n <= n_max; ++n) {
    scale *= 12;
    // Σ_{k<n} c_{n,k} m_k / 12^k
    mpq_class partial = 0;
    mpq_class inv = 1;
    for (unsigned k = 0; k < n; ++k) {
      partial += c[n][k] * t.m[k] * inv;
      inv /= 12;
    }
    const mpq_class lhs = mpq_class(zetas[n - 1]) - constant_term(static_cast<int>(n));
    mpq_class m = (lhs / 2 - partial) * scale / c[n][n];
    m.canonicalize();
    if (m.get_den() != 1 || m <= 0) {
      throw InputCorruptionError("moment m_" + std::to_string(n) + " = " + m.get_str() +
                                 " is not a positive integer; the zeta column is inconsistent");
    }
    t.m.push_back(m);
  }
  return t;
}

std::vector<mpq_class> moments_to_zeta(const MomentTable& table) {
  const auto n_max = static_cast<unsigned>(table.horizon());
  const auto c = cheb_subst_coeffs(n_max);
  std::vector<mpq_class> out;
  for (unsigned n = 1; n <= n_max; ++n) {
    mpq_class sum = 0;
    mpq_class inv = 1;
    for (unsigned k = 0; k <= n; ++k) {
      sum += c[n][k] * table.m[k] * inv;
      inv /= 12;
    }
    mpq_class z = 2 * sum + constant_term(static_cast<int>(n));
    z.canonicalize();
    out.push_back(z);
  }
  return out;
}

void validate(const TwoProjParams& p) {
  if (!(p.beta > 0 && p.beta <= p.alpha && p.alpha <= mpq_class(1, 2))) {
    throw ParameterError("projection traces must satisfy 0 < beta <= alpha <= 1/2");
  }
}

AtomWeights atom_weights(const TwoProjParams& p) {
  validate(p);
  return {1 - p.alpha - p.beta, p.alpha - p.beta};
}

namespace {

// Coefficients in t of G_n(t − α − β + 2αβ) where G_0 = 1, G_1 = y/2 and
// G_{k+1} = y G_k − s G_{k−1}, i.e. G_n(y) = s^(n/2) T_n(y / (2√s)).
Poly chebyshev_term(const TwoProjParams& p, unsigned n) {
  const mpq_class s = p.alpha * (1 - p.alpha) * p.beta * (1 - p.beta);
  const mpq_class shift = p.alpha + p.beta - 2 * p.alpha * p.beta;
  Poly prev{1};
  if (n == 0) return prev;
  Poly cur = times_linear(prev, mpq_class(1, 2), shift);
  for (unsigned k = 1; k < n; ++k) {
    Poly next = combine(times_linear(cur, 1, shift), prev, -s);
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

}  // namespace

mpq_class general_cyclic_from_moments(const TwoProjParams& p, const std::vector<mpq_class>& nu_moments,
                                      unsigned n) {
  const AtomWeights w = atom_weights(p);
  if (nu_moments.size() < n + 1) throw ParameterError("need the moments of nu up to order n");
  if (nu_moments[0] != 2 * p.beta) throw ParameterError("nu must have total mass 2*beta");
  const Poly g = chebyshev_term(p, n);
  mpq_class integral = 0;
  for (std::size_t k = 0; k < g.size(); ++k) integral += g[k] * nu_moments[k];
  mpq_class out = pow_q(p.alpha * p.beta, n) * w.mu00 + pow_q(-p.beta * (1 - p.alpha), n) * w.mu10_minus_mu01 + integral;
  out.canonicalize();
  return out;
}

double general_cyclic_from_atoms(const TwoProjParams& p, const std::vector<std::pair<double, double>>& atoms,
                                 unsigned n, double mass_tolerance) {
  const AtomWeights w = atom_weights(p);
  const double alpha = p.alpha.get_d();
  const double beta = p.beta.get_d();
  double mass = 0;
  for (const auto& [t, m] : atoms) {
    if (t < 0 || t > 1 || m < 0) throw ParameterError("nu must be a positive measure on [0,1]");
    mass += m;
  }
  if (std::abs(mass - 2 * beta) > mass_tolerance) throw ParameterError("nu must have total mass 2*beta");
  const double s = alpha * (1 - alpha) * beta * (1 - beta);
  const double shift = alpha + beta - 2 * alpha * beta;
  double integral = 0;
  for (const auto& [t, m] : atoms) {
    const double y = t - shift;
    double prev = 1;
    double cur = y / 2;
    if (n == 0) cur = 1;
    for (unsigned k = 1; k < n; ++k) {
      const double next = y * cur - s * prev;
      prev = cur;
      cur = next;
    }
    integral += m * cur;
  }
  return std::pow(alpha * beta, n) * w.mu00.get_d() + std::pow(-beta * (1 - alpha), n) * w.mu10_minus_mu01.get_d() +
         integral;
}

}  // namespace thompson
