#include "thompson/specnorm.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "thompson/errors.hpp"

namespace thompson {

namespace {

// μ_k of the symmetric measure: m_{k/2} for even k, zero otherwise.
std::vector<mpq_class> interleaved(const MomentTable& m, std::size_t count) {
  std::vector<mpq_class> mu(count, 0);
  for (std::size_t k = 0; k < count; k += 2) mu[k] = m.m.at(k / 2);
  return mu;
}

}  // namespace

HankelSeq hankel_dets(const MomentTable& m) {
  if (m.m.empty()) throw ParameterError("empty moment table");
  const std::size_t size = m.horizon() + 1;
  const auto mu = interleaved(m, 2 * size - 1);
  // Clear denominators so the elimination stays in the integers.
  mpz_class l = 1;
  for (const auto& v : mu) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den().get_mpz_t());
  std::vector<std::vector<mpz_class>> a(size, std::vector<mpz_class>(size));
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = 0; j < size; ++j) {
      const mpq_class v = mu[i + j] * l;
      a[i][j] = v.get_num();
    }
  }
  // Bareiss: after step k the pivot a[k][k] is the leading minor of order
  // k + 1, and every division is exact.
  HankelSeq h;
  mpz_class previous = 1;
  mpq_class scale = 1;
  for (std::size_t k = 0; k < size; ++k) {
    scale /= l;
    const mpz_class pivot = a[k][k];
    if (pivot == 0) {
      h.degenerate = true;
      break;
    }
    mpq_class dk = mpq_class(pivot) * scale;
    dk.canonicalize();
    h.d.push_back(dk);
    for (std::size_t i = k + 1; i < size; ++i) {
      for (std::size_t j = k + 1; j < size; ++j) {
        a[i][j] = a[i][j] * pivot - a[i][k] * a[k][j];
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), previous.get_mpz_t());
      }
    }
    previous = pivot;
  }
  return h;
}

std::vector<HighFloat> alphas(const HankelSeq& h) {
  std::vector<HighFloat> out;
  for (std::size_t n = 1; n < h.d.size(); ++n) {
    const mpq_class before = n >= 2 ? h.d[n - 2] : mpq_class(1);
    const mpq_class radicand = before * h.d[n] / (h.d[n - 1] * h.d[n - 1]);
    if (radicand < 0) {
      throw IntegrityError("negative radicand for alpha_" + std::to_string(n), "Hankel determinants");
    }
    out.push_back(boost::multiprecision::sqrt(to_high(radicand)));
  }
  return out;
}

std::vector<HighFloat> alphas_by_recurrence(const MomentTable& m) {
  const std::size_t n = m.horizon() + 1;
  const auto exact = interleaved(m, 2 * n);
  std::vector<HighFloat> mu;
  for (const auto& v : exact) mu.push_back(to_high(v));
  // Modified moments σ_{k,l} = L(π_k t^l) of the monic orthogonal polynomials.
  std::vector<HighFloat> older(2 * n, HighFloat(0));
  std::vector<HighFloat> old = mu;
  std::vector<HighFloat> a{mu[1] / mu[0]};
  std::vector<HighFloat> b{mu[0]};
  std::vector<HighFloat> out;
  for (std::size_t k = 1; k < n; ++k) {
    std::vector<HighFloat> cur(2 * n, HighFloat(0));
    for (std::size_t l = k; l + k + 1 <= 2 * n; ++l) {
      cur[l] = old[l + 1] - a[k - 1] * old[l] - b[k - 1] * older[l];
    }
    if (cur[k] <= 0) break;
    a.push_back(cur[k + 1] / cur[k] - old[k] / old[k - 1]);
    b.push_back(cur[k] / old[k - 1]);
    out.push_back(boost::multiprecision::sqrt(b.back()));
    older = std::move(old);
    old = std::move(cur);
  }
  return out;
}

HighFloat jacobi_top_eigenvalue(const std::vector<HighFloat>& alpha, std::size_t n, const HighFloat& tolerance) {
  if (n == 0 || n > alpha.size()) throw ParameterError("jacobi_top_eigenvalue needs 1 <= n <= number of alphas");
  // Number of eigenvalues below x, from the signs of the LDLᵀ pivots.
  const HighFloat tiny = std::numeric_limits<HighFloat>::min();
  const auto below = [&](const HighFloat& x) {
    std::size_t count = 0;
    HighFloat q = -x;
    for (std::size_t i = 0;; ++i) {
      if (q == 0) q = -tiny;
      if (q < 0) ++count;
      if (i == n) break;
      q = -x - alpha[i] * alpha[i] / q;
    }
    return count;
  };
  HighFloat hi = 0;
  for (std::size_t i = 0; i <= n; ++i) {
    const HighFloat left = i > 0 ? alpha[i - 1] : HighFloat(0);
    const HighFloat right = i < n ? alpha[i] : HighFloat(0);
    hi = std::max(hi, HighFloat(left + right));
  }
  HighFloat lo = 0;
  hi += 1;
  while (hi - lo > tolerance) {
    const HighFloat mid = (lo + hi) / 2;
    if (below(mid) == n + 1) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return (lo + hi) / 2;
}

std::vector<EstimatorRow> estimator_table(const MomentTable& m) {
  const HankelSeq h = hankel_dets(m);
  const auto alpha = alphas(h);
  std::vector<EstimatorRow> rows;
  const HighFloat slack("1e-9");
  for (std::size_t n = 1; n <= alpha.size(); ++n) {
    EstimatorRow r;
    r.n = static_cast<unsigned>(n);
    const HighFloat mn = to_high(m.m[n]);
    r.root = boost::multiprecision::pow(mn, HighFloat(1) / (2 * n));
    r.ratio = boost::multiprecision::sqrt(mn / to_high(m.m[n - 1]));
    r.alpha = alpha[n - 1];
    r.lambda_max = jacobi_top_eigenvalue(alpha, n);
    if (n >= 2) r.bracket = alpha[n - 2] + alpha[n - 1];
    if (r.root > r.ratio + slack || r.ratio > r.lambda_max + slack) {
      throw InputCorruptionError("row " + std::to_string(n) + " breaks root <= ratio <= lambda_max");
    }
    if (!rows.empty()) {
      const EstimatorRow& p = rows.back();
      if (r.root + slack < p.root || r.ratio + slack < p.ratio || r.lambda_max + slack < p.lambda_max) {
        throw InputCorruptionError("row " + std::to_string(n) + " decreases a lower-bound column");
      }
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

bool matches_printed(const HighFloat& value, const std::string& printed) {
  std::string text = printed;
  if (!text.empty() && text.back() == '.') text += '0';
  return boost::multiprecision::abs(value - HighFloat(text)) <= HighFloat("5e-6");
}

namespace {

using Params = std::array<long double, 4>;  // a, ln b, ln(n₁ − c), ln d

struct Model {
  const std::vector<double>& y;
  unsigned n1;

  // Residuals and Jacobian at p; returns the sum of squares.
  long double evaluate(const Params& p, std::vector<long double>& r, std::vector<Params>* jac) const {
    const long double b = std::exp(p[1]);
    const long double gap = std::exp(p[2]);
    const long double d = std::exp(p[3]);
    long double ss = 0;
    r.resize(y.size());
    if (jac) jac->resize(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
      const long double x = gap + static_cast<long double>(i);  // n − c
      const long double g = std::pow(x, -d);
      r[i] = p[0] - b * g - y[i];
      ss += r[i] * r[i];
      if (jac) (*jac)[i] = {1.0L, -b * g, b * d * g / x * gap, b * g * std::log(x) * d};
    }
    return ss;
  }
};

bool solve4(std::array<std::array<long double, 5>, 4> m, Params& x) {
  for (int c = 0; c < 4; ++c) {
    int best = c;
    for (int r = c + 1; r < 4; ++r) {
      if (std::abs(m[r][c]) > std::abs(m[best][c])) best = r;
    }
    if (m[best][c] == 0) return false;
    std::swap(m[c], m[best]);
    for (int r = 0; r < 4; ++r) {
      if (r == c) continue;
      const long double f = m[r][c] / m[c][c];
      for (int k = c; k < 5; ++k) m[r][k] -= f * m[c][k];
    }
  }
  for (int c = 0; c < 4; ++c) x[c] = m[c][4] / m[c][c];
  return true;
}

// Damped Gauss-Newton (Levenberg-Marquardt) from a start point. Parameter
// `frozen` (or −1) is held fixed.
long double refine(const Model& model, Params& p, int frozen) {
  std::vector<long double> r, trial_r;
  std::vector<Params> jac;
  long double ss = model.evaluate(p, r, &jac);
  long double lambda = 1e-3L;
  for (int iter = 0; iter < 2000 && ss > 0; ++iter) {
    std::array<std::array<long double, 5>, 4> normal{};
    for (std::size_t i = 0; i < r.size(); ++i) {
      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) normal[a][b] += jac[i][a] * jac[i][b];
        normal[a][4] -= jac[i][a] * r[i];
      }
    }
    if (frozen >= 0) {
      for (int a = 0; a < 4; ++a) normal[a][frozen] = normal[frozen][a] = 0;
      normal[frozen][frozen] = 1;
      normal[frozen][4] = 0;
    }
    bool improved = false;
    while (lambda < 1e16L) {
      auto damped = normal;
      for (int a = 0; a < 4; ++a) damped[a][a] += lambda * std::max(normal[a][a], 1e-30L);
      Params step;
      if (!solve4(damped, step)) {
        lambda *= 10;
        continue;
      }
      Params trial = p;
      for (int a = 0; a < 4; ++a) trial[a] += step[a];
      const long double trial_ss = model.evaluate(trial, trial_r, nullptr);
      if (std::isfinite(trial_ss) && trial_ss < ss) {
        const long double drop = ss - trial_ss;
        p = trial;
        ss = model.evaluate(p, r, &jac);
        lambda = std::max(lambda / 10, 1e-12L);
        improved = true;
        if (drop <= ss * 1e-18L + 1e-40L) return ss;
        break;
      }
      lambda *= 10;
    }
    if (!improved) break;
  }
  return ss;
}

}  // namespace

double fit_residual(const std::vector<double>& values, unsigned window_start, double a, double b, double c, double d) {
  long double ss = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const long double r = a - b * std::pow(static_cast<long double>(window_start + i) - c, -d) - values[i];
    ss += r * r;
  }
  return static_cast<double>(std::sqrt(ss / values.size()));
}

FitResult extrapolate_fit(const std::vector<double>& values, unsigned window_start, std::optional<double> fixed_c) {
  if (values.size() < 5) throw ParameterError("the fit window needs at least 5 values");
  if (fixed_c && !(*fixed_c < window_start)) throw ParameterError("the shift c must lie below the fit window");
  const Model model{values, window_start};
  std::vector<long double> r;
  Params best{};
  long double best_ss = std::numeric_limits<long double>::infinity();
  std::size_t starts = 0;
  std::vector<long double> gaps;
  if (fixed_c) {
    gaps.push_back(window_start - static_cast<long double>(*fixed_c));
  } else {
    for (long double gap = 0.25L; gap <= 64; gap *= 1.4L) gaps.push_back(gap);
  }
  for (const long double gap : gaps) {
    for (long double d = 0.1L; d <= 4; d *= 1.25L) {
      // For fixed (c, d) the model is linear in (a, b).
      long double sg = 0, sgg = 0, sy = 0, sgy = 0;
      const long double k = static_cast<long double>(values.size());
      for (std::size_t i = 0; i < values.size(); ++i) {
        const long double g = std::pow(gap + static_cast<long double>(i), -d);
        sg += g;
        sgg += g * g;
        sy += values[i];
        sgy += g * values[i];
      }
      const long double det = k * sgg - sg * sg;
      if (det == 0) continue;
      const long double a = (sgg * sy - sg * sgy) / det;
      const long double b = -(k * sgy - sg * sy) / det;
      if (!(b > 0)) continue;
      Params p{a, std::log(b), std::log(gap), std::log(d)};
      ++starts;
      const long double ss = refine(model, p, fixed_c ? 2 : -1);
      if (std::isfinite(ss) && ss < best_ss) {
        best_ss = ss;
        best = p;
      }
    }
  }
  if (!std::isfinite(best_ss)) {
    std::ostringstream msg;
    msg << "power-law fit failed from all " << starts << " starts over n = " << window_start << ".."
        << window_start + values.size() - 1;
    throw ConvergenceError(msg.str());
  }
  FitResult f;
  f.a = static_cast<double>(best[0]);
  f.b = static_cast<double>(std::exp(best[1]));
  f.c = static_cast<double>(window_start - std::exp(best[2]));
  f.d = static_cast<double>(std::exp(best[3]));
  f.residual = static_cast<double>(std::sqrt(best_ss / values.size()));
  f.window_start = window_start;
  f.window_end = window_start + static_cast<unsigned>(values.size()) - 1;
  f.at_boundary = f.d < 0.05;
  return f;
}

}  // namespace thompson
