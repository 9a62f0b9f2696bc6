#include "thompson/selfadjoint.hpp"

#include <thread>

#include "thompson/errors.hpp"

namespace thompson {

GeneratorSet standard_generators() { return {{Letter::C, Letter::D, Letter::Cinv, Letter::Dinv}}; }

ChebyshevSequence::ChebyshevSequence(GeneratorSet generators, std::size_t memory_budget, unsigned threads)
    : generators_(std::move(generators)), budget_(memory_budget), threads_(std::max(1u, threads)) {
  if (generators_.letters.size() < 2) throw ParameterError("need at least two generators");
  current_ = GroupRingVector::identity();
}

GroupRingVector ChebyshevSequence::times_h(const GroupRingVector& v) const {
  const std::size_t k = generators_.letters.size();
  std::vector<GroupRingVector> parts(k);
  if (threads_ == 1) {
    for (std::size_t i = 0; i < k; ++i) parts[i] = v.left_mul(generators_.letters[i]);
  } else {
    std::vector<std::thread> workers;
    for (unsigned t = 0; t < threads_; ++t) {
      workers.emplace_back([&, t] {
        for (std::size_t i = t; i < k; i += threads_) parts[i] = v.left_mul(generators_.letters[i]);
      });
    }
    for (auto& w : workers) w.join();
  }
  // Summed in generator order, so the result does not depend on threads.
  GroupRingVector sum;
  for (const auto& p : parts) sum += p;
  return sum;
}

const GroupRingVector& ChebyshevSequence::step() {
  std::size_t key_bytes = 0;
  for (const auto& [key, c] : current_.terms()) key_bytes = std::max(key_bytes, key.size());
  const std::size_t k = generators_.letters.size();
  // The products, their sum and the two retained terms coexist.
  const std::size_t estimate = estimate_group_ring_bytes(current_.size() * k * 2, key_bytes + 2) +
                               current_.memory_bytes() + previous_.memory_bytes();
  if (estimate > budget_) {
    throw ResourceError("h_" + std::to_string(n_ + 1) + " needs about " + std::to_string(estimate >> 20) +
                        " MiB, budget is " + std::to_string(budget_ >> 20) + " MiB");
  }
  GroupRingVector next = times_h(current_);
  if (n_ >= 1) {
    const unsigned factor = n_ == 1 ? generators_.q() + 1 : generators_.q();
    next -= previous_.scaled(factor);
  }
  previous_ = std::move(current_);
  current_ = std::move(next);
  ++n_;
  return current_;
}

namespace {

mpz_class pow_ui(unsigned base, unsigned e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, e);
  return r;
}

mpz_class binomial(unsigned n, unsigned k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

// x_n − (q−1)(x_1 + … + x_{n−1}).
std::vector<mpz_class> subtract_partial_sums(const std::vector<mpz_class>& x, unsigned q) {
  std::vector<mpz_class> out;
  mpz_class sum = 0;
  for (const auto& v : x) {
    out.push_back(v - (q - 1) * sum);
    sum += v;
  }
  return out;
}

std::vector<mpz_class> add_partial_sums(const std::vector<mpz_class>& y, unsigned q) {
  std::vector<mpz_class> out;
  mpz_class sum = 0;
  for (const auto& v : y) {
    out.push_back(v + (q - 1) * sum);
    sum += out.back();
  }
  return out;
}

}  // namespace

std::vector<CogrowthRecord> chain_transform(const std::vector<mpz_class>& norms_sq, unsigned q) {
  if (q < 1) throw ParameterError("q must be at least 1");
  std::vector<mpz_class> xi;
  for (std::size_t i = 0; i < norms_sq.size(); ++i) {
    xi.push_back(norms_sq[i] - (q + 1) * pow_ui(q, static_cast<unsigned>(i)));
  }
  const auto eta = subtract_partial_sums(xi, q);
  const auto zeta = subtract_partial_sums(eta, q);
  std::vector<CogrowthRecord> out;
  for (unsigned n = 1; n <= norms_sq.size(); ++n) {
    CogrowthRecord r{n, norms_sq[n - 1], xi[n - 1], eta[n - 1], zeta[n - 1], 0};
    r.m = binomial(2 * n, n) * pow_ui(q, n);
    for (unsigned k = 1; k <= n; ++k) r.m += binomial(2 * n, n - k) * (zeta[k - 1] + 1 - q) * pow_ui(q, n - k);
    if (r.m <= 0) throw InputCorruptionError("moment m_" + std::to_string(n) + " is not positive");
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<mpz_class> xi_from_eta(const std::vector<mpz_class>& eta, unsigned q) { return add_partial_sums(eta, q); }
std::vector<mpz_class> eta_from_zeta(const std::vector<mpz_class>& zeta, unsigned q) {
  return add_partial_sums(zeta, q);
}

std::vector<mpz_class> cogrowth_norms(const GeneratorSet& generators, unsigned n_max, std::size_t memory_budget,
                                      unsigned threads, const std::function<void(std::string_view)>& log) {
  ChebyshevSequence seq(generators, memory_budget, threads);
  std::vector<mpz_class> out;
  while (seq.n() < n_max) {
    const GroupRingVector& h = seq.step();
    out.push_back(h.norm_squared());
    if (log) log("h_" + std::to_string(seq.n()) + ": " + std::to_string(h.size()) + " terms");
  }
  return out;
}

MomentTable generator_sum_moments(unsigned n_max, std::size_t memory_budget, unsigned threads) {
  const GeneratorSet g = standard_generators();
  const auto chain = chain_transform(cogrowth_norms(g, n_max, memory_budget, threads), g.q());
  std::vector<mpz_class> m;
  for (const auto& r : chain) m.push_back(r.m);
  return make_moment_table(MomentConvention::GeneratorSum, m);
}

}  // namespace thompson
