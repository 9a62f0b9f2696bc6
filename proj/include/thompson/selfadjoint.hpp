#pragma once

#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "thompson/group_ring.hpp"
#include "thompson/momentbridge.hpp"

namespace thompson {

// A symmetric generating multiset S and h = Σ_{s∈S} s. q = |S| − 1.
struct GeneratorSet {
  std::vector<Letter> letters;
  unsigned q() const noexcept { return static_cast<unsigned>(letters.size()) - 1; }
};

// {C, D, C⁻¹, D⁻¹}, q = 3.
GeneratorSet standard_generators();

// h_0 = e, h_1 = h, h_2 = h h_1 − (q+1) h_0, h_{n+1} = h h_n − q h_{n−1}.
class ChebyshevSequence {
 public:
  ChebyshevSequence(GeneratorSet generators, std::size_t memory_budget, unsigned threads = 1);

  // Index of the current term.
  unsigned n() const noexcept { return n_; }
  const GroupRingVector& current() const noexcept { return current_; }
  // Advances to h_{n+1}. Throws ResourceError, with the estimate, if the next
  // term would not fit in the memory budget.
  const GroupRingVector& step();

 private:
  GroupRingVector times_h(const GroupRingVector& v) const;

  GeneratorSet generators_;
  std::size_t budget_;
  unsigned threads_;
  unsigned n_ = 0;
  GroupRingVector previous_;
  GroupRingVector current_;
};

struct CogrowthRecord {
  unsigned n = 0;
  mpz_class norm_sq, xi, eta, zeta, m;
};

// ξ_n = ‖h_n‖² − (q+1)q^(n−1), η_n = ξ_n − (q−1)(ξ_1 + … + ξ_{n−1}),
// ζ_n = η_n − (q−1)(η_1 + … + η_{n−1}),
// m_n = C(2n,n) q^n + Σ_{k=1}^n C(2n,n−k)(ζ_k + 1 − q) q^(n−k).
// `norms_sq` holds ‖h_1‖²..‖h_N‖².
std::vector<CogrowthRecord> chain_transform(const std::vector<mpz_class>& norms_sq, unsigned q);

// Inverse direction of the partial-sum steps, for round-trip checks.
std::vector<mpz_class> xi_from_eta(const std::vector<mpz_class>& eta, unsigned q);
std::vector<mpz_class> eta_from_zeta(const std::vector<mpz_class>& zeta, unsigned q);

// ‖h_1‖²..‖h_N‖² by the recursion.
std::vector<mpz_class> cogrowth_norms(const GeneratorSet& generators, unsigned n_max, std::size_t memory_budget,
                                      unsigned threads = 1,
                                      const std::function<void(std::string_view)>& log = {});

// Full chain for the standard generators, as a moment table with m_0 = 1.
MomentTable generator_sum_moments(unsigned n_max, std::size_t memory_budget, unsigned threads = 1);

}  // namespace thompson
