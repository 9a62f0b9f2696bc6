#include <doctest.h>

#include "thompson/errors.hpp"
#include "thompson/freeprob.hpp"
#include "thompson/golden.hpp"
#include "thompson/momentbridge.hpp"

using namespace thompson;

namespace {

std::vector<mpz_class> zeta_column() {
  std::vector<mpz_class> z;
  for (const auto& row : golden::zeta_moments()) z.push_back(row.zeta);
  return z;
}

mpq_class q(long num, long den = 1) {
  mpq_class r(num, den);
  r.canonicalize();
  return r;
}

}  // namespace

TEST_CASE("substitution coefficients") {
  const auto c = cheb_subst_coeffs(6);
  CHECK(c[0] == std::vector<mpq_class>{1});
  CHECK(c[1] == std::vector<mpq_class>{q(-5, 2), 6});
  CHECK(c[2] == std::vector<mpq_class>{q(13, 2), -60, 72});
  // Leading coefficient 6^n 2^(n−1).
  mpq_class lead = 6;
  for (unsigned n = 1; n <= 6; ++n) {
    CHECK(c[n].size() == n + 1);
    CHECK(c[n].back() == lead);
    lead *= 12;
  }
}

TEST_CASE("reference zeta column gives the reference moments") {
  const auto rows = golden::zeta_moments();
  REQUIRE(rows.size() == 28);
  const MomentTable t = zeta_to_moments(zeta_column());
  CHECK(t.m[0] == q(1, 4));
  REQUIRE(t.horizon() == 28);
  for (unsigned n = 1; n <= 28; ++n) {
    CAPTURE(n);
    CHECK(t.m[n] == mpq_class(rows[n - 1].m));
  }
  const auto back = moments_to_zeta(t);
  for (unsigned n = 1; n <= 28; ++n) CHECK(back[n - 1] == mpq_class(rows[n - 1].zeta));
}

TEST_CASE("free moments have vanishing cyclic numbers") {
  const auto free = free_moments(5);
  const auto z = moments_to_zeta(make_moment_table(MomentConvention::TwoProjections, free));
  for (const auto& v : z) CHECK(v == 0);
  // And zeta_to_moments of zeros reproduces them.
  const MomentTable t = zeta_to_moments(std::vector<mpz_class>(5, 0));
  for (unsigned n = 1; n <= 5; ++n) CHECK(t.m[n] == mpq_class(free[n - 1]));
}

TEST_CASE("inconsistent zeta input is rejected") {
  std::vector<mpz_class> z = zeta_column();
  z.resize(6);
  // An integer shift of ζ_n moves m_n by the same amount, so only a
  // non-positive moment exposes a broken column.
  z[4] += 1;
  CHECK(zeta_to_moments(z).m[5] == mpq_class(golden::zeta_moments()[4].m + 1));
  z[4] = -3000;
  CHECK_THROWS_AS(zeta_to_moments(z), InputCorruptionError);
}

TEST_CASE("general two-projection formula") {
  const TwoProjParams p{q(1, 3), q(1, 4)};
  const MomentTable t = zeta_to_moments(zeta_column());
  // ∫ t^k dν = 2 m_k / 12^k for this choice of traces.
  std::vector<mpq_class> nu;
  mpq_class scale = 1;
  for (unsigned k = 0; k <= 10; ++k) {
    nu.push_back(2 * t.m[k] / scale);
    scale *= 12;
  }
  CHECK(general_cyclic_from_moments(p, nu, 0) == 1);
  mpq_class twelve_n = 1;
  const auto rows = golden::zeta_moments();
  for (unsigned n = 1; n <= 8; ++n) {
    twelve_n *= 12;
    CAPTURE(n);
    CHECK(general_cyclic_from_moments(p, nu, n) * twelve_n == mpq_class(rows[n - 1].zeta));
  }

  nu[0] += 1;
  CHECK_THROWS_AS(general_cyclic_from_moments(p, nu, 3), ParameterError);
  CHECK_THROWS_AS(validate(TwoProjParams{q(1, 4), q(1, 3)}), ParameterError);
  CHECK_THROWS_AS(validate(TwoProjParams{q(2, 3), q(1, 3)}), ParameterError);
}

TEST_CASE("equal traces drop the difference atom") {
  const TwoProjParams p{q(1, 3), q(1, 3)};
  CHECK(atom_weights(p).mu10_minus_mu01 == 0);
  // ν = (1/3)δ_{1/4} + (1/3)δ_{3/4}: exact and double routes agree.
  const std::vector<std::pair<double, double>> atoms{{0.25, 1.0 / 3}, {0.75, 1.0 / 3}};
  for (unsigned n = 0; n <= 7; ++n) {
    std::vector<mpq_class> nu;
    for (unsigned k = 0; k <= n; ++k) {
      mpq_class a = 1, b = 1;
      for (unsigned j = 0; j < k; ++j) {
        a *= q(1, 4);
        b *= q(3, 4);
      }
      nu.push_back((a + b) / 3);
    }
    const double exact = general_cyclic_from_moments(p, nu, n).get_d();
    CHECK(general_cyclic_from_atoms(p, atoms, n) == doctest::Approx(exact).epsilon(1e-12));
  }
  CHECK_THROWS_AS(general_cyclic_from_atoms(p, {{0.5, 0.1}}, 2), ParameterError);
}
