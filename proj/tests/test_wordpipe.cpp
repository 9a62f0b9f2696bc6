#include <doctest.h>

#include <fstream>
#include <map>
#include <random>

#include "random_words.hpp"
#include "temp_dir.hpp"
#include "thompson/errors.hpp"
#include "thompson/golden.hpp"
#include "thompson/wordpipe.hpp"

using namespace thompson;
namespace fs = std::filesystem;

namespace {

PipelineOptions options_for(const fs::path& dir, unsigned threads = 1) {
  PipelineOptions o;
  o.workdir = dir;
  o.chunk_bytes = std::size_t{8} << 20;
  o.threads = threads;
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

mpz_class mass(const fs::path& p) { return verify_word_file(p).total_mass; }

mpz_class pow6(unsigned n) {
  mpz_class v;
  mpz_ui_pow_ui(v.get_mpz_t(), 6, n);
  return v;
}

}  // namespace

TEST_CASE("fast reverse-inverse agrees with the generic one") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    const DoubleTree x = testutil::random_element(rng);
    REQUIRE(fast_reverse_inverse(x) == reverse_inverse(x));
  }
}

TEST_CASE("first expansion step") {
  testutil::TempDir dir("pipe");
  WordPipeline pipe(options_for(dir.path()));
  WordFileReader r(pipe.ab_power(1));
  WordEntry e;
  std::vector<std::string> keys;
  while (r.next(e)) {
    CHECK(e.multiplicity == Multiplicity(1));
    keys.push_back(e.key);
  }
  CHECK(keys.size() == 6);
  // The six products, evaluated by generic composition.
  std::vector<std::string> expected;
  for (const auto& [c, d] : ab_products()) expected.push_back(serialize(compose(letter_element(c), letter_element(d))));
  std::sort(expected.begin(), expected.end());
  CHECK(keys == expected);

  // (ba)^1 holds the inverses.
  WordFileReader rb(pipe.ba_power(1));
  std::vector<std::string> inverted;
  while (rb.next(e)) inverted.push_back(e.key);
  std::vector<std::string> expected_inv;
  for (const auto& k : keys) expected_inv.push_back(serialize(inverse(deserialize(k))));
  std::sort(expected_inv.begin(), expected_inv.end());
  CHECK(inverted == expected_inv);
}

TEST_CASE("mass conservation and inversion") {
  testutil::TempDir dir("pipe");
  PipelineOptions o = options_for(dir.path());
  WordPipeline pipe(o);
  for (unsigned n = 0; n <= 6; ++n) CHECK(mass(pipe.ab_power(n)) == pow6(n));
  for (unsigned n = 1; n <= 6; ++n) {
    CHECK(mass(pipe.half(n)) * 2 == pow6(n));
    // Every half-file term lands in exactly one class.
    CHECK(mass(pipe.smaller(n, false)) + mass(pipe.equal(n, false)) == mass(pipe.half(n)));
    CHECK(mass(pipe.smaller(n, true)) + mass(pipe.equal(n, true)) == mass(pipe.half(n)));
  }

  const fs::path twice = dir.path() / "twice.twf";
  {
    WordFileWriter w(twice, 5, WordVariant::AbPower);
    invert_file(pipe.ba_power(5), w, o);
    w.commit();
  }
  CHECK(slurp(twice).substr(kWordFileHeaderSize) == slurp(pipe.ab_power(5)).substr(kWordFileHeaderSize));

  // Identity coefficient is the same in (ab)^n and (ba)^n.
  const fs::path e = dir.path() / "e.twf";
  {
    WordFileWriter w(e, 0, WordVariant::AbPower);
    w.append(serialize(DoubleTree()), 1);
    w.commit();
  }
  for (unsigned n = 1; n <= 6; ++n) CHECK(inner_product(pipe.ab_power(n), e) == inner_product(pipe.ba_power(n), e));
}

TEST_CASE("zeta by the direct route matches the reference column") {
  testutil::TempDir dir("pipe");
  WordPipeline pipe(options_for(dir.path()));
  const auto table = golden::zeta_moments();
  for (unsigned n = 1; n <= 12; ++n) {
    CAPTURE(n);
    CHECK(pipe.zeta_direct(n) == table[n - 1].zeta);
  }
}

TEST_CASE("halved and direct routes agree") {
  testutil::TempDir dir("pipe");
  WordPipeline pipe(options_for(dir.path()));
  const auto table = golden::zeta_moments();
  for (unsigned n = 2; n <= 12; ++n) {
    CAPTURE(n);
    const ZetaRecord r = pipe.zeta_halved(n);
    CHECK(r.zeta == pipe.zeta_direct(n));
    CHECK(r.zeta_s == table[n - 1].zeta_s);
    CHECK(r.zeta_e == table[n - 1].zeta_e);
  }
}

TEST_CASE("brute force expansion agrees with the pipeline") {
  testutil::TempDir dir("pipe");
  WordPipeline pipe(options_for(dir.path()));
  for (unsigned n = 1; n <= 8; ++n) {
    CAPTURE(n);
    CHECK(brute_force_zeta(n) == pipe.zeta_direct(n));
  }
  CHECK_THROWS_AS(brute_force_zeta(8, std::size_t{1} << 20), ResourceError);
}

TEST_CASE("output does not depend on thread count or chunk size") {
  testutil::TempDir a("pipe");
  testutil::TempDir b("pipe");
  PipelineOptions small = options_for(b.path(), 3);
  small.chunk_bytes = 64 << 10;
  small.fan_in = 4;
  WordPipeline one(options_for(a.path(), 1));
  WordPipeline many(small);
  for (unsigned n = 1; n <= 6; ++n) {
    CHECK(slurp(one.ab_power(n)) == slurp(many.ab_power(n)));
    CHECK(slurp(one.smaller(n, true)) == slurp(many.smaller(n, true)));
  }
}

TEST_CASE("cache reuse and corruption recovery") {
  testutil::TempDir dir("pipe");
  std::vector<std::string> messages;
  PipelineOptions o = options_for(dir.path());
  o.log = [&](std::string_view m) { messages.emplace_back(m); };
  mpz_class first;
  {
    WordPipeline pipe(o);
    first = pipe.zeta_halved(9).zeta;
  }
  {
    WordPipeline pipe(o);
    CHECK(pipe.zeta_halved(9).zeta == first);
    CHECK(pipe.files_built() == 0);
    CHECK(pipe.cache_hits() > 0);
  }
  // Flip one body byte of a cached file: it is rejected and rebuilt.
  WordPipeline probe(o);
  const fs::path victim = probe.cache_path(WordVariant::AbPower, 4);
  std::string bytes = slurp(victim);
  bytes[bytes.size() - 3] ^= 0x20;
  std::ofstream(victim, std::ios::binary | std::ios::trunc) << bytes;
  messages.clear();
  {
    WordPipeline pipe(o);
    CHECK(pipe.zeta_direct(8) == 8);
    CHECK(pipe.files_built() >= 1);
  }
  bool rejected = false;
  for (const auto& m : messages) rejected |= m.find("rejected") != std::string::npos && m.find(victim.string()) != std::string::npos;
  CHECK(rejected);
}
