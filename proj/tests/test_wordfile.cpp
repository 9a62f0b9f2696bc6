#include <doctest.h>

#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "temp_dir.hpp"
#include "thompson/errors.hpp"
#include "thompson/wordfile.hpp"

using namespace thompson;
namespace fs = std::filesystem;

namespace {

std::map<std::string, mpz_class> read_all(const fs::path& p) {
  std::map<std::string, mpz_class> out;
  WordFileReader r(p);
  WordEntry e;
  while (r.next(e)) out[e.key] = e.multiplicity.to_mpz();
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("multiplicity promotes instead of wrapping") {
  const Multiplicity max(~std::uint64_t{0});
  const Multiplicity sum = max + Multiplicity(1);
  CHECK_FALSE(sum.is_small());
  CHECK(sum.to_string() == "18446744073709551616");
  const Multiplicity product = max * Multiplicity(3);
  CHECK(product.to_mpz() == mpz_class("55340232221128654845"));
  CHECK((Multiplicity(2) + Multiplicity(3)).is_small());

  std::string bytes;
  sum.append_to(bytes);
  std::size_t pos = 0;
  CHECK(Multiplicity::read(bytes, pos) == sum);
  CHECK(pos == bytes.size());
  CHECK(Multiplicity::parse("12345678901234567890123") == Multiplicity(mpz_class("12345678901234567890123")));
  CHECK_THROWS_AS(Multiplicity::parse("-3"), DecodeError);
}

TEST_CASE("writer and reader round trip") {
  testutil::TempDir dir("wf");
  const fs::path p = dir.path() / "a.twf";
  {
    WordFileWriter w(p, 3, WordVariant::AbPower);
    w.append("a", 1);
    w.append("ab", Multiplicity(mpz_class("100000000000000000000000")));
    w.append("b", 7);
    CHECK_THROWS_AS(w.append("b", 1), IntegrityError);
    w.commit();
  }
  const WordFileHeader h = verify_word_file(p);
  CHECK(h.n == 3);
  CHECK(h.variant == WordVariant::AbPower);
  CHECK(h.entries == 3);
  CHECK(h.total_mass == mpz_class("100000000000000000000008"));
  CHECK(!fs::exists(p.string() + ".tmp"));

  std::ostringstream text;
  export_text(p, text);
  CHECK(text.str() == "YQ==\t1\nYWI=\t100000000000000000000000\nYg==\t7\n");
  CHECK(base64_decode("YWI=") == "ab");
  CHECK_THROWS_AS(base64_decode("YW"), DecodeError);
}

TEST_CASE("uncommitted files never appear under the final name") {
  testutil::TempDir dir("wf");
  const fs::path p = dir.path() / "partial.twf";
  {
    WordFileWriter w(p, 1, WordVariant::Half);
    w.append("x", 1);
  }
  CHECK(!fs::exists(p));
  CHECK(!fs::exists(p.string() + ".tmp"));
}

TEST_CASE("corruption is detected and names the file") {
  testutil::TempDir dir("wf");
  const fs::path p = dir.path() / "c.twf";
  {
    WordFileWriter w(p, 1, WordVariant::AbPower);
    for (int k = 0; k < 1000; ++k) {
      char key[16];
      std::snprintf(key, sizeof key, "key%06d", k);
      w.append(key, static_cast<std::uint64_t>(k + 1));
    }
    w.commit();
  }
  std::string bytes = slurp(p);
  bytes[bytes.size() / 2] ^= 0x01;
  std::ofstream(p, std::ios::binary | std::ios::trunc) << bytes;
  try {
    verify_word_file(p);
    FAIL("corruption not detected");
  } catch (const IntegrityError& e) {
    CHECK(e.path() == p.string());
  }

  std::ofstream(p, std::ios::binary | std::ios::trunc) << "junk";
  CHECK_THROWS_AS(verify_word_file(p), IntegrityError);
}

TEST_CASE("external sorter matches an in-memory count") {
  testutil::TempDir dir("sort");
  std::mt19937_64 rng(4);
  std::map<std::string, mpz_class> oracle;
  ExternalSorter sorter({dir.path() / "scratch", 4096, 3});
  for (int k = 0; k < 20000; ++k) {
    std::string key(1 + rng() % 4, 'a');
    for (auto& ch : key) ch = static_cast<char>('a' + rng() % 5);
    const std::uint64_t m = 1 + rng() % 1000;
    oracle[key] += m;
    sorter.add(key, m);
  }
  // A key whose total exceeds 64 bits.
  sorter.add("zz", ~std::uint64_t{0});
  sorter.add("zz", ~std::uint64_t{0});
  oracle["zz"] = mpz_class(2) * mpz_class("18446744073709551615");

  const fs::path out = dir.path() / "sorted.twf";
  WordFileWriter w(out, 0, WordVariant::AbPower);
  sorter.finish(w);
  w.commit();
  CHECK(sorter.runs_spilled() > 3);
  CHECK(read_all(out) == oracle);
  // No run files left behind.
  CHECK(fs::is_empty(dir.path() / "scratch"));
}

TEST_CASE("inner product") {
  testutil::TempDir dir("ip");
  const fs::path a = dir.path() / "a.twf";
  const fs::path b = dir.path() / "b.twf";
  const fs::path empty = dir.path() / "e.twf";
  {
    WordFileWriter w(a, 0, WordVariant::AbPower);
    w.append("a", 2);
    w.append("c", 3);
    w.append("d", 5);
    w.commit();
    WordFileWriter v(b, 0, WordVariant::BaPower);
    v.append("b", 7);
    v.append("c", 11);
    v.append("d", 13);
    v.commit();
    WordFileWriter z(empty, 0, WordVariant::BaPower);
    z.commit();
  }
  CHECK(inner_product(a, b) == 3 * 11 + 5 * 13);
  CHECK(inner_product(a, empty) == 0);
}
