#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "random_words.hpp"
#include "thompson/doubletree.hpp"
#include "thompson/errors.hpp"

using namespace thompson;

namespace {

const DoubleTree& C() { return generators().c; }
const DoubleTree& D() { return generators().d; }
const DoubleTree& E() { return generators().identity; }

DoubleTree product(std::initializer_list<DoubleTree> word) {
  DoubleTree out;
  for (auto it = std::rbegin(word); it != std::rend(word); ++it) out = compose(*it, out);
  return out;
}

DoubleTree commutator(const DoubleTree& x, const DoubleTree& y) {
  return product({x, y, inverse(x), inverse(y)});
}

bool satisfies_presentation(const DoubleTree& c, const DoubleTree& d) {
  const DoubleTree d2 = product({d, d});
  const DoubleTree cdc = product({c, d, c});
  const DoubleTree conj = product({d2, cdc, d2});
  const DoubleTree third = product({c, conj, inverse(c)});
  return power(c, 3).is_identity() && power(d, 4).is_identity() &&
         power(compose(c, d), 5).is_identity() && commutator(cdc, conj).is_identity() &&
         commutator(conj, third).is_identity();
}

// Pointwise composition of the circle maps on the grid k / 2^bits.
void check_pl_composition(const DoubleTree& x, const DoubleTree& y, unsigned bits) {
  const PLCircleMap fx = to_pl_map(x);
  const PLCircleMap fy = to_pl_map(y);
  const PLCircleMap fxy = to_pl_map(compose(x, y));
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << bits); ++k) {
    const DyadicPoint t(k, bits);
    REQUIRE(fxy(t) == fx(fy(t)));
  }
}

}  // namespace

TEST_CASE("generators as circle maps") {
  const PLCircleMap fc = to_pl_map(C());
  CHECK(fc(DyadicPoint(0, 0)) == DyadicPoint(3, 2));
  CHECK(fc(DyadicPoint(1, 1)) == DyadicPoint(0, 0));
  CHECK(fc(DyadicPoint(3, 2)) == DyadicPoint(1, 1));

  const PLCircleMap fe = to_pl_map(E());
  REQUIRE(fe.pieces().size() == 1);
  CHECK(fe.pieces()[0].log_slope == 0);
  CHECK(fe(DyadicPoint(5, 4)) == DyadicPoint(5, 4));
}

TEST_CASE("presentation relations pin the orientation of D") {
  CHECK(satisfies_presentation(C(), D()));
  int passing = 0;
  for (std::uint32_t rot : {1u, 3u}) {
    const DoubleTree candidate(CaretTree::balanced(2), CaretTree::balanced(2), rot);
    if (satisfies_presentation(C(), candidate)) {
      ++passing;
      CHECK(candidate == D());
    }
  }
  CHECK(passing == 1);
  CHECK(product({C(), C(), C()}) == E());
}

TEST_CASE("reduce") {
  CHECK(reduce(insert_double_caret(E(), 0)) == E());
  for (std::uint32_t leaf = 0; leaf < 3; ++leaf) {
    const DoubleTree big = insert_double_caret(C(), leaf);
    CHECK(big.leaf_count() == 4);
    CHECK_FALSE(big.is_reduced());
    CHECK(reduce(big) == C());
  }
  const DoubleTree five = insert_double_caret(insert_double_caret(C(), 1), 3);
  CHECK(five.leaf_count() == 5);
  CHECK(reduce(five) == C());
  // Same map before and after reduction.
  const PLCircleMap a = to_pl_map(five);
  const PLCircleMap b = to_pl_map(C());
  for (std::uint64_t k = 0; k < 64; ++k) CHECK(a(DyadicPoint(k, 6)) == b(DyadicPoint(k, 6)));
}

TEST_CASE("reduction is confluent") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> extra(1, 6);
  for (int trial = 0; trial < 300; ++trial) {
    const DoubleTree x = testutil::random_element(rng);
    DoubleTree big = x;
    const int n = extra(rng);
    for (int k = 0; k < n; ++k) {
      std::uniform_int_distribution<std::uint32_t> leaf(0, big.leaf_count() - 1);
      big = insert_double_caret(big, leaf(rng));
    }
    REQUIRE(reduce(big) == x);
    REQUIRE(reduce_shuffled(big, rng) == x);
  }
}

TEST_CASE("malformed trees are rejected") {
  CHECK_THROWS_AS(CaretTree::parse("110"), StructuralError);
  CHECK_THROWS_AS(CaretTree::parse("1000"), StructuralError);
  CHECK_THROWS_AS(DoubleTree(CaretTree::parse("100"), CaretTree::parse("10100"), 0), StructuralError);
  CHECK_THROWS_AS(DoubleTree(CaretTree::parse("100"), CaretTree::parse("100"), 2), StructuralError);
}

TEST_CASE("compose identity and inverse laws") {
  for (const DoubleTree& x : {C(), D(), product({C(), C()})}) {
    CHECK(compose(x, E()) == x);
    CHECK(compose(E(), x) == x);
  }
  CHECK(inverse(E()) == E());
  CHECK(compose(inverse(D()), D()) == E());
  CHECK(compose(C(), inverse(C())) == E());
  CHECK(inverse(C()) == product({C(), C()}));
  CHECK(power(compose(C(), D()), 5) == E());
}

TEST_CASE("compose agrees with composition of circle maps") {
  check_pl_composition(C(), D(), 4);
  check_pl_composition(D(), D(), 5);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    check_pl_composition(testutil::random_element(rng), testutil::random_element(rng), 8);
  }
}

TEST_CASE("group axioms on random elements") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    const DoubleTree x = testutil::random_element(rng);
    const DoubleTree y = testutil::random_element(rng);
    const DoubleTree z = testutil::random_element(rng);
    REQUIRE(x.is_reduced());
    REQUIRE(compose(compose(x, y), z) == compose(x, compose(y, z)));
    REQUIRE(compose(x, inverse(x)) == E());
    REQUIRE(compose(inverse(x), x) == E());
    REQUIRE(compose(x, E()) == x);
  }
}

TEST_CASE("rotate180") {
  CHECK(rotate180(E()) == E());
  CHECK(rotate180(rotate180(C())) == C());
  const DoubleTree d2 = product({D(), D()});
  CHECK(product({d2, rotate180(C()), d2}) == inverse(C()));

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const DoubleTree x = testutil::random_element(rng);
    const DoubleTree y = testutil::random_element(rng);
    REQUIRE(rotate180(rotate180(x)) == x);
    REQUIRE(rotate180(compose(x, y)) == compose(rotate180(x), rotate180(y)));
    // t ↦ 1 - x(1 - t) on the grid.
    const PLCircleMap fx = to_pl_map(x);
    const PLCircleMap fr = to_pl_map(rotate180(x));
    const DyadicPoint zero;
    for (std::uint64_t k = 0; k < 64; ++k) {
      const DyadicPoint t(k, 6);
      REQUIRE(fr(t) == zero - fx(zero - t));
    }
  }
}

TEST_CASE("reverse_inverse") {
  const DoubleTree d2 = product({D(), D()});
  CHECK(reverse_inverse(d2) == d2);
  const DoubleTree c2 = product({C(), C()});
  CHECK(reverse_inverse(product({C(), D(), c2})) ==
        product({inverse(C()), inverse(D()), inverse(c2)}));

  const DoubleTree cd = compose(C(), D());
  CHECK(reverse_inverse(reverse_inverse(cd)) == cd);

  // Inverting every letter of a random word in place.
  const std::vector<DoubleTree> letters = {C(), D(), inverse(C()), inverse(D())};
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<std::size_t> pick(0, letters.size() - 1);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::size_t> word(rng() % 10);
    for (auto& w : word) w = pick(rng);
    DoubleTree forward;
    DoubleTree inverted;
    for (std::size_t k = word.size(); k-- > 0;) {
      forward = compose(letters[word[k]], forward);
      inverted = compose(inverse(letters[word[k]]), inverted);
    }
    REQUIRE(reverse_inverse(forward) == inverted);
    REQUIRE(reverse_inverse(reverse_inverse(forward)) == forward);
  }
}

TEST_CASE("serialization") {
  CHECK(serialize(E()) == std::string("\x01\x00\x00\x00", 4));
  CHECK(serialize(C()) != serialize(inverse(C())));
  CHECK_THROWS_AS(deserialize(std::string("\x01\x01\x00\x00", 4)), DecodeError);
  CHECK_THROWS_AS(deserialize(std::string("\x01\x00\x00\x00\x00", 5)), DecodeError);
  CHECK_THROWS_AS(deserialize(std::string("\x01\x00\x40\x00", 4)), DecodeError);
  CHECK_THROWS_AS(deserialize(std::string("\x03\x00", 2)), DecodeError);
  CHECK_THROWS_AS(deserialize(std::string("\x02\x00\x00\x00", 4)), DecodeError);
  CHECK_THROWS_AS(deserialize(std::string("\x80", 1)), DecodeError);

  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 1000; ++trial) {
    const DoubleTree x = testutil::random_element(rng);
    REQUIRE(deserialize(serialize(x)) == x);
  }
}

TEST_CASE("compare is a total order") {
  CHECK(compare(C(), C()) == std::strong_ordering::equal);
  std::vector<DoubleTree> six = {E(), C(), power(C(), 2), D(), power(D(), 2), power(D(), 3)};
  std::sort(six.begin(), six.end(), [](const auto& a, const auto& b) { return compare(a, b) < 0; });
  for (std::size_t k = 0; k + 1 < six.size(); ++k) CHECK(compare(six[k], six[k + 1]) < 0);

  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 500; ++trial) {
    const DoubleTree x = testutil::random_element(rng);
    const DoubleTree y = testutil::random_element(rng);
    const auto xy = compare(x, y);
    const auto yx = compare(y, x);
    REQUIRE((xy < 0) == (yx > 0));
    REQUIRE((xy == 0) == (x == y));
  }
}
