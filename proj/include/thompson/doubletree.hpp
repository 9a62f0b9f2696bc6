#pragma once

#include <compare>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "thompson/caret_tree.hpp"
#include "thompson/dyadic.hpp"

namespace thompson {

// An element of Thompson's group T as a pair of caret trees with a cyclic
// leaf correspondence: domain leaf j maps to range leaf (j + rot) mod L.
//
// Values are immutable once built. Construction through the public
// constructor validates both trees; the result need not be reduced.
class DoubleTree {
 public:
  // The identity: one leaf on each side, rotation 0.
  DoubleTree() : range_{0}, domain_{0} {}
  DoubleTree(CaretTree range, CaretTree domain, std::uint32_t rot);

  // Skips validation. Callers guarantee two valid trees with equal leaf
  // counts and rot < leaf count.
  static DoubleTree from_valid_parts(TreeBits range, TreeBits domain, std::uint32_t rot) {
    DoubleTree x;
    x.range_ = std::move(range);
    x.domain_ = std::move(domain);
    x.rot_ = rot;
    return x;
  }

  const TreeBits& range() const noexcept { return range_; }
  const TreeBits& domain() const noexcept { return domain_; }
  std::uint32_t rot() const noexcept { return rot_; }
  std::uint32_t leaf_count() const noexcept {
    return static_cast<std::uint32_t>((range_.size() + 1) / 2);
  }
  bool is_identity() const noexcept { return range_.size() == 1 && rot_ == 0; }
  // No range caret and domain caret whose leaves correspond pairwise.
  bool is_reduced() const;

  // Range leaf matched with domain leaf j, and the inverse correspondence.
  std::uint32_t range_leaf_of(std::uint32_t domain_leaf) const noexcept {
    return (domain_leaf + rot_) % leaf_count();
  }
  std::uint32_t domain_leaf_of(std::uint32_t range_leaf) const noexcept {
    const std::uint32_t l = leaf_count();
    return (range_leaf + l - rot_) % l;
  }

  std::string to_string() const;

  friend bool operator==(const DoubleTree&, const DoubleTree&) = default;

 private:
  TreeBits range_;
  TreeBits domain_;
  std::uint32_t rot_ = 0;
};

// Generators of T. C has order 3 and D order 4.
struct Generators {
  DoubleTree identity;
  DoubleTree c;
  DoubleTree d;
};
const Generators& generators();
Generators make_generators();

// Splits domain leaf `domain_leaf` and its partner range leaf into carets,
// giving an unreduced representative of the same element.
DoubleTree insert_double_caret(const DoubleTree& x, std::uint32_t domain_leaf);

// Removes double carets until none is left.
DoubleTree reduce(DoubleTree x);
// Same result as reduce(), removing the available double carets in a random
// order. Used to check that reduction is confluent.
DoubleTree reduce_shuffled(DoubleTree x, std::mt19937_64& rng);

// The product x∘y, i.e. t ↦ x(y(t)), reduced.
DoubleTree compose(const DoubleTree& x, const DoubleTree& y);
DoubleTree inverse(const DoubleTree& x);
// The 180-degree rotation of the graph: t ↦ 1 - x(1 - t).
DoubleTree rotate180(const DoubleTree& x);
// D² R(x) D². On a word in C, D it replaces every letter by its inverse,
// keeping the order.
DoubleTree reverse_inverse(const DoubleTree& x);
DoubleTree power(const DoubleTree& x, unsigned exponent);

// Serialized form: LEB128 leaf count, LEB128 rot, then range and domain
// preorder bits packed MSB-first, each zero-padded to a byte boundary.
std::string serialize(const DoubleTree& x);
DoubleTree deserialize(std::string_view bytes);

// Byte-wise lexicographic order of the serialized forms.
std::strong_ordering compare(const DoubleTree& x, const DoubleTree& y);

// Piecewise-linear circle homeomorphism with dyadic breakpoints.
class PLCircleMap {
 public:
  struct Piece {
    DyadicPoint domain_start;
    DyadicPoint range_start;
    // log2 of the slope
    int log_slope = 0;
  };

  explicit PLCircleMap(std::vector<Piece> pieces);

  // Image of t; t and the result live in [0, 1).
  DyadicPoint operator()(const DyadicPoint& t) const;
  std::span<const Piece> pieces() const noexcept { return pieces_; }

 private:
  std::vector<Piece> pieces_;  // sorted by domain_start, first starts at 0
};

PLCircleMap to_pl_map(const DoubleTree& x);

}  // namespace thompson
