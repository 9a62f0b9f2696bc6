#pragma once

// Mutable tree-pair surgery shared by the generic doubletree operations and
// the constant-time left actions of C and D.

#include <cstdint>

#include "thompson/caret_tree.hpp"
#include "thompson/doubletree.hpp"

namespace thompson::detail {

struct TreePair {
  TreeBits range;
  TreeBits domain;
  std::uint32_t rot = 0;

  std::uint32_t leaves() const noexcept { return static_cast<std::uint32_t>((range.size() + 1) / 2); }
  std::uint32_t domain_leaf_of(std::uint32_t range_leaf) const noexcept {
    const std::uint32_t l = leaves();
    return (range_leaf + l - rot) % l;
  }
  std::uint32_t range_leaf_of(std::uint32_t domain_leaf) const noexcept {
    return (domain_leaf + rot) % leaves();
  }

  static TreePair from(const DoubleTree& x) { return {x.range(), x.domain(), x.rot()}; }
  DoubleTree finish() && { return DoubleTree::from_valid_parts(std::move(range), std::move(domain), rot); }
};

// Range leaves i, i+1 form a caret whose partner domain leaves also form one.
bool double_caret_at(const TreePair& x, std::uint32_t range_leaf);
// Precondition: double_caret_at(x, range_leaf). Returns the merged domain leaf.
std::uint32_t remove_double_caret(TreePair& x, std::uint32_t range_leaf);
// Splits range leaf `range_leaf` and its partner domain leaf.
void insert_double_caret_at_range(TreePair& x, std::uint32_t range_leaf);

// Removes the double caret at `range_leaf`, if any, then keeps following the
// parents of the merged leaves until no new double caret appears. Returns the
// number of double carets removed; `probes` counts double-caret tests.
unsigned cascade_reduce(TreePair& x, std::uint32_t range_leaf, std::uint64_t& probes);

}  // namespace thompson::detail
