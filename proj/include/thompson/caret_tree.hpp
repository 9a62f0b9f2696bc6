#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "thompson/dyadic.hpp"

namespace thompson {

// Preorder encoding of a full binary tree: 1 = caret, 0 = leaf.
using TreeBits = std::vector<std::uint8_t>;

// A full binary tree whose leaves enumerate, left to right, the dyadic
// intervals obtained by recursive halving of [0,1].
class CaretTree {
 public:
  // The single-leaf tree.
  CaretTree() : bits_{0} {}
  // Validates the encoding; throws StructuralError otherwise.
  explicit CaretTree(TreeBits bits);
  // Parses a string of '0'/'1' characters.
  static CaretTree parse(std::string_view text);
  static CaretTree caret(const CaretTree& left, const CaretTree& right);
  // Complete tree with 2^depth leaves.
  static CaretTree balanced(unsigned depth);

  const TreeBits& bits() const noexcept { return bits_; }
  std::size_t leaf_count() const noexcept;
  std::size_t caret_count() const noexcept { return bits_.size() - leaf_count(); }
  bool is_leaf() const noexcept { return bits_.size() == 1; }
  std::string to_string() const;

  friend bool operator==(const CaretTree&, const CaretTree&) = default;

 private:
  struct Unchecked {};
  CaretTree(TreeBits bits, Unchecked) : bits_(std::move(bits)) {}
  TreeBits bits_;
};

// A leaf of a caret tree as the dyadic interval [start, start + 2^-depth).
struct LeafInterval {
  DyadicPoint start;
  unsigned depth = 0;
};

namespace tree {

bool is_valid(std::span<const std::uint8_t> bits) noexcept;
std::size_t leaf_count(std::span<const std::uint8_t> bits) noexcept;
// One past the last bit of the subtree rooted at `pos`.
std::size_t subtree_end(std::span<const std::uint8_t> bits, std::size_t pos) noexcept;
// Bit position of leaf `index` (0-based, left to right).
std::size_t leaf_position(std::span<const std::uint8_t> bits, std::size_t index) noexcept;
// True when leaves `index` and `index + 1` are the two children of one caret.
bool is_sibling_pair(std::span<const std::uint8_t> bits, std::size_t index) noexcept;
// Collapses the caret over leaves `index`, `index + 1` into a single leaf.
// Precondition: is_sibling_pair(bits, index).
void merge_sibling_pair(TreeBits& bits, std::size_t index);
// Replaces leaf `index` by a caret with two leaves.
void split_leaf(TreeBits& bits, std::size_t index);
// Swaps the children of every caret.
TreeBits mirrored(std::span<const std::uint8_t> bits);
std::vector<LeafInterval> leaf_intervals(std::span<const std::uint8_t> bits);

}  // namespace tree

}  // namespace thompson
