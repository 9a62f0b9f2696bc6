#include "thompson/caret_tree.hpp"

#include <algorithm>

#include "thompson/errors.hpp"

namespace thompson {

CaretTree::CaretTree(TreeBits bits) : bits_(std::move(bits)) {
  if (!tree::is_valid(bits_)) {
    throw StructuralError("not the preorder encoding of a full binary tree");
  }
}

CaretTree CaretTree::parse(std::string_view text) {
  TreeBits bits;
  bits.reserve(text.size());
  for (char ch : text) {
    if (ch != '0' && ch != '1') throw StructuralError("tree text must consist of 0 and 1");
    bits.push_back(static_cast<std::uint8_t>(ch - '0'));
  }
  return CaretTree(std::move(bits));
}

CaretTree CaretTree::caret(const CaretTree& left, const CaretTree& right) {
  TreeBits bits;
  bits.reserve(1 + left.bits_.size() + right.bits_.size());
  bits.push_back(1);
  bits.insert(bits.end(), left.bits_.begin(), left.bits_.end());
  bits.insert(bits.end(), right.bits_.begin(), right.bits_.end());
  return CaretTree(std::move(bits), Unchecked{});
}

CaretTree CaretTree::balanced(unsigned depth) {
  if (depth == 0) return CaretTree();
  const CaretTree half = balanced(depth - 1);
  return caret(half, half);
}

std::size_t CaretTree::leaf_count() const noexcept { return tree::leaf_count(bits_); }

std::string CaretTree::to_string() const {
  std::string out;
  out.reserve(bits_.size());
  for (auto b : bits_) out.push_back(static_cast<char>('0' + b));
  return out;
}

namespace tree {

bool is_valid(std::span<const std::uint8_t> bits) noexcept {
  if (bits.empty()) return false;
  std::size_t pending = 1;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (pending == 0) return false;
    if (bits[i] == 1) {
      ++pending;
    } else if (bits[i] == 0) {
      --pending;
    } else {
      return false;
    }
  }
  return pending == 0;
}

std::size_t leaf_count(std::span<const std::uint8_t> bits) noexcept {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{0}));
}

std::size_t subtree_end(std::span<const std::uint8_t> bits, std::size_t pos) noexcept {
  std::size_t pending = 1;
  while (pending != 0) {
    if (bits[pos++] == 1) {
      ++pending;
    } else {
      --pending;
    }
  }
  return pos;
}

std::size_t leaf_position(std::span<const std::uint8_t> bits, std::size_t index) noexcept {
  std::size_t seen = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == 0) {
      if (seen == index) return i;
      ++seen;
    }
  }
  return bits.size();
}

bool is_sibling_pair(std::span<const std::uint8_t> bits, std::size_t index) noexcept {
  const std::size_t pos = leaf_position(bits, index);
  // "100" in preorder is exactly a caret whose two children are leaves.
  return pos > 0 && pos + 1 < bits.size() && bits[pos - 1] == 1 && bits[pos + 1] == 0;
}

void merge_sibling_pair(TreeBits& bits, std::size_t index) {
  const std::size_t pos = leaf_position(bits, index);
  bits.erase(bits.begin() + static_cast<std::ptrdiff_t>(pos - 1), bits.begin() + static_cast<std::ptrdiff_t>(pos + 1));
}

void split_leaf(TreeBits& bits, std::size_t index) {
  const std::size_t pos = leaf_position(bits, index);
  static constexpr std::uint8_t kCaret[] = {1, 0, 0};
  bits[pos] = 1;
  bits.insert(bits.begin() + static_cast<std::ptrdiff_t>(pos + 1), kCaret + 1, kCaret + 3);
}

namespace {

void mirror_into(std::span<const std::uint8_t> bits, std::size_t pos, TreeBits& out) {
  if (bits[pos] == 0) {
    out.push_back(0);
    return;
  }
  const std::size_t left = pos + 1;
  const std::size_t right = subtree_end(bits, left);
  out.push_back(1);
  mirror_into(bits, right, out);
  mirror_into(bits, left, out);
}

}  // namespace

TreeBits mirrored(std::span<const std::uint8_t> bits) {
  TreeBits out;
  out.reserve(bits.size());
  mirror_into(bits, 0, out);
  return out;
}

std::vector<LeafInterval> leaf_intervals(std::span<const std::uint8_t> bits) {
  std::vector<LeafInterval> leaves;
  leaves.reserve(bits.size() / 2 + 1);
  std::vector<LeafInterval> stack{{DyadicPoint{}, 0}};
  for (auto b : bits) {
    const LeafInterval node = stack.back();
    stack.pop_back();
    if (b == 0) {
      leaves.push_back(node);
      continue;
    }
    const unsigned child_depth = node.depth + 1;
    stack.push_back({node.start + DyadicPoint(1, child_depth), child_depth});
    stack.push_back({node.start, child_depth});
  }
  return leaves;
}

}  // namespace tree

}  // namespace thompson
