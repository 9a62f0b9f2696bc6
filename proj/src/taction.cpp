#include "thompson/taction.hpp"

#include "doubletree_internal.hpp"
#include "thompson/caret_tree.hpp"

namespace thompson {

namespace {

using detail::TreePair;

std::uint32_t leaves_in(const TreeBits& bits, std::size_t begin, std::size_t end) {
  std::uint32_t n = 0;
  for (std::size_t k = begin; k < end; ++k) n += bits[k] == 0;
  return n;
}

// Range bits of the form 1 [A] [B]: returns the start of B.
std::size_t right_child(const TreeBits& bits, std::size_t pos) { return tree::subtree_end(bits, pos + 1); }

void reduce_at(TreePair& x, std::uint32_t range_leaf) {
  auto& counters = action_counters();
  counters.reductions += detail::cascade_reduce(x, range_leaf, counters.probes);
}

}  // namespace

std::string_view letter_name(Letter l) noexcept {
  switch (l) {
    case Letter::C: return "C";
    case Letter::Cinv: return "C^-1";
    case Letter::D: return "D";
    case Letter::D2: return "D^2";
    case Letter::Dinv: return "D^-1";
  }
  return "?";
}

const DoubleTree& letter_element(Letter l) {
  static const std::array<DoubleTree, 5> elements = [] {
    const auto& g = generators();
    return std::array<DoubleTree, 5>{g.c, inverse(g.c), g.d, power(g.d, 2), inverse(g.d)};
  }();
  return elements[static_cast<std::size_t>(l)];
}

ActionCounters& action_counters() noexcept {
  thread_local ActionCounters counters;
  return counters;
}

DoubleTree left_mul_c(const DoubleTree& x) {
  ++action_counters().calls;
  if (x.leaf_count() == 1) return generators().c;
  TreePair p = TreePair::from(x);
  std::size_t right = right_child(p.range, 0);
  if (p.range[right] == 0) {
    detail::insert_double_caret_at_range(p, p.leaves() - 1);
    right = right_child(p.range, 0);
  }
  // 1 [I] 1 [II] [III]  becomes  1 [II] 1 [III] [I].
  const std::size_t second = right_child(p.range, right);
  const std::size_t end = p.range.size();
  const std::uint32_t n1 = leaves_in(p.range, 1, right);
  const std::uint32_t n2 = leaves_in(p.range, right + 1, second);
  TreeBits range;
  range.reserve(end);
  range.push_back(1);
  range.insert(range.end(), p.range.begin() + static_cast<std::ptrdiff_t>(right + 1),
               p.range.begin() + static_cast<std::ptrdiff_t>(second));
  range.push_back(1);
  range.insert(range.end(), p.range.begin() + static_cast<std::ptrdiff_t>(second), p.range.end());
  range.insert(range.end(), p.range.begin() + 1, p.range.begin() + static_cast<std::ptrdiff_t>(right));
  const std::uint32_t l = p.leaves();
  p.range = std::move(range);
  p.rot = (p.rot + l - n1 % l) % l;
  // Only the new caret over III and I can be a double caret.
  reduce_at(p, n2);
  return std::move(p).finish();
}

DoubleTree left_mul_d(const DoubleTree& x) {
  ++action_counters().calls;
  const auto& g = generators();
  if (x.leaf_count() == 1) return g.d;
  TreePair p = TreePair::from(x);
  if (p.leaves() == 2) {
    // Only D² has a one-caret range tree.
    return letter_element(Letter::Dinv);
  }
  if (p.range[1] == 0) {
    detail::insert_double_caret_at_range(p, 0);
  } else if (p.range[right_child(p.range, 0)] == 0) {
    detail::insert_double_caret_at_range(p, p.leaves() - 1);
  }
  // 1 1[I][II] 1[III][IV]  becomes  1 1[II][III] 1[IV][I].
  const std::size_t b2 = right_child(p.range, 1);
  const std::size_t right = tree::subtree_end(p.range, 1);
  const std::size_t b4 = right_child(p.range, right);
  const std::uint32_t n1 = leaves_in(p.range, 2, b2);
  const std::uint32_t n2 = leaves_in(p.range, b2, right);
  const std::uint32_t n3 = leaves_in(p.range, right + 1, b4);
  auto span = [&](std::size_t a, std::size_t b) {
    return std::pair{p.range.begin() + static_cast<std::ptrdiff_t>(a), p.range.begin() + static_cast<std::ptrdiff_t>(b)};
  };
  TreeBits range;
  range.reserve(p.range.size());
  range.push_back(1);
  range.push_back(1);
  auto [a2, e2] = span(b2, right);
  range.insert(range.end(), a2, e2);
  auto [a3, e3] = span(right + 1, b4);
  range.insert(range.end(), a3, e3);
  range.push_back(1);
  auto [a4, e4] = span(b4, p.range.size());
  range.insert(range.end(), a4, e4);
  auto [a1, e1] = span(2, b2);
  range.insert(range.end(), a1, e1);
  const std::uint32_t l = p.leaves();
  p.range = std::move(range);
  p.rot = (p.rot + l - n1 % l) % l;
  // New carets: over II and III, and over IV and I. Try the right one first so
  // that a reduction there leaves leaf 0 in place.
  reduce_at(p, n2 + n3);
  reduce_at(p, 0);
  return std::move(p).finish();
}

DoubleTree left_mul(Letter l, const DoubleTree& x) {
  switch (l) {
    case Letter::C: return left_mul_c(x);
    case Letter::Cinv: return left_mul_c(left_mul_c(x));
    case Letter::D: return left_mul_d(x);
    case Letter::D2: return left_mul_d(left_mul_d(x));
    case Letter::Dinv: return left_mul_d(left_mul_d(left_mul_d(x)));
  }
  return x;
}

}  // namespace thompson
