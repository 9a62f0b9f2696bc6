#include "thompson/doubletree.hpp"

#include <algorithm>
#include <numeric>

#include "doubletree_internal.hpp"
#include "thompson/errors.hpp"
#include "thompson/varint.hpp"

namespace thompson {

DoubleTree::DoubleTree(CaretTree range, CaretTree domain, std::uint32_t rot) {
  const std::size_t l = range.leaf_count();
  if (domain.leaf_count() != l) {
    throw StructuralError("range and domain trees have different leaf counts");
  }
  if (rot >= l) throw StructuralError("rotation index out of range");
  range_ = range.bits();
  domain_ = domain.bits();
  rot_ = rot;
}

bool DoubleTree::is_reduced() const {
  const auto pair = detail::TreePair::from(*this);
  for (std::uint32_t i = 0; i + 1 < leaf_count(); ++i) {
    if (detail::double_caret_at(pair, i)) return false;
  }
  return true;
}

std::string DoubleTree::to_string() const {
  std::string out = "(";
  for (auto b : range_) out.push_back(static_cast<char>('0' + b));
  out += ", ";
  for (auto b : domain_) out.push_back(static_cast<char>('0' + b));
  out += ", " + std::to_string(rot_) + ")";
  return out;
}

namespace detail {

bool double_caret_at(const TreePair& x, std::uint32_t range_leaf) {
  const std::uint32_t l = x.leaves();
  if (range_leaf + 1 >= l) return false;
  const std::uint32_t j = x.domain_leaf_of(range_leaf);
  if (j + 1 >= l) return false;
  return tree::is_sibling_pair(x.range, range_leaf) && tree::is_sibling_pair(x.domain, j);
}

std::uint32_t remove_double_caret(TreePair& x, std::uint32_t range_leaf) {
  const std::uint32_t j = x.domain_leaf_of(range_leaf);
  tree::merge_sibling_pair(x.range, range_leaf);
  tree::merge_sibling_pair(x.domain, j);
  const std::uint32_t l = x.leaves();
  x.rot = (range_leaf + l - j) % l;
  return j;
}

void insert_double_caret_at_range(TreePair& x, std::uint32_t range_leaf) {
  const std::uint32_t j = x.domain_leaf_of(range_leaf);
  tree::split_leaf(x.range, range_leaf);
  tree::split_leaf(x.domain, j);
  const std::uint32_t l = x.leaves();
  x.rot = (range_leaf + l - j) % l;
}

unsigned cascade_reduce(TreePair& x, std::uint32_t range_leaf, std::uint64_t& probes) {
  unsigned removed = 0;
  ++probes;
  if (!double_caret_at(x, range_leaf)) return 0;
  std::uint32_t i = range_leaf;
  while (true) {
    const std::uint32_t j = remove_double_caret(x, i);
    ++removed;
    // Only the parents of the two merged leaves can have become "100".
    const std::uint32_t l = x.leaves();
    if (l == 1) break;
    const std::uint32_t candidates[] = {
        i == 0 ? l : i - 1,
        i,
        x.range_leaf_of(j == 0 ? l - 1 : j - 1),
        x.range_leaf_of(j),
    };
    bool found = false;
    for (std::uint32_t c : candidates) {
      if (c >= l) continue;
      ++probes;
      if (double_caret_at(x, c)) {
        i = c;
        found = true;
        break;
      }
    }
    if (!found) break;
  }
  return removed;
}

}  // namespace detail

namespace {

DoubleTree make_d(std::uint32_t rot) {
  return DoubleTree(CaretTree::balanced(2), CaretTree::balanced(2), rot);
}

// Domain leaves [0,1/2], [1/2,3/4], [3/4,1] go to [3/4,1], [0,1/2],
// [1/2,3/4].
DoubleTree make_c() {
  const CaretTree t = CaretTree::parse("10100");
  return DoubleTree(t, t, 2);
}

}  // namespace

Generators make_generators() {
  // D is the quarter turn t ↦ t - 1/4. The other orientation (rot 1) breaks
  // (CD)^5 = e; see the presentation tests.
  return Generators{DoubleTree(), make_c(), make_d(3)};
}

const Generators& generators() {
  static const Generators gens = make_generators();
  return gens;
}

DoubleTree insert_double_caret(const DoubleTree& x, std::uint32_t domain_leaf) {
  if (domain_leaf >= x.leaf_count()) throw ParameterError("leaf index out of range");
  auto pair = detail::TreePair::from(x);
  detail::insert_double_caret_at_range(pair, pair.range_leaf_of(domain_leaf));
  return std::move(pair).finish();
}

DoubleTree reduce(DoubleTree x) {
  auto pair = detail::TreePair::from(x);
  std::uint32_t i = 0;
  while (i + 1 < pair.leaves()) {
    if (detail::double_caret_at(pair, i)) {
      detail::remove_double_caret(pair, i);
      // The merged leaf's parent may now be a double caret one step left.
      i = i == 0 ? 0 : i - 1;
    } else {
      ++i;
    }
  }
  return std::move(pair).finish();
}

DoubleTree reduce_shuffled(DoubleTree x, std::mt19937_64& rng) {
  auto pair = detail::TreePair::from(x);
  std::vector<std::uint32_t> found;
  while (true) {
    found.clear();
    for (std::uint32_t i = 0; i + 1 < pair.leaves(); ++i) {
      if (detail::double_caret_at(pair, i)) found.push_back(i);
    }
    if (found.empty()) break;
    std::uniform_int_distribution<std::size_t> pick(0, found.size() - 1);
    detail::remove_double_caret(pair, found[pick(rng)]);
  }
  return std::move(pair).finish();
}

namespace {

// Walks two trees in parallel from the root. Wherever one tree stops at a
// leaf while the other continues, that leaf receives the other tree's
// subtree in the common refinement.
struct Refinement {
  std::vector<TreeBits> under_a;  // indexed by leaves of a
  std::vector<TreeBits> under_b;  // indexed by leaves of b
};

void refine(std::span<const std::uint8_t> a, std::size_t& pa, std::span<const std::uint8_t> b,
            std::size_t& pb, Refinement& out) {
  const bool a_caret = a[pa] == 1;
  const bool b_caret = b[pb] == 1;
  if (a_caret && b_caret) {
    ++pa;
    ++pb;
    refine(a, pa, b, pb, out);
    refine(a, pa, b, pb, out);
    return;
  }
  if (!a_caret && !b_caret) {
    out.under_a.push_back({0});
    out.under_b.push_back({0});
    ++pa;
    ++pb;
    return;
  }
  if (!a_caret) {
    const std::size_t end = tree::subtree_end(b, pb);
    out.under_a.emplace_back(b.begin() + static_cast<std::ptrdiff_t>(pb),
                             b.begin() + static_cast<std::ptrdiff_t>(end));
    const std::size_t leaves = tree::leaf_count(b.subspan(pb, end - pb));
    for (std::size_t k = 0; k < leaves; ++k) out.under_b.push_back({0});
    ++pa;
    pb = end;
    return;
  }
  const std::size_t end = tree::subtree_end(a, pa);
  out.under_b.emplace_back(a.begin() + static_cast<std::ptrdiff_t>(pa),
                           a.begin() + static_cast<std::ptrdiff_t>(end));
  const std::size_t leaves = tree::leaf_count(a.subspan(pa, end - pa));
  for (std::size_t k = 0; k < leaves; ++k) out.under_a.push_back({0});
  pa = end;
  ++pb;
}

template <typename SubtreeOf>
TreeBits replace_leaves(const TreeBits& bits, SubtreeOf subtree_of) {
  TreeBits out;
  out.reserve(bits.size() * 2);
  std::uint32_t leaf = 0;
  for (auto b : bits) {
    if (b == 1) {
      out.push_back(1);
    } else {
      const TreeBits& sub = subtree_of(leaf++);
      out.insert(out.end(), sub.begin(), sub.end());
    }
  }
  return out;
}

}  // namespace

DoubleTree compose(const DoubleTree& x, const DoubleTree& y) {
  Refinement r;
  std::size_t pa = 0;
  std::size_t pb = 0;
  refine(y.range(), pa, x.domain(), pb, r);

  const std::uint32_t ly = y.leaf_count();
  const std::uint32_t lx = x.leaf_count();
  auto leaves_of = [](const TreeBits& t) { return static_cast<std::uint32_t>((t.size() + 1) / 2); };

  // Leaf offsets inside the common refinement, seen from y's range and from
  // x's domain.
  std::vector<std::uint32_t> offset_a(ly + 1, 0);
  for (std::uint32_t i = 0; i < ly; ++i) offset_a[i + 1] = offset_a[i] + leaves_of(r.under_a[i]);
  std::vector<std::uint32_t> offset_b(lx + 1, 0);
  for (std::uint32_t k = 0; k < lx; ++k) offset_b[k + 1] = offset_b[k] + leaves_of(r.under_b[k]);

  TreeBits domain = replace_leaves(y.domain(), [&](std::uint32_t j) -> const TreeBits& {
    return r.under_a[y.range_leaf_of(j)];
  });
  TreeBits range = replace_leaves(x.range(), [&](std::uint32_t i) -> const TreeBits& {
    return r.under_b[x.domain_leaf_of(i)];
  });

  // Follow the first leaf of the new domain tree through y and then x.
  const std::uint32_t u = offset_a[y.range_leaf_of(0)];
  const auto it = std::upper_bound(offset_b.begin(), offset_b.end(), u);
  const auto k = static_cast<std::uint32_t>(it - offset_b.begin() - 1);
  const std::uint32_t t = u - offset_b[k];
  const std::uint32_t target_range_leaf = x.range_leaf_of(k);
  std::uint32_t before = 0;
  for (std::uint32_t i = 0; i < target_range_leaf; ++i) {
    before += leaves_of(r.under_b[x.domain_leaf_of(i)]);
  }
  const std::uint32_t total = offset_a[ly];
  const std::uint32_t rot = (before + t) % total;

  return reduce(DoubleTree::from_valid_parts(std::move(range), std::move(domain), rot));
}

DoubleTree inverse(const DoubleTree& x) {
  const std::uint32_t l = x.leaf_count();
  return DoubleTree::from_valid_parts(x.domain(), x.range(), (l - x.rot()) % l);
}

DoubleTree rotate180(const DoubleTree& x) {
  // Mirroring sends leaf k to L-1-k on both sides, which negates the rotation.
  const std::uint32_t l = x.leaf_count();
  return DoubleTree::from_valid_parts(tree::mirrored(x.range()), tree::mirrored(x.domain()),
                                      (l - x.rot()) % l);
}

DoubleTree reverse_inverse(const DoubleTree& x) {
  static const DoubleTree d2 = power(generators().d, 2);
  return compose(d2, compose(rotate180(x), d2));
}

DoubleTree power(const DoubleTree& x, unsigned exponent) {
  DoubleTree out;
  for (unsigned k = 0; k < exponent; ++k) out = compose(x, out);
  return out;
}

namespace {

void append_bits(std::string& out, const TreeBits& bits) {
  std::uint8_t byte = 0;
  unsigned filled = 0;
  for (auto b : bits) {
    byte = static_cast<std::uint8_t>((byte << 1) | b);
    if (++filled == 8) {
      out.push_back(static_cast<char>(byte));
      byte = 0;
      filled = 0;
    }
  }
  if (filled != 0) out.push_back(static_cast<char>(byte << (8 - filled)));
}

TreeBits read_bits(std::string_view in, std::size_t& pos, std::size_t count) {
  const std::size_t nbytes = (count + 7) / 8;
  if (pos + nbytes > in.size()) throw DecodeError("truncated tree field");
  TreeBits bits(count);
  for (std::size_t k = 0; k < count; ++k) {
    const auto byte = static_cast<std::uint8_t>(in[pos + k / 8]);
    bits[k] = (byte >> (7 - k % 8)) & 1;
  }
  const unsigned used = count % 8;
  if (used != 0) {
    const auto last = static_cast<std::uint8_t>(in[pos + nbytes - 1]);
    if ((last & ((1u << (8 - used)) - 1)) != 0) throw DecodeError("non-zero padding bits");
  }
  pos += nbytes;
  return bits;
}

}  // namespace

std::string serialize(const DoubleTree& x) {
  std::string out;
  out.reserve(4 + x.range().size() / 4);
  varint::append(out, std::uint64_t{x.leaf_count()});
  varint::append(out, std::uint64_t{x.rot()});
  append_bits(out, x.range());
  append_bits(out, x.domain());
  return out;
}

DoubleTree deserialize(std::string_view bytes) {
  std::size_t pos = 0;
  const std::uint64_t leaves = varint::read_u64(bytes, pos);
  const std::uint64_t rot = varint::read_u64(bytes, pos);
  if (leaves == 0 || leaves > (std::uint64_t{1} << 30)) throw DecodeError("bad leaf count");
  if (rot >= leaves) throw DecodeError("rotation index out of range");
  const std::size_t nbits = static_cast<std::size_t>(2 * leaves - 1);
  TreeBits range = read_bits(bytes, pos, nbits);
  TreeBits domain = read_bits(bytes, pos, nbits);
  if (pos != bytes.size()) throw DecodeError("trailing bytes after serialized element");
  if (!tree::is_valid(range) || !tree::is_valid(domain)) {
    throw DecodeError("tree field is not a full binary tree");
  }
  return DoubleTree::from_valid_parts(std::move(range), std::move(domain), static_cast<std::uint32_t>(rot));
}

std::strong_ordering compare(const DoubleTree& x, const DoubleTree& y) {
  const int c = serialize(x).compare(serialize(y));
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

PLCircleMap::PLCircleMap(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty() || pieces_.front().domain_start != DyadicPoint{}) {
    throw ParameterError("a circle map needs a piece starting at 0");
  }
  if (!std::is_sorted(pieces_.begin(), pieces_.end(),
                      [](const Piece& a, const Piece& b) { return a.domain_start < b.domain_start; })) {
    throw ParameterError("circle map pieces must be sorted");
  }
}

DyadicPoint PLCircleMap::operator()(const DyadicPoint& t) const {
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), t,
                             [](const DyadicPoint& v, const Piece& p) { return v < p.domain_start; });
  const Piece& piece = *(it - 1);
  return piece.range_start + (t - piece.domain_start).scaled(piece.log_slope);
}

PLCircleMap to_pl_map(const DoubleTree& x) {
  const auto dom = tree::leaf_intervals(x.domain());
  const auto ran = tree::leaf_intervals(x.range());
  std::vector<PLCircleMap::Piece> pieces;
  pieces.reserve(dom.size());
  for (std::uint32_t j = 0; j < dom.size(); ++j) {
    const LeafInterval& r = ran[x.range_leaf_of(j)];
    pieces.push_back({dom[j].start, r.start,
                      static_cast<int>(dom[j].depth) - static_cast<int>(r.depth)});
  }
  return PLCircleMap(std::move(pieces));
}

}  // namespace thompson
