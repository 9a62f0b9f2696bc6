#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <set>
#include <string_view>
#include <utility>

#include <gmpxx.h>

#include "thompson/taction.hpp"
#include "thompson/wordfile.hpp"

namespace thompson {

// The six terms of ab for a = C + C², b = D + D² + D³, as (C-letter, D-letter).
// Each product is applied to an element x as C-letter·(D-letter·x).
const std::array<std::pair<Letter, Letter>, 6>& ab_products();

// Reverse-inverse computed with the left actions only; agrees with
// reverse_inverse().
DoubleTree fast_reverse_inverse(const DoubleTree& x);

struct PipelineOptions {
  std::filesystem::path workdir;
  std::size_t chunk_bytes = std::size_t{1} << 30;
  std::size_t fan_in = 64;
  unsigned threads = 1;
  // Receives progress and cache messages; may be empty.
  std::function<void(std::string_view)> log;
};

struct ZetaRecord {
  unsigned n = 0;
  mpz_class zeta_s = 0;
  mpz_class zeta_e = 0;
  mpz_class zeta = 0;
};

// Maps every entry of a sorted word file through `map`, which emits
// (output index, element, multiplicity) triples, and writes each output
// sorted and coalesced. Work is spread over `threads` workers in batches;
// the result does not depend on the thread count.
using EntryMapper =
    std::function<void(const DoubleTree& x, const Multiplicity& m,
                       const std::function<void(std::size_t, const DoubleTree&, const Multiplicity&)>& emit)>;
void map_word_file(const std::filesystem::path& input, std::vector<WordFileWriter*> outputs,
                   const PipelineOptions& options, const EntryMapper& map);

// File of (ab)^(n+1) from the file of (ab)^n.
void expand_step(const std::filesystem::path& input, WordFileWriter& output, const PipelineOptions& options);
// Element-wise inverse.
void invert_file(const std::filesystem::path& input, WordFileWriter& output, const PipelineOptions& options);
// Splits a file of terms of C b (ab)^(n-1) into the smaller and equal classes
// with respect to reverse-inverse. With `invert_first`, every element is
// inverted before classification (the primed classes).
void classify_file(const std::filesystem::path& input, bool invert_first, WordFileWriter& smaller,
                   WordFileWriter& equal, const PipelineOptions& options);

// Cached, resumable computation of the cyclic reduced numbers. Files live in
// the work directory under names derived from (variant, n, format version);
// a cached file is reused only after its checksum has been verified.
class WordPipeline {
 public:
  explicit WordPipeline(PipelineOptions options);

  std::filesystem::path cache_path(WordVariant variant, unsigned n) const;

  std::filesystem::path ab_power(unsigned n);
  std::filesystem::path ba_power(unsigned n);
  // Terms of C b (ab)^(n-1), n ≥ 1.
  std::filesystem::path half(unsigned n);
  std::filesystem::path smaller(unsigned n, bool primed);
  std::filesystem::path equal(unsigned n, bool primed);

  // τ((ab)^n) as ⟨(ab)^k, (ba)^k⟩ for n = 2k and ⟨(ab)^(k+1), (ba)^k⟩ for
  // n = 2k + 1.
  mpz_class zeta_direct(unsigned n);
  // ζ = 2ζ^s + 4ζ^e from the smaller/equal split. For n = 1 the split is
  // empty and ζ_1 comes from the direct route.
  ZetaRecord zeta_halved(unsigned n);

  std::size_t cache_hits() const noexcept { return cache_hits_; }
  std::size_t files_built() const noexcept { return files_built_; }

 private:
  bool cached(const std::filesystem::path& path, WordVariant variant, unsigned n);
  void log(const std::string& message) const;
  void build_classes(unsigned n, bool primed);

  PipelineOptions options_;
  std::set<std::filesystem::path> verified_;
  std::size_t cache_hits_ = 0;
  std::size_t files_built_ = 0;
};

// τ((ab)^n) by expanding (ab)^n in memory. Throws ResourceError, with the
// estimated requirement, when the expansion would exceed `memory_budget`.
mpz_class brute_force_zeta(unsigned n, std::size_t memory_budget = std::size_t{1} << 30);

}  // namespace thompson
