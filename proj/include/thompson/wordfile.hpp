#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "thompson/multiplicity.hpp"

namespace thompson {

// What a word file holds. Stored in the header and part of the cache key.
enum class WordVariant : std::uint32_t {
  AbPower = 1,        // terms of (ab)^n
  Half = 2,           // terms of C b (ab)^(n-1)
  Smaller = 3,        // S_n: elements smaller than their reverse-inverse, plus the images of the larger ones
  Equal = 4,          // E_n: elements fixed by reverse-inverse
  SmallerPrimed = 5,  // S'_n, built from the inverses of the Half file
  EqualPrimed = 6,    // E'_n
  BaPower = 7,        // terms of (ba)^n
  SortRun = 100,      // intermediate run of the external sorter
};

std::string_view variant_name(WordVariant v) noexcept;

inline constexpr std::uint32_t kWordFileVersion = 1;
inline constexpr std::size_t kWordFileHeaderSize = 60;

struct WordFileHeader {
  std::uint32_t version = kWordFileVersion;
  std::uint32_t n = 0;
  WordVariant variant = WordVariant::AbPower;
  std::uint64_t entries = 0;
  mpz_class total_mass = 0;  // stored as a 256-bit little-endian field
  std::uint32_t checksum = 0;  // CRC-32 of the body
};

struct WordEntry {
  std::string key;
  Multiplicity multiplicity;
};

// Writes a sorted word file. Output goes to "<path>.tmp" and is renamed into
// place by commit(), so a file under the final name is always complete.
class WordFileWriter {
 public:
  WordFileWriter(std::filesystem::path path, std::uint32_t n, WordVariant variant);
  ~WordFileWriter();
  WordFileWriter(const WordFileWriter&) = delete;
  WordFileWriter& operator=(const WordFileWriter&) = delete;

  // Keys must arrive strictly increasing; zero multiplicities are skipped.
  void append(std::string_view key, const Multiplicity& multiplicity);
  const WordFileHeader& commit();

  const std::filesystem::path& path() const noexcept { return path_; }
  const WordFileHeader& header() const noexcept { return header_; }

 private:
  void flush();

  std::filesystem::path path_;
  std::filesystem::path tmp_path_;
  std::ofstream out_;
  std::string buffer_;
  std::string last_key_;
  bool has_last_ = false;
  bool committed_ = false;
  WordFileHeader header_;
};

// Streams the entries of a word file. Key order, entry count, total mass and
// checksum are verified as the body is consumed; any mismatch raises
// IntegrityError naming the file.
class WordFileReader {
 public:
  explicit WordFileReader(std::filesystem::path path);

  const WordFileHeader& header() const noexcept { return header_; }
  const std::filesystem::path& path() const noexcept { return path_; }
  bool next(WordEntry& entry);

 private:
  bool fill(std::size_t want);
  [[noreturn]] void corrupt(const std::string& what) const;

  std::filesystem::path path_;
  std::ifstream in_;
  WordFileHeader header_;
  std::string buffer_;
  std::size_t pos_ = 0;
  std::uint64_t body_left_ = 0;
  std::uint32_t crc_ = 0;
  std::uint64_t seen_ = 0;
  mpz_class mass_ = 0;
  std::string last_key_;
  bool done_ = false;
};

// Reads the whole file; throws IntegrityError on any inconsistency.
WordFileHeader verify_word_file(const std::filesystem::path& path);
// Reads only the fixed header; throws IntegrityError if it is malformed.
WordFileHeader read_word_file_header(const std::filesystem::path& path);

std::string base64_encode(std::string_view bytes);
std::string base64_decode(std::string_view text);

// Line format "base64key<TAB>multiplicity\n", in key order.
void export_text(const std::filesystem::path& word_file, std::ostream& out);

// Sorts and coalesces an unbounded stream of (key, multiplicity) pairs in
// bounded memory: chunks are sorted in memory, spilled as run files and
// merged k ways.
class ExternalSorter {
 public:
  struct Options {
    std::filesystem::path scratch_dir;
    std::size_t chunk_bytes = std::size_t{1} << 30;
    std::size_t fan_in = 64;
  };

  explicit ExternalSorter(Options options);
  ~ExternalSorter();
  ExternalSorter(const ExternalSorter&) = delete;
  ExternalSorter& operator=(const ExternalSorter&) = delete;

  void add(std::string key, const Multiplicity& multiplicity);
  // Writes every coalesced entry to `out` (which the caller commits).
  void finish(WordFileWriter& out);

  std::size_t runs_spilled() const noexcept { return runs_spilled_; }

 private:
  void spill();
  std::filesystem::path next_run_path();
  void merge(const std::vector<std::filesystem::path>& inputs, WordFileWriter& out);

  Options options_;
  std::vector<WordEntry> chunk_;
  std::size_t chunk_bytes_used_ = 0;
  std::vector<std::filesystem::path> runs_;
  std::size_t runs_spilled_ = 0;
  std::size_t run_counter_ = 0;
};

// Sum over common keys of the product of the multiplicities, by a single
// merge-join pass.
mpz_class inner_product(const std::filesystem::path& a, const std::filesystem::path& b);

}  // namespace thompson
