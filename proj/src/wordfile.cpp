#include "thompson/wordfile.hpp"

#include <algorithm>
#include <array>
#include <queue>
#include <random>

#include <boost/beast/core/detail/base64.hpp>
#include <zlib.h>

#include "thompson/errors.hpp"
#include "thompson/varint.hpp"

namespace fs = std::filesystem;

namespace thompson {

namespace {

constexpr std::array<char, 4> kMagic = {'T', 'W', 'F', '1'};
constexpr std::size_t kMassBytes = 32;
constexpr std::size_t kIoChunk = std::size_t{1} << 20;

void put_u32(std::string& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<char>((v >> (8 * k)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int k = 0; k < 8; ++k) out.push_back(static_cast<char>((v >> (8 * k)) & 0xff));
}

std::uint64_t get_le(std::string_view in, std::size_t pos, int bytes) {
  std::uint64_t v = 0;
  for (int k = 0; k < bytes; ++k) {
    v |= std::uint64_t{static_cast<std::uint8_t>(in[pos + static_cast<std::size_t>(k)])} << (8 * k);
  }
  return v;
}

std::string encode_header(const WordFileHeader& h, const fs::path& path) {
  std::string out(kMagic.begin(), kMagic.end());
  put_u32(out, h.version);
  put_u32(out, h.n);
  put_u32(out, static_cast<std::uint32_t>(h.variant));
  put_u64(out, h.entries);
  if (mpz_sizeinbase(h.total_mass.get_mpz_t(), 256) > kMassBytes) {
    throw ResourceError("total mass does not fit the header field of " + path.string());
  }
  std::array<unsigned char, kMassBytes> mass{};
  std::size_t count = 0;
  mpz_export(mass.data(), &count, -1, 1, 0, 0, h.total_mass.get_mpz_t());
  out.append(reinterpret_cast<const char*>(mass.data()), kMassBytes);
  put_u32(out, h.checksum);
  return out;
}

WordFileHeader decode_header(std::string_view in, const fs::path& path) {
  if (in.size() != kWordFileHeaderSize || !std::equal(kMagic.begin(), kMagic.end(), in.begin())) {
    throw IntegrityError("not a word file (bad magic or short header)", path.string());
  }
  WordFileHeader h;
  h.version = static_cast<std::uint32_t>(get_le(in, 4, 4));
  if (h.version != kWordFileVersion) {
    throw IntegrityError("unsupported word file version " + std::to_string(h.version), path.string());
  }
  h.n = static_cast<std::uint32_t>(get_le(in, 8, 4));
  h.variant = static_cast<WordVariant>(get_le(in, 12, 4));
  h.entries = get_le(in, 16, 8);
  mpz_import(h.total_mass.get_mpz_t(), kMassBytes, -1, 1, 0, 0, in.data() + 24);
  h.checksum = static_cast<std::uint32_t>(get_le(in, 24 + kMassBytes, 4));
  return h;
}

std::uint32_t crc_update(std::uint32_t crc, std::string_view bytes) {
  // zlib takes uInt lengths; feed large buffers in pieces.
  while (!bytes.empty()) {
    const std::size_t n = std::min<std::size_t>(bytes.size(), 1u << 30);
    crc = static_cast<std::uint32_t>(
        crc32(crc, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(n)));
    bytes.remove_prefix(n);
  }
  return crc;
}

}  // namespace

std::string_view variant_name(WordVariant v) noexcept {
  switch (v) {
    case WordVariant::AbPower: return "ab";
    case WordVariant::Half: return "half";
    case WordVariant::Smaller: return "smaller";
    case WordVariant::Equal: return "equal";
    case WordVariant::SmallerPrimed: return "smaller-primed";
    case WordVariant::EqualPrimed: return "equal-primed";
    case WordVariant::BaPower: return "ba";
    case WordVariant::SortRun: return "run";
  }
  return "unknown";
}

WordFileWriter::WordFileWriter(fs::path path, std::uint32_t n, WordVariant variant)
    : path_(std::move(path)), tmp_path_(path_.string() + ".tmp") {
  header_.n = n;
  header_.variant = variant;
  out_.open(tmp_path_, std::ios::binary | std::ios::trunc);
  if (!out_) throw ResourceError("cannot create " + tmp_path_.string());
  out_.write(std::string(kWordFileHeaderSize, '\0').data(), kWordFileHeaderSize);
  buffer_.reserve(kIoChunk + 1024);
}

WordFileWriter::~WordFileWriter() {
  if (!committed_) {
    out_.close();
    std::error_code ec;
    fs::remove(tmp_path_, ec);
  }
}

void WordFileWriter::append(std::string_view key, const Multiplicity& multiplicity) {
  if (committed_) throw Error("append after commit on " + path_.string());
  if (multiplicity.is_zero()) return;
  if (has_last_ && key <= std::string_view(last_key_)) {
    throw IntegrityError("keys written out of order", path_.string());
  }
  last_key_.assign(key);
  has_last_ = true;
  varint::append(buffer_, std::uint64_t{key.size()});
  buffer_.append(key);
  multiplicity.append_to(buffer_);
  ++header_.entries;
  header_.total_mass += multiplicity.to_mpz();
  if (buffer_.size() >= kIoChunk) flush();
}

void WordFileWriter::flush() {
  header_.checksum = crc_update(header_.checksum, buffer_);
  out_.write(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
  if (!out_) throw ResourceError("write failed on " + tmp_path_.string() + " (disk full?)");
  buffer_.clear();
}

const WordFileHeader& WordFileWriter::commit() {
  if (committed_) return header_;
  flush();
  const std::string head = encode_header(header_, path_);
  out_.seekp(0);
  out_.write(head.data(), static_cast<std::streamsize>(head.size()));
  out_.close();
  if (!out_) throw ResourceError("write failed on " + tmp_path_.string() + " (disk full?)");
  fs::rename(tmp_path_, path_);
  committed_ = true;
  return header_;
}

WordFileReader::WordFileReader(fs::path path) : path_(std::move(path)) {
  in_.open(path_, std::ios::binary);
  if (!in_) throw IntegrityError("cannot open word file", path_.string());
  std::string head(kWordFileHeaderSize, '\0');
  in_.read(head.data(), static_cast<std::streamsize>(head.size()));
  head.resize(static_cast<std::size_t>(in_.gcount()));
  header_ = decode_header(head, path_);
  std::error_code ec;
  const auto size = fs::file_size(path_, ec);
  if (ec || size < kWordFileHeaderSize) throw IntegrityError("cannot size word file", path_.string());
  body_left_ = size - kWordFileHeaderSize;
}

void WordFileReader::corrupt(const std::string& what) const { throw IntegrityError(what, path_.string()); }

bool WordFileReader::fill(std::size_t want) {
  if (buffer_.size() - pos_ >= want) return true;
  if (body_left_ == 0) return false;
  buffer_.erase(0, pos_);
  pos_ = 0;
  while (buffer_.size() < want && body_left_ > 0) {
    const std::size_t n = static_cast<std::size_t>(std::min<std::uint64_t>(body_left_, std::max(want, kIoChunk)));
    const std::size_t old = buffer_.size();
    buffer_.resize(old + n);
    in_.read(buffer_.data() + old, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) corrupt("short read");
    crc_ = crc_update(crc_, std::string_view(buffer_).substr(old, n));
    body_left_ -= n;
  }
  return buffer_.size() - pos_ >= want;
}

bool WordFileReader::next(WordEntry& entry) {
  if (done_) return false;
  if (!fill(1)) {
    done_ = true;
    if (crc_ != header_.checksum) corrupt("checksum mismatch");
    if (seen_ != header_.entries) corrupt("entry count does not match header");
    if (mass_ != header_.total_mass) corrupt("total mass does not match header");
    return false;
  }
  try {
    // Grow the window until one whole record is buffered.
    std::size_t want = 16;
    while (true) {
      fill(want);
      const std::string_view view = std::string_view(buffer_).substr(pos_);
      std::size_t p = 0;
      bool complete = true;
      std::uint64_t key_len = 0;
      try {
        key_len = varint::read_u64(view, p);
        if (key_len > view.size() - p) {
          complete = false;
        } else {
          entry.key.assign(view.substr(p, key_len));
          p += key_len;
          entry.multiplicity = Multiplicity::read(view, p);
        }
      } catch (const DecodeError&) {
        if (body_left_ == 0) throw;
        complete = false;
      }
      if (complete) {
        pos_ += p;
        break;
      }
      if (body_left_ == 0) corrupt("truncated record");
      want = std::max<std::size_t>(want * 2, 16 + static_cast<std::size_t>(std::min<std::uint64_t>(key_len, 1u << 30)) + 16);
    }
  } catch (const DecodeError& e) {
    corrupt(std::string("malformed record: ") + e.what());
  }
  if (seen_ > 0 && entry.key <= last_key_) corrupt("keys out of order");
  if (entry.multiplicity.is_zero()) corrupt("zero multiplicity");
  last_key_ = entry.key;
  ++seen_;
  mass_ += entry.multiplicity.to_mpz();
  return true;
}

WordFileHeader verify_word_file(const fs::path& path) {
  WordFileReader reader(path);
  WordEntry e;
  while (reader.next(e)) {
  }
  return reader.header();
}

WordFileHeader read_word_file_header(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IntegrityError("cannot open word file", path.string());
  std::string head(kWordFileHeaderSize, '\0');
  in.read(head.data(), static_cast<std::streamsize>(head.size()));
  head.resize(static_cast<std::size_t>(in.gcount()));
  return decode_header(head, path);
}

std::string base64_encode(std::string_view bytes) {
  namespace b64 = boost::beast::detail::base64;
  std::string out(b64::encoded_size(bytes.size()), '\0');
  out.resize(b64::encode(out.data(), bytes.data(), bytes.size()));
  return out;
}

std::string base64_decode(std::string_view text) {
  namespace b64 = boost::beast::detail::base64;
  if (text.size() % 4 != 0) throw DecodeError("base64 length is not a multiple of 4");
  std::string out(b64::decoded_size(text.size()), '\0');
  const auto [written, read] = b64::decode(out.data(), text.data(), text.size());
  // Decoding stops at the padding.
  const std::string_view rest = text.substr(read);
  if (rest.size() > 2 || rest.find_first_not_of('=') != std::string_view::npos) throw DecodeError("invalid base64");
  out.resize(written);
  return out;
}

void export_text(const fs::path& word_file, std::ostream& out) {
  WordFileReader reader(word_file);
  WordEntry e;
  while (reader.next(e)) out << base64_encode(e.key) << '\t' << e.multiplicity.to_string() << '\n';
}

ExternalSorter::ExternalSorter(Options options) : options_(std::move(options)) {
  if (options_.fan_in < 2) throw ParameterError("merge fan-in must be at least 2");
  fs::create_directories(options_.scratch_dir);
}

ExternalSorter::~ExternalSorter() {
  std::error_code ec;
  for (const auto& run : runs_) fs::remove(run, ec);
}

void ExternalSorter::add(std::string key, const Multiplicity& multiplicity) {
  chunk_bytes_used_ += key.capacity() + sizeof(WordEntry) + 16;
  chunk_.push_back({std::move(key), multiplicity});
  if (chunk_bytes_used_ >= options_.chunk_bytes) spill();
}

namespace {

void sort_and_coalesce(std::vector<WordEntry>& entries) {
  std::sort(entries.begin(), entries.end(), [](const WordEntry& a, const WordEntry& b) { return a.key < b.key; });
  std::size_t out = 0;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (out > 0 && entries[out - 1].key == entries[k].key) {
      entries[out - 1].multiplicity += entries[k].multiplicity;
    } else {
      if (out != k) entries[out] = std::move(entries[k]);
      ++out;
    }
  }
  entries.resize(out);
}

}  // namespace

fs::path ExternalSorter::next_run_path() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  return options_.scratch_dir / ("run-" + std::to_string(rng()) + "-" + std::to_string(run_counter_++) + ".twf");
}

void ExternalSorter::spill() {
  if (chunk_.empty()) return;
  sort_and_coalesce(chunk_);
  WordFileWriter writer(next_run_path(), 0, WordVariant::SortRun);
  for (const auto& e : chunk_) writer.append(e.key, e.multiplicity);
  writer.commit();
  runs_.push_back(writer.path());
  ++runs_spilled_;
  chunk_.clear();
  chunk_.shrink_to_fit();
  chunk_bytes_used_ = 0;
}

void ExternalSorter::merge(const std::vector<fs::path>& inputs, WordFileWriter& out) {
  std::vector<std::unique_ptr<WordFileReader>> readers;
  std::vector<WordEntry> heads(inputs.size());
  using Item = std::pair<std::string_view, std::size_t>;
  auto greater = [](const Item& a, const Item& b) { return a.first != b.first ? a.first > b.first : a.second > b.second; };
  std::priority_queue<Item, std::vector<Item>, decltype(greater)> queue(greater);
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    readers.push_back(std::make_unique<WordFileReader>(inputs[k]));
    if (readers[k]->next(heads[k])) queue.emplace(heads[k].key, k);
  }
  std::string key;
  Multiplicity sum;
  bool pending = false;
  while (!queue.empty()) {
    const std::size_t k = queue.top().second;
    queue.pop();
    if (pending && heads[k].key == key) {
      sum += heads[k].multiplicity;
    } else {
      if (pending) out.append(key, sum);
      key = heads[k].key;
      sum = heads[k].multiplicity;
      pending = true;
    }
    if (readers[k]->next(heads[k])) queue.emplace(heads[k].key, k);
  }
  if (pending) out.append(key, sum);
}

void ExternalSorter::finish(WordFileWriter& out) {
  if (runs_.empty()) {
    sort_and_coalesce(chunk_);
    for (const auto& e : chunk_) out.append(e.key, e.multiplicity);
    chunk_.clear();
    chunk_bytes_used_ = 0;
    return;
  }
  spill();
  while (runs_.size() > options_.fan_in) {
    std::vector<fs::path> next;
    for (std::size_t start = 0; start < runs_.size(); start += options_.fan_in) {
      const std::size_t end = std::min(runs_.size(), start + options_.fan_in);
      std::vector<fs::path> group(runs_.begin() + static_cast<std::ptrdiff_t>(start),
                                  runs_.begin() + static_cast<std::ptrdiff_t>(end));
      if (group.size() == 1) {
        next.push_back(group.front());
        continue;
      }
      WordFileWriter writer(next_run_path(), 0, WordVariant::SortRun);
      merge(group, writer);
      writer.commit();
      for (const auto& p : group) fs::remove(p);
      next.push_back(writer.path());
    }
    runs_ = std::move(next);
  }
  merge(runs_, out);
  for (const auto& p : runs_) fs::remove(p);
  runs_.clear();
}

mpz_class inner_product(const fs::path& a, const fs::path& b) {
  WordFileReader ra(a);
  WordFileReader rb(b);
  WordEntry ea;
  WordEntry eb;
  mpz_class total = 0;
  bool has_a = ra.next(ea);
  bool has_b = rb.next(eb);
  while (has_a && has_b) {
    if (ea.key < eb.key) {
      has_a = ra.next(ea);
    } else if (eb.key < ea.key) {
      has_b = rb.next(eb);
    } else {
      total += ea.multiplicity.to_mpz() * eb.multiplicity.to_mpz();
      has_a = ra.next(ea);
      has_b = rb.next(eb);
    }
  }
  // Drain both so that checksums and counts are verified.
  while (has_a) has_a = ra.next(ea);
  while (has_b) has_b = rb.next(eb);
  return total;
}

}  // namespace thompson
