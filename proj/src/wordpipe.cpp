#include "thompson/wordpipe.hpp"

#include <algorithm>
#include <thread>

#include "thompson/errors.hpp"
#include "thompson/group_ring.hpp"

namespace fs = std::filesystem;

namespace thompson {

const std::array<std::pair<Letter, Letter>, 6>& ab_products() {
  static const std::array<std::pair<Letter, Letter>, 6> products = {{
      {Letter::C, Letter::D},
      {Letter::C, Letter::D2},
      {Letter::C, Letter::Dinv},
      {Letter::Cinv, Letter::D},
      {Letter::Cinv, Letter::D2},
      {Letter::Cinv, Letter::Dinv},
  }};
  return products;
}

DoubleTree fast_reverse_inverse(const DoubleTree& x) {
  // D² R(x) D² with x·D² = (D²·x⁻¹)⁻¹, as D² is an involution.
  const DoubleTree r = rotate180(x);
  return left_mul(Letter::D2, inverse(left_mul(Letter::D2, inverse(r))));
}

namespace {

constexpr std::size_t kBatch = 1 << 14;

struct Emitted {
  std::size_t output;
  std::string key;
  Multiplicity multiplicity;
};

void map_range(const std::vector<WordEntry>& batch, std::size_t begin, std::size_t end, const EntryMapper& map,
               std::vector<Emitted>& out) {
  const std::function<void(std::size_t, const DoubleTree&, const Multiplicity&)> emit =
      [&out](std::size_t index, const DoubleTree& y, const Multiplicity& m) {
        out.push_back({index, serialize(y), m});
      };
  for (std::size_t k = begin; k < end; ++k) map(deserialize(batch[k].key), batch[k].multiplicity, emit);
}

}  // namespace

void map_word_file(const fs::path& input, std::vector<WordFileWriter*> outputs, const PipelineOptions& options,
                   const EntryMapper& map) {
  std::vector<std::unique_ptr<ExternalSorter>> sorters;
  const std::size_t share = std::max<std::size_t>(options.chunk_bytes / std::max<std::size_t>(outputs.size(), 1), 1 << 20);
  for (std::size_t k = 0; k < outputs.size(); ++k) {
    sorters.push_back(std::make_unique<ExternalSorter>(
        ExternalSorter::Options{options.workdir / "tmp", share, options.fan_in}));
  }
  const unsigned threads = std::max(1u, options.threads);
  WordFileReader reader(input);
  std::vector<WordEntry> batch;
  std::vector<std::vector<Emitted>> results(threads);
  bool more = true;
  while (more) {
    batch.clear();
    WordEntry e;
    while (batch.size() < kBatch && (more = reader.next(e))) batch.push_back(std::move(e));
    if (batch.empty()) break;
    const std::size_t per = (batch.size() + threads - 1) / threads;
    if (threads == 1) {
      map_range(batch, 0, batch.size(), map, results[0]);
    } else {
      std::vector<std::thread> workers;
      for (unsigned t = 0; t < threads; ++t) {
        const std::size_t begin = std::min(batch.size(), t * per);
        const std::size_t end = std::min(batch.size(), begin + per);
        workers.emplace_back([&, t, begin, end] { map_range(batch, begin, end, map, results[t]); });
      }
      for (auto& w : workers) w.join();
    }
    for (auto& r : results) {
      for (auto& item : r) sorters[item.output]->add(std::move(item.key), item.multiplicity);
      r.clear();
    }
  }
  for (std::size_t k = 0; k < outputs.size(); ++k) sorters[k]->finish(*outputs[k]);
}

void expand_step(const fs::path& input, WordFileWriter& output, const PipelineOptions& options) {
  map_word_file(input, {&output}, options, [](const DoubleTree& x, const Multiplicity& m, const auto& emit) {
    DoubleTree d = x;
    for (int power = 1; power <= 3; ++power) {
      d = left_mul_d(d);
      const DoubleTree c = left_mul_c(d);
      emit(0, c, m);
      emit(0, left_mul_c(c), m);
    }
  });
}

void invert_file(const fs::path& input, WordFileWriter& output, const PipelineOptions& options) {
  map_word_file(input, {&output}, options,
                [](const DoubleTree& x, const Multiplicity& m, const auto& emit) { emit(0, inverse(x), m); });
}

void classify_file(const fs::path& input, bool invert_first, WordFileWriter& smaller, WordFileWriter& equal,
                   const PipelineOptions& options) {
  map_word_file(input, {&smaller, &equal}, options,
                [invert_first](const DoubleTree& x, const Multiplicity& m, const auto& emit) {
                  const DoubleTree w = invert_first ? inverse(x) : x;
                  const DoubleTree j = fast_reverse_inverse(w);
                  const auto order = compare(w, j);
                  if (order < 0) {
                    emit(0, w, m);
                  } else if (order > 0) {
                    // The larger class is the reverse-inverse image of the
                    // smaller one; keep its image instead.
                    emit(0, j, m);
                  } else {
                    emit(1, w, m);
                  }
                });
}

WordPipeline::WordPipeline(PipelineOptions options) : options_(std::move(options)) {
  if (options_.workdir.empty()) throw ParameterError("pipeline needs a work directory");
  fs::create_directories(options_.workdir);
}

fs::path WordPipeline::cache_path(WordVariant variant, unsigned n) const {
  return options_.workdir / (std::string(variant_name(variant)) + "-n" + std::to_string(n) + "-v" +
                             std::to_string(kWordFileVersion) + ".twf");
}

void WordPipeline::log(const std::string& message) const {
  if (options_.log) options_.log(message);
}

bool WordPipeline::cached(const fs::path& path, WordVariant variant, unsigned n) {
  if (verified_.count(path) != 0) return true;
  if (!fs::exists(path)) return false;
  try {
    const WordFileHeader h = verify_word_file(path);
    if (h.n != n || h.variant != variant) throw IntegrityError("header does not match cache key", path.string());
  } catch (const IntegrityError& e) {
    log(std::string("cache file rejected, rebuilding: ") + e.what());
    fs::remove(path);
    return false;
  }
  verified_.insert(path);
  ++cache_hits_;
  log("cache hit " + path.filename().string());
  return true;
}

fs::path WordPipeline::ab_power(unsigned n) {
  const fs::path path = cache_path(WordVariant::AbPower, n);
  if (cached(path, WordVariant::AbPower, n)) return path;
  WordFileWriter out(path, n, WordVariant::AbPower);
  if (n == 0) {
    out.append(serialize(DoubleTree()), 1);
  } else {
    const fs::path previous = ab_power(n - 1);
    log("expanding (ab)^" + std::to_string(n));
    expand_step(previous, out, options_);
  }
  out.commit();
  verified_.insert(path);
  ++files_built_;
  return path;
}

fs::path WordPipeline::ba_power(unsigned n) {
  const fs::path path = cache_path(WordVariant::BaPower, n);
  if (cached(path, WordVariant::BaPower, n)) return path;
  const fs::path source = ab_power(n);
  log("inverting (ab)^" + std::to_string(n));
  WordFileWriter out(path, n, WordVariant::BaPower);
  invert_file(source, out, options_);
  out.commit();
  verified_.insert(path);
  ++files_built_;
  return path;
}

fs::path WordPipeline::half(unsigned n) {
  if (n == 0) throw ParameterError("the half file starts at n = 1");
  const fs::path path = cache_path(WordVariant::Half, n);
  if (cached(path, WordVariant::Half, n)) return path;
  const fs::path source = ab_power(n - 1);
  log("expanding C b (ab)^" + std::to_string(n - 1));
  WordFileWriter out(path, n, WordVariant::Half);
  map_word_file(source, {&out}, options_, [](const DoubleTree& x, const Multiplicity& m, const auto& emit) {
    DoubleTree d = x;
    for (int power = 1; power <= 3; ++power) {
      d = left_mul_d(d);
      emit(0, left_mul_c(d), m);
    }
  });
  out.commit();
  verified_.insert(path);
  ++files_built_;
  return path;
}

void WordPipeline::build_classes(unsigned n, bool primed) {
  const WordVariant sv = primed ? WordVariant::SmallerPrimed : WordVariant::Smaller;
  const WordVariant ev = primed ? WordVariant::EqualPrimed : WordVariant::Equal;
  const fs::path source = half(n);
  log(std::string("classifying ") + (primed ? "inverted " : "") + "half file n=" + std::to_string(n));
  WordFileWriter s(cache_path(sv, n), n, sv);
  WordFileWriter e(cache_path(ev, n), n, ev);
  classify_file(source, primed, s, e, options_);
  s.commit();
  e.commit();
  verified_.insert(s.path());
  verified_.insert(e.path());
  files_built_ += 2;
}

fs::path WordPipeline::smaller(unsigned n, bool primed) {
  const WordVariant sv = primed ? WordVariant::SmallerPrimed : WordVariant::Smaller;
  const WordVariant ev = primed ? WordVariant::EqualPrimed : WordVariant::Equal;
  const fs::path path = cache_path(sv, n);
  if (!cached(path, sv, n) || !cached(cache_path(ev, n), ev, n)) build_classes(n, primed);
  return path;
}

fs::path WordPipeline::equal(unsigned n, bool primed) {
  smaller(n, primed);
  return cache_path(primed ? WordVariant::EqualPrimed : WordVariant::Equal, n);
}

mpz_class WordPipeline::zeta_direct(unsigned n) {
  if (n == 0) throw ParameterError("zeta is defined for n >= 1");
  const unsigned k = n / 2;
  const fs::path ab = ab_power(n % 2 == 0 ? k : k + 1);
  const fs::path ba = ba_power(k);
  return inner_product(ab, ba);
}

ZetaRecord WordPipeline::zeta_halved(unsigned n) {
  if (n == 0) throw ParameterError("zeta is defined for n >= 1");
  ZetaRecord r;
  r.n = n;
  if (n == 1) {
    r.zeta = zeta_direct(1);
    return r;
  }
  const unsigned k = n / 2;
  const unsigned kp = n % 2 == 0 ? k : k + 1;
  r.zeta_s = inner_product(smaller(k, false), smaller(kp, true));
  r.zeta_e = inner_product(equal(k, false), equal(kp, true));
  r.zeta = 2 * r.zeta_s + 4 * r.zeta_e;
  return r;
}

mpz_class brute_force_zeta(unsigned n, std::size_t memory_budget) {
  GroupRingVector v = GroupRingVector::identity();
  for (unsigned step = 0; step < n; ++step) {
    std::size_t key_bytes = 0;
    for (const auto& [key, c] : v.terms()) key_bytes = std::max(key_bytes, key.size());
    const std::size_t estimate = estimate_group_ring_bytes(v.size() * 6, key_bytes + 2) + v.memory_bytes();
    if (estimate > memory_budget) {
      throw ResourceError("in-memory expansion of (ab)^" + std::to_string(n) + " needs about " +
                          std::to_string(estimate >> 20) + " MiB at step " + std::to_string(step + 1) +
                          ", budget is " + std::to_string(memory_budget >> 20) + " MiB");
    }
    GroupRingVector next;
    for (const auto& [c_letter, d_letter] : ab_products()) next += v.left_mul(d_letter).left_mul(c_letter);
    v = std::move(next);
  }
  return v.trace();
}

}  // namespace thompson
