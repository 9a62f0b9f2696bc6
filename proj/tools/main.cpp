#include <cstdlib>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "checks.hpp"
#include "thompson/density.hpp"
#include "thompson/errors.hpp"
#include "thompson/freeprob.hpp"
#include "thompson/golden.hpp"
#include "thompson/momentbridge.hpp"
#include "thompson/selfadjoint.hpp"
#include "thompson/specnorm.hpp"
#include "thompson/wordpipe.hpp"

namespace fs = std::filesystem;
using namespace thompson;

namespace {

// Exit-code contract.
enum Exit : int {
  kOk = 0,
  kCheckFailed = 1,
  kUsage = 2,
  kIntegrity = 3,
  kResource = 4,
  kCorruptInput = 5,
  kNumerical = 6,
  kInternal = 10,
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string workdir = ".thompson-cache";
  std::size_t memory_budget = std::size_t{4} << 30;
  unsigned threads = 1;
  unsigned max_n = 10;
  std::string format = "csv";
  unsigned precision = 5;
  bool quick = false;
  bool verbose = false;

  void validate() const {
    if (memory_budget < (std::size_t{256} << 20)) throw UsageError("--mem must be at least 256 MiB");
    if (max_n < 1) throw UsageError("--max-n must be at least 1");
    if (threads < 1) throw UsageError("--threads must be at least 1");
  }
  std::function<void(std::string_view)> logger() const {
    if (!verbose) return {};
    return [](std::string_view m) { std::cerr << m << '\n'; };
  }
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

void emit(const Table& t, const std::string& format, std::ostream& out) {
  if (format == "csv") {
    for (std::size_t i = 0; i < t.header.size(); ++i) out << (i ? "," : "") << t.header[i];
    out << "\r\n";
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
      out << "\r\n";
    }
  } else if (format == "json") {
    // Values stay strings: big integers and rounded decimals are exact text.
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
      nlohmann::ordered_json obj;
      for (std::size_t i = 0; i < row.size(); ++i) obj[t.header[i]] = row[i];
      rows.push_back(std::move(obj));
    }
    out << rows.dump(2) << '\n';
  } else {
    throw UsageError("format '" + format + "' is not available for tables; use csv or json");
  }
}

PipelineOptions pipeline_options(const RunConfig& cfg) {
  PipelineOptions o;
  o.workdir = fs::path(cfg.workdir) / "pipeline";
  o.chunk_bytes = cfg.memory_budget / 4;
  o.threads = cfg.threads;
  o.log = cfg.logger();
  return o;
}

std::vector<mpz_class> computed_zetas(const RunConfig& cfg, const std::string& variant, std::vector<ZetaRecord>* records) {
  WordPipeline pipe(pipeline_options(cfg));
  std::vector<mpz_class> zetas;
  for (unsigned n = 1; n <= cfg.max_n; ++n) {
    ZetaRecord r;
    if (variant == "halved") {
      r = pipe.zeta_halved(n);
    } else {
      r.n = n;
      r.zeta = pipe.zeta_direct(n);
    }
    zetas.push_back(r.zeta);
    if (records) records->push_back(r);
  }
  if (cfg.verbose) std::cerr << "cache hits " << pipe.cache_hits() << ", files built " << pipe.files_built() << '\n';
  return zetas;
}

MomentTable moments_for(const RunConfig& cfg, const std::string& source, const std::string& which) {
  if (source == "reference") {
    std::vector<mpz_class> m;
    if (which == "qr") {
      for (const auto& row : golden::zeta_moments()) m.push_back(row.m);
      return make_moment_table(MomentConvention::TwoProjections, m);
    }
    for (const auto& row : golden::cogrowth()) m.push_back(row.m);
    return make_moment_table(MomentConvention::GeneratorSum, m);
  }
  if (which == "qr") return zeta_to_moments(computed_zetas(cfg, "halved", nullptr));
  return generator_sum_moments(cfg.max_n, cfg.memory_budget, cfg.threads);
}

int cmd_zeta(const RunConfig& cfg, const std::string& variant) {
  std::vector<ZetaRecord> records;
  const auto zetas = computed_zetas(cfg, variant, &records);
  const MomentTable m = zeta_to_moments(zetas);
  Table t{{"n", "zeta_s", "zeta_e", "zeta", "m"}, {}};
  for (const auto& r : records) {
    const bool split = variant == "halved";
    t.rows.push_back({std::to_string(r.n), split ? r.zeta_s.get_str() : "", split ? r.zeta_e.get_str() : "",
                      r.zeta.get_str(), m.m[r.n].get_str()});
  }
  emit(t, cfg.format, std::cout);
  return kOk;
}

int cmd_bridge(const RunConfig& cfg, const std::string& input) {
  std::vector<mpz_class> zetas;
  if (input.empty()) {
    for (const auto& row : golden::zeta_moments()) zetas.push_back(row.zeta);
  } else {
    if (!fs::exists(input)) throw UsageError("input file not found: " + input);
    unsigned expect = 1;
    for (const auto& row : golden::read_csv(input, "n,zeta")) {
      if (row.size() != 2 || row[0] != std::to_string(expect)) {
        throw InputCorruptionError("rows must be n = 1, 2, ... in order: " + input);
      }
      zetas.emplace_back(row[1]);
      ++expect;
    }
  }
  const MomentTable m = zeta_to_moments(zetas);
  const auto back = moments_to_zeta(m);
  for (std::size_t i = 0; i < zetas.size(); ++i) {
    if (back[i] != mpq_class(zetas[i])) throw IntegrityError("round trip failed at n = " + std::to_string(i + 1));
  }
  Table t{{"n", "zeta", "m"}, {}};
  for (std::size_t n = 1; n <= zetas.size(); ++n) t.rows.push_back({std::to_string(n), zetas[n - 1].get_str(), m.m[n].get_str()});
  emit(t, cfg.format, std::cout);
  return kOk;
}

std::optional<std::pair<unsigned, unsigned>> parse_window(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("--fit-window expects FROM:TO");
  try {
    return std::pair<unsigned, unsigned>(std::stoul(text.substr(0, colon)), std::stoul(text.substr(colon + 1)));
  } catch (const std::exception&) {
    throw UsageError("--fit-window expects FROM:TO");
  }
}

int cmd_estimate(const RunConfig& cfg, const std::string& source, const std::string& which,
                 const std::string& window_text) {
  const auto window = parse_window(window_text);
  const auto rows = estimator_table(moments_for(cfg, source, which));
  Table t{{"n", "root", "ratio", "alpha", "lambda_max", "bracket"}, {}};
  for (const auto& r : rows) {
    t.rows.push_back({std::to_string(r.n), round_half_even(r.root, cfg.precision),
                      round_half_even(r.ratio, cfg.precision), round_half_even(r.alpha, cfg.precision),
                      round_half_even(r.lambda_max, cfg.precision),
                      r.bracket ? round_half_even(*r.bracket, cfg.precision) : ""});
  }
  emit(t, cfg.format, std::cout);
  if (window) {
    const auto [from, to] = *window;
    if (from < 1 || to > rows.size() || from > to) throw UsageError("fit window outside the computed rows");
    std::vector<double> squares;
    for (unsigned n = from; n <= to; ++n) {
      const double l = static_cast<double>(rows[n - 1].lambda_max);
      squares.push_back(l * l);
    }
    const FitResult f = extrapolate_fit(squares, from);
    std::cerr << "fit of lambda_max^2 over n = " << from << ".." << to << ": a=" << f.a << " b=" << f.b
              << " c=" << f.c << " d=" << f.d << " rms=" << f.residual << " limit sqrt(a)=" << std::sqrt(f.a)
              << (f.at_boundary ? " (optimum at the d -> 0 boundary; limit poorly determined)" : "") << '\n';
  }
  return kOk;
}

int cmd_density(const RunConfig& cfg, const std::string& which, const std::string& basis_name, unsigned order,
                unsigned grid_points, const std::string& output) {
  MomentTable m;
  HighFloat width;
  if (which == "free") {
    m = make_moment_table(MomentConvention::TwoProjections, free_moments(std::max(order, 1u)));
    width = 2 + boost::multiprecision::sqrt(HighFloat(2));
  } else {
    m = moments_for(cfg, "reference", which);
    width = which == "qr" ? 2 + boost::multiprecision::sqrt(HighFloat(2)) : HighFloat(4);
  }
  const DensityBasis basis = basis_name == "legendre" ? DensityBasis::Legendre : DensityBasis::Chebyshev;
  const auto grid = symmetric_grid(static_cast<double>(width), grid_points);
  const DensityCurve c = basis == DensityBasis::Chebyshev ? chebyshev_density(m, width, order, grid)
                                                           : legendre_density(m, width, order, grid);
  const std::string format = cfg.format == "csv" ? "csv" : "plotdata";
  if (cfg.format != "csv" && cfg.format != "plotdata") throw UsageError("density output is plotdata or csv");
  if (output.empty()) {
    write_plot_data(c, std::cout, format == "csv");
  } else {
    std::ofstream out(output);
    if (!out) throw UsageError("cannot write " + output);
    write_plot_data(c, out, format == "csv");
  }
  if (which == "qr") std::cerr << "max density on 3.22 <= |t| <= 3.414: " << max_on(c, 3.22, 3.414) << '\n';
  return kOk;
}

int cmd_free(const RunConfig& cfg, unsigned count) {
  const auto exact = free_moments(count);
  const auto numeric = free_moments_quadrature(count);
  Table t{{"n", "recursion", "quadrature", "relative_error"}, {}};
  double worst = 0;
  for (unsigned n = 1; n <= count; ++n) {
    const double rel = std::abs(numeric[n - 1] / exact[n - 1].get_d() - 1);
    worst = std::max(worst, rel);
    std::ostringstream q, e;
    q << std::setprecision(17) << numeric[n - 1];
    e << std::setprecision(3) << rel;
    t.rows.push_back({std::to_string(n), exact[n - 1].get_str(), q.str(), e.str()});
  }
  emit(t, cfg.format, std::cout);
  std::cerr << "max relative error " << worst << "; norm(1/2,1/3) = " << std::setprecision(15)
            << free_norm(mpq_class(1, 2), mpq_class(1, 3)) << ", norm(1/3,1/4) = "
            << free_norm(mpq_class(1, 3), mpq_class(1, 4)) << '\n';
  return worst < 1e-9 ? kOk : kCheckFailed;
}

int cmd_selfadjoint(const RunConfig& cfg) {
  const GeneratorSet g = standard_generators();
  const auto chain = chain_transform(cogrowth_norms(g, cfg.max_n, cfg.memory_budget, cfg.threads, cfg.logger()), g.q());
  Table t{{"n", "norm_sq", "eta", "zeta", "m"}, {}};
  for (const auto& r : chain) {
    t.rows.push_back({std::to_string(r.n), r.norm_sq.get_str(), r.eta.get_str(), r.zeta.get_str(), r.m.get_str()});
  }
  emit(t, cfg.format, std::cout);
  return kOk;
}

int cmd_verify(const RunConfig& cfg) {
  checks::CheckContext ctx;
  ctx.workdir = cfg.workdir;
  ctx.memory_budget = cfg.memory_budget;
  ctx.threads = cfg.threads;
  ctx.quick = cfg.quick;
  ctx.log = cfg.logger();
  std::vector<checks::CheckOutcome> all{checks::cache_integrity(ctx.workdir)};
  if (!all.front().passed) {
    std::cout << "FAIL  " << all.front().name << ": " << all.front().detail << std::endl;
    return kIntegrity;
  }
  for (auto& o : checks::property_suite(ctx)) all.push_back(std::move(o));
  for (auto& o : checks::acceptance_criteria(ctx, false)) all.push_back(std::move(o));
  bool ok = true;
  for (const auto& o : all) {
    std::cout << (o.passed ? "PASS" : "FAIL") << "  " << o.name << ": " << o.detail << std::endl;
    ok &= o.passed;
  }
  return ok ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and numerical tools for the reduced C*-algebra of Thompson's group T"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  app.add_option("--workdir", cfg.workdir, "cache and scratch directory")->envname("THOMPSON_WORKDIR");
  app.add_option("--mem", cfg.memory_budget, "memory budget, e.g. 4G (at least 256M)")
      ->transform(CLI::AsSizeValue(false))
      ->envname("THOMPSON_MEM");
  app.add_option("--threads", cfg.threads, "worker threads")->envname("THOMPSON_THREADS");
  app.add_option("--max-n", cfg.max_n, "largest n to compute")->envname("THOMPSON_MAX_N");
  app.add_option("--format", cfg.format, "csv, json or plotdata")
      ->check(CLI::IsMember({"csv", "json", "plotdata"}))
      ->envname("THOMPSON_FORMAT");
  app.add_option("--precision", cfg.precision, "decimals in estimate tables")->envname("THOMPSON_PRECISION");
  app.add_flag("-v,--verbose", cfg.verbose, "progress and cache messages on stderr");

  std::string variant = "halved";
  auto* zeta = app.add_subcommand("zeta", "cyclic reduced numbers from the word pipeline");
  zeta->add_option("--variant", variant, "direct or halved")->check(CLI::IsMember({"direct", "halved"}));

  std::string input;
  auto* bridge = app.add_subcommand("bridge", "moments from a zeta column (default: the shipped reference column)");
  bridge->add_option("--input", input, "CSV with header n,zeta");

  std::string source = "reference";
  std::string which = "qr";
  std::string window;
  auto* estimate = app.add_subcommand("estimate", "norm estimates from a moment table");
  estimate->add_option("--source", source, "computed or reference")->check(CLI::IsMember({"computed", "reference"}));
  estimate->add_option("--case", which, "qr (two projections) or cogrowth (generator sum)")
      ->check(CLI::IsMember({"qr", "cogrowth"}));
  estimate->add_option("--fit-window", window, "fit lambda_max^2 over FROM:TO and report the limit");

  std::string density_case = "qr";
  std::string basis = "chebyshev";
  unsigned order = 28;
  unsigned grid = 2048;
  std::string output;
  auto* density = app.add_subcommand("density", "density reconstruction from moments");
  density->add_option("--case", density_case, "qr, cogrowth or free")->check(CLI::IsMember({"qr", "cogrowth", "free"}));
  density->add_option("--basis", basis, "chebyshev or legendre")->check(CLI::IsMember({"chebyshev", "legendre"}));
  density->add_option("--N", order, "truncation order");
  density->add_option("--grid", grid, "number of grid points");
  density->add_option("--output", output, "file instead of stdout");

  unsigned free_count = 20;
  auto* free = app.add_subcommand("free", "free-case moments: recursion against quadrature");
  free->add_option("--moments", free_count, "number of moments")->check(CLI::Range(1u, 40u));

  auto* selfadjoint = app.add_subcommand("selfadjoint", "moments of C + D + C^-1 + D^-1");

  auto* verify = app.add_subcommand("verify", "run the invariant suite and the reference-table checks");
  verify->add_flag("--quick", cfg.quick, "smaller horizons");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    cfg.validate();
    if (*zeta) return cmd_zeta(cfg, variant);
    if (*bridge) return cmd_bridge(cfg, input);
    if (*estimate) return cmd_estimate(cfg, source, which, window);
    if (*density) return cmd_density(cfg, density_case, basis, order, grid, output);
    if (*free) return cmd_free(cfg, free_count);
    if (*selfadjoint) return cmd_selfadjoint(cfg);
    if (*verify) return cmd_verify(cfg);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return kUsage;
  } catch (const IntegrityError& e) {
    std::cerr << "integrity error: " << e.what() << '\n';
    return kIntegrity;
  } catch (const StructuralError& e) {
    std::cerr << "integrity error: " << e.what() << '\n';
    return kIntegrity;
  } catch (const DecodeError& e) {
    std::cerr << "integrity error: " << e.what() << '\n';
    return kIntegrity;
  } catch (const ResourceError& e) {
    std::cerr << "resource error: " << e.what() << '\n';
    return kResource;
  } catch (const InputCorruptionError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kCorruptInput;
  } catch (const ConvergenceError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}
