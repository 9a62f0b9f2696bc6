// Runs the acceptance criteria and prints one PASS/FAIL line each.
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <unistd.h>

#include <CLI11.hpp>

#include "checks.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  thompson::checks::CheckContext ctx;
  std::string workdir;
  bool keep = false;
  bool verbose = false;
  app.add_option("--workdir", workdir, "scratch directory (default: a fresh temporary one)")
      ->envname("THOMPSON_WORKDIR");
  app.add_option("--mem", ctx.memory_budget, "memory budget")
      ->transform(CLI::AsSizeValue(false))
      ->envname("THOMPSON_MEM");
  app.add_option("--threads", ctx.threads, "worker threads")->envname("THOMPSON_THREADS");
  app.add_flag("--quick", ctx.quick, "smaller pipeline horizons");
  app.add_option("--zeta-horizon", ctx.zeta_horizon, "largest n for the pipeline check")->check(CLI::Range(1u, 28u));
  app.add_flag("--keep", keep, "keep the scratch directory");
  app.add_flag("-v,--verbose", verbose, "log pipeline progress to stderr");
  CLI11_PARSE(app, argc, argv);

  const bool temporary = workdir.empty();
  ctx.workdir = temporary ? fs::temp_directory_path() / ("thompson-acceptance-" + std::to_string(::getpid()))
                          : fs::path(workdir);
  fs::create_directories(ctx.workdir);
  if (verbose) ctx.log = [](std::string_view m) { std::cerr << m << '\n'; };

  bool all = true;
  for (const auto& c : thompson::checks::acceptance_criteria(ctx)) {
    std::cout << (c.passed ? "PASS" : "FAIL") << "  criterion " << c.name << ": " << c.detail << std::endl;
    all &= c.passed;
  }
  if (temporary && !keep) fs::remove_all(ctx.workdir);
  return all ? EXIT_SUCCESS : EXIT_FAILURE;
}
