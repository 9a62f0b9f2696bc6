#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace thompson::checks {

struct CheckOutcome {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct CheckContext {
  std::filesystem::path workdir;
  std::size_t memory_budget = std::size_t{4} << 30;
  unsigned threads = 1;
  // Largest n for the halved-pipeline check; rows past 16 are optional.
  unsigned zeta_horizon = 16;
  // Smaller horizons: n ≤ 12 for the pipeline, n ≤ 10 for the generator sum.
  bool quick = false;
  std::function<void(std::string_view)> log;
};

// The eight acceptance criteria, in order. Each runs inside its own
// try/catch; an exception is a failure with the message as detail. Without
// `with_properties` criterion 7 is skipped (callers that list the property
// suite themselves).
std::vector<CheckOutcome> acceptance_criteria(const CheckContext& ctx, bool with_properties = true);

// The property checks that make up criterion 7, one outcome each.
std::vector<CheckOutcome> property_suite(const CheckContext& ctx);

// Verifies every cached word file under the work directory.
CheckOutcome cache_integrity(const std::filesystem::path& workdir);

}  // namespace thompson::checks
