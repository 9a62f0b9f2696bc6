#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace thompson::golden {

// Published reference tables shipped in the data directory.

struct ZetaMomentRow {
  unsigned n = 0;
  mpz_class zeta_s, zeta_e, zeta, m;
};

struct CogrowthRow {
  unsigned n = 0;
  mpz_class norm_sq, eta, zeta, m;
};

// Printed decimal strings, kept verbatim; `bracket` is empty for n = 1.
struct EstimateRow {
  unsigned n = 0;
  std::string root, ratio, alpha, lambda_max, bracket;
};

// $THOMPSON_DATA_DIR if set, else the directory compiled in at build time.
std::filesystem::path data_dir();

std::vector<ZetaMomentRow> zeta_moments(const std::filesystem::path& dir = data_dir());
std::vector<CogrowthRow> cogrowth(const std::filesystem::path& dir = data_dir());
std::vector<EstimateRow> estimates_qr(const std::filesystem::path& dir = data_dir());
std::vector<EstimateRow> estimates_cogrowth(const std::filesystem::path& dir = data_dir());

// Rows of a small CSV file: '#' lines are comments, the first other line is
// the header and must match `header`.
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path, const std::string& header);

}  // namespace thompson::golden
