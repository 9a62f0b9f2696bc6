#include "thompson/golden.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "thompson/errors.hpp"

namespace fs = std::filesystem;

namespace thompson::golden {

fs::path data_dir() {
  if (const char* env = std::getenv("THOMPSON_DATA_DIR"); env != nullptr && *env != '\0') return env;
  return THOMPSON_DEFAULT_DATA_DIR;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path, const std::string& header) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open data file " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  bool seen_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!seen_header) {
      if (line != header) throw InputCorruptionError("unexpected header in " + path.string() + ": " + line);
      seen_header = true;
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    rows.push_back(std::move(fields));
  }
  return rows;
}

namespace {

mpz_class integer(const std::string& s, const fs::path& path) {
  mpz_class v;
  if (s.empty() || v.set_str(s, 10) != 0) throw InputCorruptionError("bad integer '" + s + "' in " + path.string());
  return v;
}

unsigned index(const std::string& s, const fs::path& path) {
  return static_cast<unsigned>(integer(s, path).get_ui());
}

void check_width(const std::vector<std::string>& row, std::size_t width, const fs::path& path) {
  if (row.size() != width) throw InputCorruptionError("wrong field count in " + path.string());
}

std::vector<EstimateRow> estimates(const fs::path& path) {
  std::vector<EstimateRow> out;
  for (const auto& r : read_csv(path, "n,root,ratio,alpha,lambda_max,bracket")) {
    check_width(r, 6, path);
    out.push_back({index(r[0], path), r[1], r[2], r[3], r[4], r[5]});
  }
  return out;
}

}  // namespace

std::vector<ZetaMomentRow> zeta_moments(const fs::path& dir) {
  const fs::path path = dir / "zeta_moments.csv";
  std::vector<ZetaMomentRow> out;
  for (const auto& r : read_csv(path, "n,zeta_s,zeta_e,zeta,m")) {
    check_width(r, 5, path);
    out.push_back({index(r[0], path), integer(r[1], path), integer(r[2], path), integer(r[3], path),
                   integer(r[4], path)});
  }
  return out;
}

std::vector<CogrowthRow> cogrowth(const fs::path& dir) {
  const fs::path path = dir / "cogrowth.csv";
  std::vector<CogrowthRow> out;
  for (const auto& r : read_csv(path, "n,norm_sq,eta,zeta,m")) {
    check_width(r, 5, path);
    out.push_back({index(r[0], path), integer(r[1], path), integer(r[2], path), integer(r[3], path),
                   integer(r[4], path)});
  }
  return out;
}

std::vector<EstimateRow> estimates_qr(const fs::path& dir) { return estimates(dir / "estimates_qr.csv"); }
std::vector<EstimateRow> estimates_cogrowth(const fs::path& dir) { return estimates(dir / "estimates_cogrowth.csv"); }

}  // namespace thompson::golden
