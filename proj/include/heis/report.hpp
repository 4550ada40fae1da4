#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace heis {

/// Outcome of one inequality or estimate check.  The orientation convention
/// is uniform: margin is measured so that larger is safer, and the check
/// passes when margin + tolerance >= 0.  tolerance holds the statistical
/// allowance (typically 3 standard errors); extra carries check-specific
/// diagnostics that vary too much to deserve fields.
struct VerifyReport {
  std::string check;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
  std::string grid;  // e.g. "24x24x24"; empty for gridless checks
  nlohmann::json extra = nlohmann::json::object();

  nlohmann::json to_json() const;
};

/// Fills the shared fields and applies the pass rule.
VerifyReport make_report(const std::string& check, double lhs, double rhs,
                         double margin, double tolerance, std::uint64_t seed,
                         std::uint64_t samples, const std::string& grid = "");

/// Writes reports as a JSON array, keys sorted, LF line endings; the output
/// is byte-stable for identical inputs.
void write_reports_json(const std::string& path, const std::vector<VerifyReport>& reports);

/// Minimal CSV writer for plot tables: one header row then data rows.
/// Numeric cells are rendered with max_digits10 round-trip precision.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

std::string grid_label(const std::vector<int>& res);

} // namespace heis
