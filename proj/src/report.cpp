#include "heis/report.hpp"

#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace heis {

nlohmann::json VerifyReport::to_json() const {
  nlohmann::json j;
  j["check"] = check;
  j["lhs"] = lhs;
  j["rhs"] = rhs;
  j["margin"] = margin;
  j["tolerance"] = tolerance;
  j["pass"] = pass;
  j["seed"] = seed;
  j["samples"] = samples;
  j["grid"] = grid;
  if (!extra.empty()) j["extra"] = extra;
  return j;
}

VerifyReport make_report(const std::string& check, double lhs, double rhs,
                         double margin, double tolerance, std::uint64_t seed,
                         std::uint64_t samples, const std::string& grid) {
  VerifyReport r;
  r.check = check;
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = margin;
  r.tolerance = tolerance;
  r.pass = margin + tolerance >= 0.0;
  r.seed = seed;
  r.samples = samples;
  r.grid = grid;
  return r;
}

void write_reports_json(const std::string& path, const std::vector<VerifyReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const VerifyReport& r : reports) arr.push_back(r.to_json());
  std::ofstream out(path, std::ios::binary);  // binary keeps LF on every platform
  if (!out) throw std::runtime_error("write_reports_json: cannot open " + path);
  out << arr.dump(2) << "\n";
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  std::ostringstream line;
  line.precision(std::numeric_limits<double>::max_digits10);
  for (std::size_t i = 0; i < header.size(); ++i)
    line << (i ? "," : "") << header[i];
  line << "\n";
  for (const std::vector<double>& row : rows) {
    if (row.size() != header.size())
      throw std::invalid_argument("write_csv: row width differs from header");
    for (std::size_t i = 0; i < row.size(); ++i)
      line << (i ? "," : "") << row[i];
    line << "\n";
  }
  out << line.str();
}

std::string grid_label(const std::vector<int>& res) {
  std::string s;
  for (std::size_t i = 0; i < res.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(res[i]);
  }
  return s;
}

} // namespace heis
