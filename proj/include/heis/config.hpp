#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "heis/cloud.hpp"
#include "heis/hpoint.hpp"
#include "heis/setspec.hpp"

namespace heis {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Flat key=value experiment configuration.  Lines hold one pair each,
/// '#' starts a comment, blank lines are skipped, duplicate keys are
/// rejected.  Getters mark keys consumed; require_all_consumed() then
/// rejects leftovers by name and line, so misspelled keys never pass
/// silently.  Values are whitespace-separated tokens; points and lists
/// read all of them.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text, const std::string& origin = "<string>");

  bool has(const std::string& key) const;

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_u64(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  std::vector<double> get_doubles(const std::string& key) const;
  std::vector<double> get_doubles(const std::string& key, std::vector<double> fallback) const;
  /// 2n+1 numbers: n complex pairs then t.
  HPoint get_point(const std::string& key, int n) const;

  /// Sub-spec under prefix: <prefix>.kind selects the shape, the remaining
  /// <prefix>.* keys supply its parameters.
  ///   sets:      cc_ball | box | euclidean_ball | point
  ///   densities: uniform_box | uniform_cc_ball | gaussian_box
  SetSpec get_set(const std::string& prefix, int n) const;
  DensitySpec get_density(const std::string& prefix, int n) const;

  /// Throws ConfigError naming every unconsumed key with its line.
  void require_all_consumed() const;

  /// FNV-1a over the sorted key=value pairs: stable under reordering and
  /// comments, sensitive to any value change.
  std::uint64_t hash() const;

  /// Canonical text (sorted key=value lines), the exact hash input.
  std::string canonical() const;

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };
  std::string origin_;
  std::map<std::string, Entry> entries_;
  mutable std::set<std::string> consumed_;

  const Entry& require(const std::string& key) const;
  [[noreturn]] void fail(const std::string& key, const std::string& what) const;
};

} // namespace heis
