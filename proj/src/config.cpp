#include "heis/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

namespace heis {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> tokens(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

double parse_double(const std::string& tok, bool& ok) {
  if (tok == "inf" || tok == "+inf") {
    ok = true;
    return std::numeric_limits<double>::infinity();
  }
  if (tok == "-inf") {
    ok = true;
    return -std::numeric_limits<double>::infinity();
  }
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  ok = end == tok.c_str() + tok.size() && errno == 0 && !tok.empty();
  return v;
}

} // namespace

Config Config::parse_string(const std::string& text, const std::string& origin) {
  Config c;
  c.origin_ = origin;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::size_t hash_pos = raw.find('#');
    if (hash_pos != std::string::npos) raw.erase(hash_pos);
    const std::string stripped = trim(raw);
    if (stripped.empty()) continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(line) + ": expected key = value");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty())
      throw ConfigError(origin + ":" + std::to_string(line) + ": empty key");
    if (value.empty())
      throw ConfigError(origin + ":" + std::to_string(line) + ": empty value for '" + key + "'");
    if (!c.entries_.emplace(key, Entry{value, line}).second)
      throw ConfigError(origin + ":" + std::to_string(line) + ": duplicate key '" + key + "'");
  }
  return c;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str(), path);
}

bool Config::has(const std::string& key) const { return entries_.count(key) != 0; }

const Config::Entry& Config::require(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError(origin_ + ": missing key '" + key + "'");
  consumed_.insert(key);
  return it->second;
}

void Config::fail(const std::string& key, const std::string& what) const {
  const auto it = entries_.find(key);
  const std::string where =
      it == entries_.end() ? origin_ : origin_ + ":" + std::to_string(it->second.line);
  throw ConfigError(where + ": key '" + key + "': " + what);
}

std::string Config::get_string(const std::string& key) const { return require(key).value; }

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

double Config::get_double(const std::string& key) const {
  bool ok = false;
  const double v = parse_double(require(key).value, ok);
  if (!ok) fail(key, "not a number");
  return v;
}

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

std::int64_t Config::get_int(const std::string& key) const {
  const std::string& v = require(key).value;
  errno = 0;
  char* end = nullptr;
  const long long out = std::strtoll(v.c_str(), &end, 10);
  if (end != v.c_str() + v.size() || errno != 0) fail(key, "not an integer");
  return out;
}

std::int64_t Config::get_int(const std::string& key, std::int64_t fallback) const {
  return has(key) ? get_int(key) : fallback;
}

std::uint64_t Config::get_u64(const std::string& key) const {
  const std::int64_t v = get_int(key);
  if (v < 0) fail(key, "must be nonnegative");
  return static_cast<std::uint64_t>(v);
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
  return has(key) ? get_u64(key) : fallback;
}

std::vector<double> Config::get_doubles(const std::string& key) const {
  std::vector<double> out;
  for (const std::string& tok : tokens(require(key).value)) {
    bool ok = false;
    out.push_back(parse_double(tok, ok));
    if (!ok) fail(key, "'" + tok + "' is not a number");
  }
  if (out.empty()) fail(key, "empty list");
  return out;
}

std::vector<double> Config::get_doubles(const std::string& key,
                                        std::vector<double> fallback) const {
  return has(key) ? get_doubles(key) : fallback;
}

HPoint Config::get_point(const std::string& key, int n) const {
  const std::vector<double> v = get_doubles(key);
  const std::size_t want = 2 * static_cast<std::size_t>(n) + 1;
  if (v.size() != want)
    fail(key, "expected " + std::to_string(want) + " coordinates, got " +
                  std::to_string(v.size()));
  std::vector<double> zeta(v.begin(), v.end() - 1);
  return HPoint(std::move(zeta), v.back());
}

SetSpec Config::get_set(const std::string& prefix, int n) const {
  const std::string kind = get_string(prefix + ".kind");
  if (kind == "cc_ball")
    return SetSpec::cc_ball(get_point(prefix + ".center", n), get_double(prefix + ".radius"));
  if (kind == "box")
    return SetSpec::koranyi_box(get_point(prefix + ".center", n),
                                get_doubles(prefix + ".half_width"));
  if (kind == "euclidean_ball")
    return SetSpec::euclidean_ball(get_point(prefix + ".center", n),
                                   get_double(prefix + ".radius"));
  if (kind == "point") return SetSpec::point(get_point(prefix + ".center", n));
  fail(prefix + ".kind", "unknown set kind '" + kind + "'");
}

DensitySpec Config::get_density(const std::string& prefix, int n) const {
  const std::string kind = get_string(prefix + ".kind");
  if (kind == "uniform_box")
    return DensitySpec::uniform_box(get_point(prefix + ".center", n),
                                    get_doubles(prefix + ".half_width"));
  if (kind == "uniform_cc_ball")
    return DensitySpec::uniform_cc_ball(get_point(prefix + ".center", n),
                                        get_double(prefix + ".radius"));
  if (kind == "gaussian_box")
    return DensitySpec::gaussian_box(get_point(prefix + ".center", n),
                                     get_doubles(prefix + ".sigma"),
                                     get_doubles(prefix + ".half_width"));
  fail(prefix + ".kind", "unknown density kind '" + kind + "'");
}

void Config::require_all_consumed() const {
  std::string leftovers;
  for (const auto& [key, entry] : entries_) {
    if (consumed_.count(key)) continue;
    if (!leftovers.empty()) leftovers += ", ";
    leftovers += "'" + key + "' (line " + std::to_string(entry.line) + ")";
  }
  if (!leftovers.empty())
    throw ConfigError(origin_ + ": unknown keys: " + leftovers);
}

std::string Config::canonical() const {
  std::string out;
  for (const auto& [key, entry] : entries_) {
    out += key;
    out += '=';
    const std::vector<std::string> toks = tokens(entry.value);
    for (std::size_t i = 0; i < toks.size(); ++i) {
      if (i) out += ' ';
      out += toks[i];
    }
    out += '\n';
  }
  return out;
}

std::uint64_t Config::hash() const {
  const std::string text = canonical();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

} // namespace heis
