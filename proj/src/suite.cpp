#include "heis/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "heis/bbl.hpp"
#include "heis/cclog.hpp"
#include "heis/cloud.hpp"
#include "heis/distortion.hpp"
#include "heis/entropy.hpp"
#include "heis/geodesic.hpp"
#include "heis/ineq.hpp"
#include "heis/parallel.hpp"
#include "heis/report.hpp"
#include "heis/riemapprox.hpp"
#include "heis/rng.hpp"
#include "heis/setspec.hpp"
#include "heis/transport.hpp"

namespace heis {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;
constexpr double kTwoPi = 2.0 * kPi;
constexpr const char* kVersion = "0.1.0";

double now_ms() {
  using Clock = std::chrono::steady_clock;
  static const Clock::time_point t0 = Clock::now();
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Stable per-family seed: FNV over the tag folded with the run seed.
std::uint64_t mix_seed(std::uint64_t seed, const std::string& tag) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : tag) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  h ^= seed + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

struct SuiteParams {
  std::uint64_t seed = 0;
  std::size_t roundtrip_samples = 100000;
  std::size_t distance_samples = 64;
  int distortion_grid = 200;
  int eps_points = 50;
  int sandwich_pairs = 100;
  int ot_instances = 50;
  int mcp_configs = 20;
  std::size_t mcp_samples = 100000;
  int mcp_grid = 20;
  int bm_configs = 10;
  std::size_t bm_samples = 600000;
  int bm_grid = 24;
  std::vector<double> quarter_radii = {0.2, 0.1, 0.05};
  std::size_t quarter_samples = 60000;
  std::vector<double> asym_radii = {0.4, 0.2, 0.1, 0.05};
  double asym_s = 0.5;
  std::size_t asym_samples = 24000;
  int bbl_pairs = 5;
  int bbl_grid = 15;
  int bbl_refine = 21;
  int entropy_pairs = 5;
  std::size_t entropy_samples = 400;
  int entropy_grid = 24;

  std::string canonical() const;
};

std::string fmt_list(const std::vector<double>& v) {
  std::ostringstream out;
  out.precision(17);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out << ' ';
    out << v[i];
  }
  return out.str();
}

std::string SuiteParams::canonical() const {
  std::map<std::string, std::string> kv;
  auto put = [&kv](const std::string& k, auto v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    kv[k] = out.str();
  };
  put("seed", seed);
  put("roundtrip.samples", roundtrip_samples);
  put("distances.samples", distance_samples);
  put("distortion.grid", distortion_grid);
  put("eps.points", eps_points);
  put("sandwich.pairs", sandwich_pairs);
  put("ot.instances", ot_instances);
  put("mcp.configs", mcp_configs);
  put("mcp.samples", mcp_samples);
  put("mcp.grid", mcp_grid);
  put("bm.configs", bm_configs);
  put("bm.samples", bm_samples);
  put("bm.grid", bm_grid);
  kv["quarter.radii"] = fmt_list(quarter_radii);
  put("quarter.samples", quarter_samples);
  kv["asym.radii"] = fmt_list(asym_radii);
  put("asym.s", asym_s);
  put("asym.samples", asym_samples);
  put("bbl.pairs", bbl_pairs);
  put("bbl.grid", bbl_grid);
  put("bbl.refine", bbl_refine);
  put("entropy.pairs", entropy_pairs);
  put("entropy.samples", entropy_samples);
  put("entropy.grid", entropy_grid);
  std::string text;
  for (const auto& [k, v] : kv) text += k + "=" + v + "\n";
  return text;
}

SuiteParams resolve_params(std::uint64_t seed, const Config* o) {
  SuiteParams p;
  p.seed = seed;
  if (o) {
    p.roundtrip_samples = o->get_u64("roundtrip.samples", p.roundtrip_samples);
    p.distance_samples = o->get_u64("distances.samples", p.distance_samples);
    p.distortion_grid = static_cast<int>(o->get_int("distortion.grid", p.distortion_grid));
    p.eps_points = static_cast<int>(o->get_int("eps.points", p.eps_points));
    p.sandwich_pairs = static_cast<int>(o->get_int("sandwich.pairs", p.sandwich_pairs));
    p.ot_instances = static_cast<int>(o->get_int("ot.instances", p.ot_instances));
    p.mcp_configs = static_cast<int>(o->get_int("mcp.configs", p.mcp_configs));
    p.mcp_samples = o->get_u64("mcp.samples", p.mcp_samples);
    p.mcp_grid = static_cast<int>(o->get_int("mcp.grid", p.mcp_grid));
    p.bm_configs = static_cast<int>(o->get_int("bm.configs", p.bm_configs));
    p.bm_samples = o->get_u64("bm.samples", p.bm_samples);
    p.bm_grid = static_cast<int>(o->get_int("bm.grid", p.bm_grid));
    p.quarter_radii = o->get_doubles("quarter.radii", p.quarter_radii);
    p.quarter_samples = o->get_u64("quarter.samples", p.quarter_samples);
    p.asym_radii = o->get_doubles("asym.radii", p.asym_radii);
    p.asym_s = o->get_double("asym.s", p.asym_s);
    p.asym_samples = o->get_u64("asym.samples", p.asym_samples);
    p.bbl_pairs = static_cast<int>(o->get_int("bbl.pairs", p.bbl_pairs));
    p.bbl_grid = static_cast<int>(o->get_int("bbl.grid", p.bbl_grid));
    p.bbl_refine = static_cast<int>(o->get_int("bbl.refine", p.bbl_refine));
    p.entropy_pairs = static_cast<int>(o->get_int("entropy.pairs", p.entropy_pairs));
    p.entropy_samples = o->get_u64("entropy.samples", p.entropy_samples);
    p.entropy_grid = static_cast<int>(o->get_int("entropy.grid", p.entropy_grid));
    o->require_all_consumed();
  }
  return p;
}

double max_norm_diff(const HPoint& a, const HPoint& b) {
  double m = std::abs(a.t - b.t);
  for (std::size_t k = 0; k < a.zeta.size(); ++k)
    m = std::max(m, std::abs(a.zeta[k] - b.zeta[k]));
  return m;
}

// ---- formula oracle families ------------------------------------------

VerifyReport roundtrip_report(int n, std::size_t samples, std::uint64_t seed) {
  const Rand r(seed, "roundtrip");
  const GroupContext ctx(n);
  const int d = 2 * n + 1;
  std::vector<double> err(samples, 0.0);
  parallel_for(static_cast<std::int64_t>(samples), [&](std::int64_t i) {
    const std::uint64_t u = static_cast<std::uint64_t>(i);
    HPoint g(n);
    double amax = 0.0;
    for (int k = 0; k < d - 1; ++k) {
      g.zeta[static_cast<std::size_t>(k)] =
          r.uniform(-2.0, 2.0, u, static_cast<std::uint64_t>(k + 1));
      amax = std::max(amax, std::abs(g.zeta[static_cast<std::size_t>(k)]));
    }
    g.t = r.uniform(-2.0, 2.0, u, static_cast<std::uint64_t>(d));
    amax = std::max(amax, std::abs(g.t));
    if (amax < 1e-6) g.zeta[0] += 1e-3;  // stay off the excluded center tube
    const LogResult l = cc_log(g, ctx);
    err[static_cast<std::size_t>(i)] = max_norm_diff(gamma(l.param, 1.0), g);
  });
  double worst = 0.0;
  for (double e : err) worst = std::max(worst, e);
  VerifyReport rep = make_report("exp-log-roundtrip", worst, 1e-9, 1e-9 - worst, 0.0,
                                 seed, samples);
  rep.extra["n"] = n;
  return rep;
}

std::vector<VerifyReport> distance_reports(std::size_t samples, std::uint64_t seed) {
  const Rand r(seed, "distances");
  const HPoint origin(0.0, 0.0, 0.0);
  double horiz_err = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const std::uint64_t u = static_cast<std::uint64_t>(i);
    const double x = r.uniform(-2.0, 2.0, u, 1);
    const double y = r.uniform(-2.0, 2.0, u, 2);
    const double want = std::sqrt(x * x + y * y);
    if (want < 1e-9) continue;
    horiz_err = std::max(horiz_err, std::abs(cc_dist(origin, HPoint(x, y, 0.0)) - want));
  }
  VerifyReport horizontal = make_report("dist-horizontal", horiz_err, 1e-12,
                                        1e-12 - horiz_err, 0.0, seed, samples);

  double axis_err = 0.0;
  for (double t : {0.1, 1.0, 10.0}) {
    for (double sign : {1.0, -1.0}) {
      const double got = cc_dist(origin, HPoint(0.0, 0.0, sign * t));
      axis_err = std::max(axis_err, std::abs(got - std::sqrt(kPi * t)));
    }
  }
  VerifyReport axis = make_report("dist-vertical-axis", axis_err, 1e-9, 1e-9 - axis_err,
                                  0.0, seed, 6);
  return {horizontal, axis};
}

VerifyReport distortion_identity_report(int n, int grid, std::uint64_t seed,
                                        std::vector<std::vector<double>>* slice) {
  const int N = 2 * n + 1;
  std::vector<double> chi(2 * static_cast<std::size_t>(n), 0.0);
  chi[0] = 1.0;
  double max_rel = 0.0;
  int viol_mono = 0, viol_floor = 0;
  for (int i = 1; i <= grid; ++i) {
    const double s = static_cast<double>(i) / (grid + 1);
    double prev = -1.0;
    for (int j = 1; j <= grid; ++j) {
      const double theta = kTwoPi * static_cast<double>(j) / (grid + 1);
      const GeodesicParam p(chi, theta);
      const double ratio = std::pow(jac_gamma(p, s) / jac_gamma(p, 1.0), 1.0 / N);
      const double t = tau(s, theta, n).value;
      max_rel = std::max(max_rel, std::abs(t - ratio) / ratio);
      if (t < prev) ++viol_mono;
      prev = t;
      if (t < std::pow(s, (2.0 * n + 3.0) / N) * (1.0 - 1e-13)) ++viol_floor;
      if (slice && n == 1 && i == (grid + 1) / 2) slice->push_back({theta, t, ratio});
    }
  }
  VerifyReport rep = make_report("distortion-jacobian-identity", max_rel, 1e-12,
                                 1e-12 - max_rel, 0.0, seed,
                                 static_cast<std::size_t>(grid) * grid,
                                 grid_label({grid, grid}));
  rep.extra["n"] = n;
  rep.extra["monotonicity_violations"] = viol_mono;
  rep.extra["lower_bound_violations"] = viol_floor;
  rep.pass = rep.pass && viol_mono == 0 && viol_floor == 0;
  return rep;
}

std::vector<VerifyReport> eps_reports(int points, std::uint64_t seed,
                                      std::vector<std::vector<double>>* orders) {
  const Rand r(seed, "eps");
  const std::vector<double> eps_const = {1e-1, 1e-2, 1e-3};
  const std::vector<double> eps_order = {0.2, 0.1, 0.05, 0.025};
  double worst_spread = 0.0;
  double min_order = 1e300;
  int floor_viol = 0;
  for (int i = 0; i < points; ++i) {
    const std::uint64_t u = static_cast<std::uint64_t>(i);
    const double s = r.uniform(0.05, 0.95, u, 1);
    const double mag = r.uniform(0.3, 1.5, u, 2);
    const double ang = r.uniform(0.0, kTwoPi, u, 3);
    const double theta = r.uniform(-0.9 * kTwoPi, 0.9 * kTwoPi, u, 4);
    const std::vector<double> chi = {mag * std::cos(ang), mag * std::sin(ang)};

    // the vertical-frame correction is exactly quadratic in eps, so the
    // rescaled difference must be flat to roundoff
    double lo = 1e300, hi = -1e300;
    for (double eps : eps_const) {
      double a_part = 0.0, b_part = 0.0;
      jac_gamma_eps_parts(EpsParam(chi, theta, eps), s, &a_part, &b_part);
      const double d = b_part / (eps * eps);
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    worst_spread = std::max(worst_spread, (hi - lo) / std::max(std::abs(lo), 1e-300));

    const ConvergenceReport conv = bridge_limit_check(GeodesicParam(chi, theta), s, eps_order);
    if (conv.order_valid) min_order = std::min(min_order, conv.fitted_order);
    if (orders) orders->push_back({static_cast<double>(i), s, theta, conv.fitted_order});

    for (double eps : eps_const)
      if (v_eps(EpsParam(chi, theta, eps), s) < s * s * (1.0 - 1e-12)) ++floor_viol;
  }
  VerifyReport flat = make_report("eps-jacobian-quadratic", worst_spread, 1e-8,
                                  1e-8 - worst_spread, 0.0, seed,
                                  static_cast<std::size_t>(points));
  VerifyReport order = make_report("eps-bridge-order", min_order, 1.9, min_order - 1.9,
                                   0.0, seed, static_cast<std::size_t>(points));
  VerifyReport floor_rep = make_report("eps-distortion-floor", static_cast<double>(floor_viol),
                                       0.0, -static_cast<double>(floor_viol), 0.0, seed,
                                       static_cast<std::size_t>(points) * eps_const.size());
  return {flat, order, floor_rep};
}

VerifyReport sandwich_report(int pairs, std::uint64_t seed) {
  const Rand r(seed, "sandwich");
  std::vector<std::pair<HPoint, HPoint>> ps;
  ps.reserve(static_cast<std::size_t>(pairs));
  for (int i = 0; i < pairs; ++i) {
    const std::uint64_t u = static_cast<std::uint64_t>(i);
    HPoint a(r.uniform(-1.5, 1.5, u, 1), r.uniform(-1.5, 1.5, u, 2), r.uniform(-1.5, 1.5, u, 3));
    HPoint b(r.uniform(-1.5, 1.5, u, 4), r.uniform(-1.5, 1.5, u, 5), r.uniform(-1.5, 1.5, u, 6));
    ps.emplace_back(a, b);
  }
  const SandwichReport sw = sandwich_check(ps, {0.5, 0.25, 0.125});
  VerifyReport rep = make_report("riemannian-distance-sandwich", sw.max_overshoot, 1e-9,
                                 1e-9 - sw.max_overshoot, 0.0, seed,
                                 static_cast<std::size_t>(pairs));
  rep.extra["c_estimate"] = sw.c_estimate;
  rep.extra["max_gap_per_eps"] = sw.max_gap_per_eps;
  rep.extra["eps"] = sw.eps;
  rep.pass = rep.pass && sw.upper_bound_ok;
  return rep;
}

VerifyReport ot_oracle_report(int instances, std::uint64_t seed) {
  const Rand r(seed, "ot-oracle");
  double worst = 0.0;
  for (int i = 0; i < instances; ++i) {
    const Rand ri = r.sub(static_cast<std::uint64_t>(i + 1));
    const int m = 2 + static_cast<int>(ri.uniform(0.0, 6.0, 0, 1)) % 6;  // 2..7
    std::vector<HPoint> xs, ys;
    for (int k = 0; k < m; ++k) {
      const std::uint64_t u = static_cast<std::uint64_t>(k);
      xs.emplace_back(ri.uniform(-1.0, 1.0, u, 10), ri.uniform(-1.0, 1.0, u, 11),
                      ri.uniform(-1.0, 1.0, u, 12));
      ys.emplace_back(ri.uniform(-1.0, 1.0, u, 20), ri.uniform(-1.0, 1.0, u, 21),
                      ri.uniform(-1.0, 1.0, u, 22));
    }
    const Cloud a = Cloud::uniform(xs);
    const Cloud b = Cloud::uniform(ys);
    const Plan plan = solve_exact(a, b);
    worst = std::max(worst, std::abs(plan.cost - brute_force_cost(a, b)));
  }
  return make_report("ot-exact-vs-enumeration", worst, 1e-10, 1e-10 - worst, 0.0, seed,
                     static_cast<std::size_t>(instances));
}

// ---- configuration generators ------------------------------------------

SetSpec random_mcp_set(const Rand& r, std::uint64_t u) {
  const HPoint c(r.uniform(-1.0, 1.0, u, 4), r.uniform(-1.0, 1.0, u, 5),
                 r.uniform(-1.0, 1.0, u, 6));
  if (u % 2 == 0) return SetSpec::cc_ball(c, r.uniform(0.25, 0.6, u, 7));
  return SetSpec::koranyi_box(
      c, {r.uniform(0.2, 0.5, u, 7), r.uniform(0.2, 0.5, u, 8), r.uniform(0.2, 0.5, u, 9)});
}

struct BMConfig {
  SetSpec a, b;
  double s = 0.5;
};

std::vector<BMConfig> bm_configs(int count) {
  const HPoint o(0.0, 0.0, 0.0);
  std::vector<BMConfig> all = {
      {SetSpec::cc_ball(o, 0.5), SetSpec::cc_ball(HPoint(1.0, 0.0, 0.0), 0.5), 0.5},
      // vertical stack: Theta > pi
      {SetSpec::cc_ball(o, 0.2), SetSpec::cc_ball(HPoint(0.0, 0.0, 1.0), 0.2), 0.5},
      {SetSpec::koranyi_box(o, {0.4, 0.4, 0.3}),
       SetSpec::koranyi_box(HPoint(1.0, 0.0, 0.2), {0.3, 0.3, 0.2}), 0.5},
      {SetSpec::cc_ball(o, 0.4), SetSpec::koranyi_box(HPoint(0.8, 0.4, 0.0), {0.3, 0.3, 0.25}),
       0.5},
      {SetSpec::cc_ball(o, 0.5), SetSpec::cc_ball(HPoint(1.0, 0.0, 0.0), 0.5), 0.3},
      {SetSpec::koranyi_box(o, {0.5, 0.5, 0.4}),
       SetSpec::koranyi_box(HPoint(0.6, -0.6, 0.3), {0.35, 0.35, 0.3}), 0.7},
      {SetSpec::cc_ball(HPoint(-0.5, 0.0, 0.0), 0.35), SetSpec::cc_ball(HPoint(0.5, 0.0, 0.2), 0.45),
       0.5},
      {SetSpec::koranyi_box(o, {0.3, 0.6, 0.3}),
       SetSpec::cc_ball(HPoint(0.0, 1.0, -0.3), 0.4), 0.5},
      {SetSpec::cc_ball(o, 0.6), SetSpec::cc_ball(HPoint(0.3, 0.3, 0.5), 0.3), 0.4},
      {SetSpec::koranyi_box(HPoint(-0.4, 0.2, -0.2), {0.45, 0.3, 0.35}),
       SetSpec::koranyi_box(HPoint(0.7, -0.1, 0.4), {0.25, 0.45, 0.3}), 0.6},
  };
  if (count < static_cast<int>(all.size())) all.resize(static_cast<std::size_t>(count));
  return all;
}

struct FnPair {
  FnSpec f, g;
  double s = 0.5;
};

std::vector<FnPair> bbl_pairs_list(int count) {
  const HPoint o(0.0, 0.0, 0.0);
  std::vector<FnPair> all = {
      {FnSpec::indicator_box(o, {0.5, 0.5, 0.4}),
       FnSpec::indicator_box(HPoint(1.0, 0.0, 0.0), {0.4, 0.4, 0.3}), 0.5},
      {FnSpec::indicator_cc_ball(o, 0.5),
       FnSpec::indicator_cc_ball(HPoint(0.0, 0.0, 0.8), 0.45), 0.5},
      {FnSpec::gaussian(o, {0.3, 0.3, 0.25}, {0.75, 0.75, 0.6}),
       FnSpec::indicator_box(HPoint(0.8, 0.0, 0.2), {0.4, 0.4, 0.3}), 0.5},
      {FnSpec::indicator_cc_ball(o, 0.5),
       FnSpec::gaussian(HPoint(0.6, 0.3, 0.0), {0.25, 0.25, 0.2}, {0.6, 0.6, 0.5}, 1.5), 0.3},
      {FnSpec::gaussian(HPoint(-0.4, 0.0, 0.1), {0.3, 0.25, 0.2}, {0.7, 0.6, 0.5}),
       FnSpec::gaussian(HPoint(0.5, 0.2, -0.1), {0.25, 0.3, 0.2}, {0.6, 0.7, 0.5}, 0.8), 0.7},
  };
  if (count < static_cast<int>(all.size())) all.resize(static_cast<std::size_t>(count));
  return all;
}

struct DensityPair {
  DensitySpec f, g;
  double s = 0.5;
};

std::vector<DensityPair> entropy_pairs_list(int count) {
  const HPoint o(0.0, 0.0, 0.0);
  std::vector<DensityPair> all = {
      {DensitySpec::uniform_box(o, {0.5, 0.5, 0.4}),
       DensitySpec::uniform_box(HPoint(1.0, 0.0, 0.2), {0.4, 0.4, 0.3}), 0.5},
      {DensitySpec::uniform_cc_ball(o, 0.5),
       DensitySpec::uniform_cc_ball(HPoint(0.0, 0.0, 1.0), 0.4), 0.5},
      {DensitySpec::gaussian_box(o, {0.3, 0.3, 0.25}, {0.75, 0.75, 0.6}),
       DensitySpec::uniform_box(HPoint(0.9, 0.0, 0.0), {0.4, 0.4, 0.3}), 0.4},
      {DensitySpec::gaussian_box(HPoint(-0.5, 0.0, 0.0), {0.25, 0.25, 0.2}, {0.6, 0.6, 0.5}),
       DensitySpec::gaussian_box(HPoint(0.5, 0.0, 0.1), {0.3, 0.25, 0.2}, {0.7, 0.6, 0.5}), 0.5},
      {DensitySpec::uniform_cc_ball(o, 0.45),
       DensitySpec::gaussian_box(HPoint(0.7, 0.4, 0.2), {0.25, 0.25, 0.2}, {0.6, 0.6, 0.5}),
       0.6},
  };
  if (count < static_cast<int>(all.size())) all.resize(static_cast<std::size_t>(count));
  return all;
}

} // namespace

SuiteResult reproduce_all(const std::string& outdir, std::uint64_t seed,
                          const Config* overrides) {
  namespace fs = std::filesystem;
  const SuiteParams prm = resolve_params(seed, overrides);
  fs::create_directories(outdir);

  const double t_start = now_ms();
  SuiteResult result;
  const Config effective = Config::parse_string(prm.canonical(), "<suite>");
  result.config_hash = effective.hash();

  nlohmann::json errors = nlohmann::json::array();

  auto emit_json = [&](const std::string& family, const std::string& file,
                       const std::vector<VerifyReport>& reps, double wall) {
    write_reports_json((fs::path(outdir) / file).string(), reps);
    SuiteArtifact art;
    art.file = file;
    art.family = family;
    art.checks = static_cast<int>(reps.size());
    for (const VerifyReport& rep : reps)
      if (!rep.pass) ++art.failures;
    art.wall_ms = wall;
    result.checks_run += art.checks;
    result.checks_failed += art.failures;
    result.artifacts.push_back(art);
  };
  auto emit_csv = [&](const std::string& family, const std::string& file,
                      const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
    write_csv((fs::path(outdir) / file).string(), header, rows);
    SuiteArtifact art;
    art.file = file;
    art.family = family;
    result.artifacts.push_back(art);
  };
  auto guarded = [&](const std::string& family, auto&& fn) {
    const double t0 = now_ms();
    try {
      fn(t0);
    } catch (const std::exception& ex) {
      ++result.checks_run;
      ++result.checks_failed;
      errors.push_back({{"family", family}, {"error", ex.what()}});
    }
  };

  // formula oracles
  guarded("roundtrip", [&](double t0) {
    std::vector<VerifyReport> reps = {
        roundtrip_report(1, prm.roundtrip_samples, mix_seed(seed, "roundtrip-1")),
        roundtrip_report(2, prm.roundtrip_samples, mix_seed(seed, "roundtrip-2"))};
    emit_json("roundtrip", "roundtrip.json", reps, now_ms() - t0);
  });
  guarded("distances", [&](double t0) {
    emit_json("distances", "distances.json",
              distance_reports(prm.distance_samples, mix_seed(seed, "distances")),
              now_ms() - t0);
  });
  guarded("distortion", [&](double t0) {
    std::vector<std::vector<double>> slice;
    std::vector<VerifyReport> reps;
    for (int n : {1, 2, 3})
      reps.push_back(distortion_identity_report(n, prm.distortion_grid,
                                                mix_seed(seed, "distortion"), &slice));
    emit_json("distortion", "distortion.json", reps, now_ms() - t0);
    emit_csv("distortion", "distortion_tau.csv", {"theta", "tau", "jacobian_root"}, slice);
  });
  guarded("eps", [&](double t0) {
    std::vector<std::vector<double>> orders;
    std::vector<VerifyReport> reps = eps_reports(prm.eps_points, mix_seed(seed, "eps"), &orders);
    emit_json("eps", "eps.json", reps, now_ms() - t0);
    emit_csv("eps", "eps_orders.csv", {"index", "s", "theta", "fitted_order"}, orders);
  });
  guarded("sandwich", [&](double t0) {
    emit_json("sandwich", "sandwich.json",
              {sandwich_report(prm.sandwich_pairs, mix_seed(seed, "sandwich"))},
              now_ms() - t0);
  });
  guarded("ot-exact", [&](double t0) {
    emit_json("ot-exact", "ot_exact.json",
              {ot_oracle_report(prm.ot_instances, mix_seed(seed, "ot"))}, now_ms() - t0);
  });

  // set-level inequality families
  guarded("mcp", [&](double t0) {
    const Rand gen(mix_seed(seed, "mcp-gen"), "mcp-gen");
    std::vector<VerifyReport> reps;
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < prm.mcp_configs; ++i) {
      const std::uint64_t u = static_cast<std::uint64_t>(i);
      const HPoint x(gen.uniform(-1.0, 1.0, u, 1), gen.uniform(-1.0, 1.0, u, 2),
                     gen.uniform(-1.0, 1.0, u, 3));
      const SetSpec e = random_mcp_set(gen, u);
      const double s = gen.uniform(0.15, 0.85, u, 10);
      reps.push_back(check_mcp(x, e, s, prm.mcp_samples,
                               mix_seed(seed, "mcp-" + std::to_string(i)), prm.mcp_grid));
      const VerifyReport& rep = reps.back();
      rows.push_back({static_cast<double>(i), s, rep.margin, rep.tolerance,
                      rep.pass ? 1.0 : 0.0});
    }
    emit_json("mcp", "mcp.json", reps, now_ms() - t0);
    emit_csv("mcp", "mcp.csv", {"config", "s", "margin", "tolerance", "pass"}, rows);
  });
  guarded("bm", [&](double t0) {
    std::vector<VerifyReport> reps;
    std::vector<std::vector<double>> rows;
    int idx = 0;
    for (const BMConfig& cfg : bm_configs(prm.bm_configs)) {
      const std::uint64_t s1 = mix_seed(seed, "bm-w-" + std::to_string(idx));
      reps.push_back(check_bm_weighted(cfg.a, cfg.b, cfg.s, prm.bm_samples, s1, prm.bm_grid));
      const double theta = reps.back().extra["theta"].get<double>();
      rows.push_back({static_cast<double>(idx), cfg.s, theta, reps.back().margin,
                      reps.back().pass ? 1.0 : 0.0});
      for (int variant : {1, 2}) {
        const std::uint64_t s2 =
            mix_seed(seed, "bm-nw" + std::to_string(variant) + "-" + std::to_string(idx));
        reps.push_back(check_bm_nonweighted(cfg.a, cfg.b, cfg.s, variant, prm.bm_samples, s2,
                                            prm.bm_grid));
      }
      ++idx;
    }
    emit_json("bm", "bm.json", reps, now_ms() - t0);
    emit_csv("bm", "bm.csv", {"config", "s", "theta", "margin_weighted", "pass_weighted"},
             rows);
  });
  guarded("quarter", [&](double t0) {
    std::vector<std::vector<double>> table;
    const VerifyReport rep = check_quarter_sharpness(prm.quarter_radii, prm.quarter_samples,
                                                     mix_seed(seed, "quarter"), &table);
    emit_json("quarter", "quarter.json", {rep}, now_ms() - t0);
    emit_csv("quarter", "quarter.csv", {"r", "ratio", "ratio_se", "vol_Z", "vol_ball"}, table);
  });
  guarded("asymptotics", [&](double t0) {
    std::vector<std::vector<double>> table;
    const VerifyReport rep = ball_asymptotics(prm.asym_radii, prm.asym_s, prm.asym_samples,
                                              mix_seed(seed, "asym"), &table);
    emit_json("asymptotics", "asymptotics.json", {rep}, now_ms() - t0);
    emit_csv("asymptotics", "asymptotics.csv",
             {"r", "two_pi_minus_theta", "tau_s", "vol_Z", "rhs"}, table);
  });

  // function and density families
  guarded("bbl", [&](double t0) {
    const std::vector<BBLCase> cases = {{-0.3, BBLMode::Weighted}, {0.0, BBLMode::Weighted},
                                        {1.0, BBLMode::Weighted},
                                        {std::numeric_limits<double>::infinity(),
                                         BBLMode::Weighted},
                                        {0.0, BBLMode::Uniform},
                                        {0.0, BBLMode::Nonweighted}};
    std::vector<VerifyReport> reps;
    int idx = 0;
    for (const FnPair& pair : bbl_pairs_list(prm.bbl_pairs)) {
      std::vector<VerifyReport> one =
          check_bbl_suite(pair.f, pair.g, pair.s, cases, prm.bbl_grid, prm.bbl_refine);
      for (VerifyReport& rep : one) {
        rep.extra["pair"] = idx;
        reps.push_back(rep);
      }
      ++idx;
    }
    emit_json("bbl", "bbl.json", reps, now_ms() - t0);
  });
  guarded("entropy", [&](double t0) {
    std::vector<VerifyReport> reps;
    int idx = 0;
    for (const DensityPair& pair : entropy_pairs_list(prm.entropy_pairs)) {
      for (const UFunc& u : {UFunc::renyi(1), UFunc::shannon(1)}) {
        reps.push_back(check_entropy_inequality(
            pair.f, pair.g, pair.s, u, prm.entropy_samples,
            mix_seed(seed, "entropy-" + u.name() + "-" + std::to_string(idx)),
            prm.entropy_grid));
        reps.back().extra["pair"] = idx;
      }
      ++idx;
    }
    emit_json("entropy", "entropy.json", reps, now_ms() - t0);
  });
  guarded("density-bound", [&](double t0) {
    std::vector<VerifyReport> reps;
    int idx = 0;
    for (const DensityPair& pair : entropy_pairs_list(prm.entropy_pairs)) {
      reps.push_back(check_density_bound(pair.f, pair.g, pair.s, prm.entropy_samples,
                                         mix_seed(seed, "dbound-" + std::to_string(idx)),
                                         prm.entropy_grid));
      reps.back().extra["pair"] = idx;
      ++idx;
    }
    // singular target: all mass at one point
    const Cloud point_target = Cloud::uniform({HPoint(0.6, 0.2, 0.1)});
    reps.push_back(check_density_bound(entropy_pairs_list(1)[0].f, point_target, 0.5,
                                       prm.entropy_samples, mix_seed(seed, "dbound-point"),
                                       prm.entropy_grid));
    reps.back().extra["pair"] = -1;
    emit_json("density-bound", "density_bound.json", reps, now_ms() - t0);
  });
  guarded("jacobian-density", [&](double t0) {
    std::vector<VerifyReport> reps;
    int idx = 0;
    for (const DensityPair& pair : entropy_pairs_list(prm.entropy_pairs)) {
      reps.push_back(check_jacobian_density(pair.f, pair.g, pair.s, prm.entropy_samples,
                                            mix_seed(seed, "jdens-" + std::to_string(idx)),
                                            prm.entropy_grid));
      reps.back().extra["pair"] = idx;
      ++idx;
    }
    emit_json("jacobian-density", "jacobian_density.json", reps, now_ms() - t0);
  });

  result.wall_ms = now_ms() - t_start;

  nlohmann::json manifest;
  manifest["config"] = effective.canonical();
  char hex[32];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(result.config_hash));
  manifest["config_hash"] = std::string(hex);
  manifest["seed"] = seed;
  manifest["version"] = {{"heislab", kVersion}, {"compiler", __VERSION__}};
  manifest["wall_time_ms"] = result.wall_ms;
  manifest["checks_run"] = result.checks_run;
  manifest["checks_failed"] = result.checks_failed;
  manifest["errors"] = errors;
  nlohmann::json arts = nlohmann::json::array();
  for (const SuiteArtifact& art : result.artifacts) {
    arts.push_back({{"file", art.file},
                    {"family", art.family},
                    {"checks", art.checks},
                    {"failures", art.failures},
                    {"wall_ms", art.wall_ms}});
  }
  manifest["artifacts"] = arts;

  const std::string manifest_path = (fs::path(outdir) / "manifest.json").string();
  std::ofstream out(manifest_path, std::ios::binary);
  out << manifest.dump(2) << "\n";
  result.manifest_path = manifest_path;
  return result;
}

} // namespace heis
