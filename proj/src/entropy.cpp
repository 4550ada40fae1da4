#include "heis/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "heis/distortion.hpp"
#include "heis/parallel.hpp"
#include "heis/transport.hpp"

namespace heis {

namespace {

double pow_int(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

} // namespace

UFunc UFunc::renyi(int n) { return renyi_gamma(n, 1.0 - 1.0 / (2.0 * n + 1.0)); }

UFunc UFunc::renyi_gamma(int n, double gamma) {
  if (n < 1) throw std::invalid_argument("UFunc: n must be >= 1");
  const double low = 1.0 - 1.0 / (2.0 * n + 1.0);
  if (!(gamma >= low) || !(gamma <= 1.0))
    throw std::invalid_argument("UFunc: renyi gamma outside [1 - 1/(2n+1), 1]");
  return {Kind::Renyi, gamma, n};
}

UFunc UFunc::shannon(int n) {
  if (n < 1) throw std::invalid_argument("UFunc: n must be >= 1");
  return {Kind::Shannon, 0.0, n};
}

UFunc UFunc::kinetic(int n, double gamma) {
  if (n < 1) throw std::invalid_argument("UFunc: n must be >= 1");
  if (!(gamma >= 1.0)) throw std::invalid_argument("UFunc: kinetic gamma must be >= 1");
  return {Kind::Kinetic, gamma, n};
}

UFunc UFunc::tsallis(int n, double gamma) {
  if (n < 1) throw std::invalid_argument("UFunc: n must be >= 1");
  const double low = 1.0 - 1.0 / (2.0 * n + 1.0);
  if (!(gamma > 0.0) || gamma == 1.0 || !(gamma >= low))
    throw std::invalid_argument("UFunc: tsallis gamma must be in [1 - 1/(2n+1), inf) \\ {1}");
  return {Kind::Tsallis, gamma, n};
}

double UFunc::operator()(double t) const {
  if (!(t > 0.0)) return 0.0;
  switch (kind) {
    case Kind::Renyi:
      return -std::pow(t, gamma);
    case Kind::Shannon:
      return t * std::log(t);
    case Kind::Kinetic:
      return std::pow(t, gamma);
    case Kind::Tsallis:
      return (std::pow(t, gamma) - t) / (gamma - 1.0);
  }
  throw std::logic_error("UFunc: unknown kind");
}

std::string UFunc::name() const {
  switch (kind) {
    case Kind::Renyi:
      return "renyi";
    case Kind::Shannon:
      return "shannon";
    case Kind::Kinetic:
      return "kinetic";
    case Kind::Tsallis:
      return "tsallis";
  }
  throw std::logic_error("UFunc: unknown kind");
}

double UFunc::entropy(const VoxelGrid& rho) const {
  const double v = rho.cell_volume();
  double acc = 0.0;
  for (double c : rho.value) acc += (*this)(c);
  return acc * v;
}

double UFunc::entropy(const DensitySpec& spec) const {
  if (spec.kind != DensitySpec::Kind::UniformBox &&
      spec.kind != DensitySpec::Kind::UniformCCBall)
    throw std::invalid_argument("UFunc: closed-form entropy needs a uniform kind");
  const double vol = spec.normalization();
  switch (kind) {
    case Kind::Renyi:
      return -std::pow(vol, 1.0 - gamma);
    case Kind::Shannon:
      return -std::log(vol);
    case Kind::Kinetic:
      return std::pow(vol, 1.0 - gamma);
    case Kind::Tsallis:
      return (std::pow(vol, 1.0 - gamma) - 1.0) / (gamma - 1.0);
  }
  throw std::logic_error("UFunc: unknown kind");
}

double shannon_shift(double s) {
  if (!(s > 0.0) || !(s < 1.0)) throw std::invalid_argument("shannon_shift: s must be in (0,1)");
  return -2.0 * ((1.0 - s) * std::log(1.0 - s) + s * std::log(s));
}

namespace {

// One transported sample pair set, with per-entry geometry; the unit every
// entropy-side estimate is built from.
struct TransportRun {
  Cloud c0, c1, mid;
  Plan plan;
  std::vector<PairGeo> geo;
};

TransportRun run_transport(const Cloud& c0, const Cloud& c1, double s) {
  TransportRun t;
  t.c0 = c0;
  t.c1 = c1;
  t.plan = solve_exact(c0, c1);
  t.mid = interpolate(t.plan, c0, c1, s);
  const std::size_t ne = t.plan.entries.size();
  t.geo.resize(ne);
  parallel_for(static_cast<std::int64_t>(ne), [&](std::int64_t e) {
    const PlanEntry& pe = t.plan.entries[static_cast<std::size_t>(e)];
    t.geo[static_cast<std::size_t>(e)] =
        pair_geo(c0.points[static_cast<std::size_t>(pe.i)],
                 c1.points[static_cast<std::size_t>(pe.j)], s);
  });
  return t;
}

// A pair counts as static below this fraction of the largest pair distance,
// mirroring the interpolation threshold.
std::vector<char> moving_flags(const TransportRun& t) {
  double diameter = 0.0;
  for (const PairGeo& g : t.geo) diameter = std::max(diameter, g.dist);
  const double floor = 1e-9 * diameter;
  std::vector<char> moving(t.geo.size());
  for (std::size_t e = 0; e < t.geo.size(); ++e)
    moving[e] = t.geo[e].dist > floor ? 1 : 0;
  return moving;
}

VoxelGrid smoothed_interpolant(const Cloud& mid, int grid_res,
                               std::vector<double>& bandwidth_out) {
  const std::vector<const std::vector<HPoint>*> sets = {&mid.points};
  const VoxelGrid probe = fit_grid(sets, grid_res, 0.1);
  bandwidth_out = default_bandwidth(probe, mid.size());
  double pad = 0.0;
  for (double b : bandwidth_out) pad = std::max(pad, 0.5 * b);
  const VoxelGrid geom = fit_grid(sets, grid_res, 0.1, pad);
  return voxel_density_smoothed(mid, geom, bandwidth_out);
}

struct EntropySides {
  double lhs = 0.0;
  double rhs_sharp = 0.0;
  double rhs_uniform = 0.0;
};

EntropySides entropy_sides(const DensitySpec& spec0, const DensitySpec& spec1,
                           const Cloud& c0, const Cloud& c1, double s, const UFunc& u,
                           int grid_res, std::vector<double>* bandwidth_out) {
  const TransportRun t = run_transport(c0, c1, s);
  const std::vector<char> moving = moving_flags(t);
  std::vector<double> bw;
  const VoxelGrid rho = smoothed_interpolant(t.mid, grid_res, bw);
  if (bandwidth_out) *bandwidth_out = bw;

  EntropySides out;
  out.lhs = u.entropy(rho);

  const int n = c0.n();
  const int N = 2 * n + 1;
  for (std::size_t e = 0; e < t.plan.entries.size(); ++e) {
    const PlanEntry& pe = t.plan.entries[e];
    const double mass = pe.mass;
    const double r0 = spec0.density(t.c0.points[static_cast<std::size_t>(pe.i)]);
    const double r1 = spec1.density(t.c1.points[static_cast<std::size_t>(pe.j)]);
    if (!(r0 > 0.0) || !(r1 > 0.0))
      throw std::runtime_error("entropy check: sample landed outside its density support");
    const double th = t.geo[e].theta;
    const bool mov = moving[e] != 0;
    const double w0 = pow_int(tau_tilde_hat(1.0 - s, th, n, mov), N);
    const double w1 = pow_int(tau_tilde_hat(s, th, n, mov), N);
    out.rhs_sharp += mass * ((1.0 - s) * w0 * u(r0 / w0) / r0 + s * w1 * u(r1 / w1) / r1);
    const double u0 = (1.0 - s) * (1.0 - s);
    const double u1 = s * s;
    out.rhs_uniform += mass * ((1.0 - s) * u0 * u(r0 / u0) / r0 + s * u1 * u(r1 / u1) / r1);
  }
  return out;
}

Cloud index_split(const Cloud& c, std::size_t k, std::size_t of) {
  std::vector<HPoint> pts;
  for (std::size_t i = k; i < c.size(); i += of) pts.push_back(c.points[i]);
  return Cloud::uniform(std::move(pts));
}

double stddev(const std::vector<double>& xs) {
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  return std::sqrt(var / static_cast<double>(xs.size() - 1));
}

} // namespace

VerifyReport check_entropy_inequality(const DensitySpec& spec0, const DensitySpec& spec1,
                                      double s, const UFunc& u, std::size_t sample_size,
                                      std::uint64_t seed, int grid_res) {
  if (sample_size < 16) throw std::invalid_argument("check_entropy_inequality: too few samples");
  const Rand r(seed, "entropy");
  const Cloud c0 = sample_cloud(spec0, sample_size, r.sub("mu0"));
  const Cloud c1 = sample_cloud(spec1, sample_size, r.sub("mu1"));

  std::vector<double> bw;
  const EntropySides main = entropy_sides(spec0, spec1, c0, c1, s, u, grid_res, &bw);

  // Noise scale of the margins from an 8-way split of the same samples; each
  // split runs the whole pipeline, so grid and plan variability are included.
  const std::size_t folds = 8;
  std::vector<double> m_sharp, m_uniform;
  for (std::size_t k = 0; k < folds; ++k) {
    const EntropySides part = entropy_sides(spec0, spec1, index_split(c0, k, folds),
                                            index_split(c1, k, folds), s, u, grid_res, nullptr);
    m_sharp.push_back(part.rhs_sharp - part.lhs);
    m_uniform.push_back(part.rhs_uniform - part.lhs);
  }
  const double scale = 3.0 / std::sqrt(static_cast<double>(folds));
  const double tol_sharp = scale * stddev(m_sharp);
  const double tol_uniform = scale * stddev(m_uniform);

  VerifyReport rep = make_report("entropy-" + u.name(), main.lhs, main.rhs_sharp,
                                 main.rhs_sharp - main.lhs, tol_sharp, seed, sample_size,
                                 std::to_string(grid_res) + "^3");
  rep.extra["rhs_uniform"] = main.rhs_uniform;
  rep.extra["margin_uniform"] = main.rhs_uniform - main.lhs;
  rep.extra["tolerance_uniform"] = tol_uniform;
  rep.extra["bandwidth"] = bw;
  rep.extra["u_gamma"] = u.gamma;
  const bool uniform_pass = main.rhs_uniform - main.lhs + tol_uniform >= 0.0;
  rep.extra["pass_uniform"] = uniform_pass;
  rep.pass = rep.pass && uniform_pass;
  return rep;
}

namespace {

VerifyReport density_bound_impl(const DensitySpec& spec0, const Cloud& target, double s,
                                std::size_t sample_size, std::uint64_t seed, int grid_res,
                                const char* tag) {
  const Rand r(seed, tag);
  const Cloud c0 = sample_cloud(spec0, sample_size, r.sub("mu0"));
  const TransportRun t = run_transport(c0, target, s);
  const std::vector<char> moving = moving_flags(t);

  const std::vector<const std::vector<HPoint>*> sets = {&t.mid.points};
  const VoxelGrid geom = fit_grid(sets, grid_res, 0.1);
  const VoxelGrid hist = voxel_density(t.mid, geom);

  const int n = c0.n();
  const int N = 2 * n + 1;
  const double crude = std::pow(1.0 - s, -(2.0 * n + 3.0));
  const double v = geom.cell_volume();

  // Per occupied cell: the density must not exceed the strongest transported
  // bound among the pairs depositing there; mass2 drives the Poisson noise.
  std::vector<double> cap_sharp(geom.cells(), 0.0), cap_crude(geom.cells(), 0.0),
      mass2(geom.cells(), 0.0);
  for (std::size_t e = 0; e < t.plan.entries.size(); ++e) {
    const PlanEntry& pe = t.plan.entries[e];
    const std::size_t c = geom.cell_of(t.mid.points[e]);
    const double r0 = spec0.density(t.c0.points[static_cast<std::size_t>(pe.i)]);
    const DistortionValue tw = moving[e] ? tau(1.0 - s, t.geo[e].theta, n)
                                         : DistortionValue::fin(1.0);
    // tau >= (1-s)^((2n+3)/(2n+1)) keeps the sharp factor finite.
    const double f_sharp = tw.finite ? std::pow(tw.value, -N) : 0.0;
    cap_sharp[c] = std::max(cap_sharp[c], f_sharp * r0);
    cap_crude[c] = std::max(cap_crude[c], crude * r0);
    mass2[c] += pe.mass * pe.mass;
  }

  std::size_t occupied = 0, bad_sharp = 0, bad_crude = 0;
  double worst = 0.0;
  for (std::size_t c = 0; c < geom.cells(); ++c) {
    const double val = hist.value[c];
    if (val <= 0.0) continue;
    ++occupied;
    const double se = std::sqrt(mass2[c]) / v;
    const double slack = 3.0 * se + 1e-12;
    if (val > cap_sharp[c] + slack) ++bad_sharp;
    if (val > cap_crude[c] + slack) ++bad_crude;
    if (cap_sharp[c] > 0.0) worst = std::max(worst, val / cap_sharp[c]);
  }
  const double frac_sharp = static_cast<double>(bad_sharp) / static_cast<double>(occupied);
  const double frac_crude = static_cast<double>(bad_crude) / static_cast<double>(occupied);

  VerifyReport rep = make_report("density-bound", frac_sharp, 0.0,
                                 -std::max(frac_sharp, frac_crude), 0.0, seed, sample_size,
                                 std::to_string(grid_res) + "^3");
  rep.extra["violation_fraction_crude"] = frac_crude;
  rep.extra["occupied_cells"] = occupied;
  rep.extra["worst_density_to_cap"] = worst;
  rep.extra["crude_factor"] = crude;
  return rep;
}

} // namespace

VerifyReport check_density_bound(const DensitySpec& spec0, const Cloud& target, double s,
                                 std::size_t sample_size, std::uint64_t seed, int grid_res) {
  return density_bound_impl(spec0, target, s, sample_size, seed, grid_res, "fj-cloud");
}

VerifyReport check_density_bound(const DensitySpec& spec0, const DensitySpec& spec1, double s,
                                 std::size_t sample_size, std::uint64_t seed, int grid_res) {
  const Rand r(seed, "fj-target");
  const Cloud target = sample_cloud(spec1, sample_size, r.sub("mu1"));
  return density_bound_impl(spec0, target, s, sample_size, seed, grid_res, "fj-spec");
}

VerifyReport check_jacobian_density(const DensitySpec& spec0, const DensitySpec& spec1,
                                    double s, std::size_t sample_size, std::uint64_t seed,
                                    int grid_res) {
  const Rand r(seed, "jacobian");
  const Cloud c0 = sample_cloud(spec0, sample_size, r.sub("mu0"));
  const Cloud c1 = sample_cloud(spec1, sample_size, r.sub("mu1"));
  const TransportRun t = run_transport(c0, c1, s);
  const std::vector<char> moving = moving_flags(t);

  std::vector<double> bw;
  const VoxelGrid rho = smoothed_interpolant(t.mid, grid_res, bw);
  double kernel_vol = 1.0;
  for (double b : bw) kernel_vol *= b;

  const int n = c0.n();
  const int N = 2 * n + 1;
  const double inv_n = -1.0 / static_cast<double>(N);

  double violating_mass = 0.0, static_mass = 0.0, worst = 0.0;
  for (std::size_t e = 0; e < t.plan.entries.size(); ++e) {
    const PlanEntry& pe = t.plan.entries[e];
    const bool mov = moving[e] != 0;
    if (!mov) static_mass += pe.mass;
    const double r0 = spec0.density(t.c0.points[static_cast<std::size_t>(pe.i)]);
    const double r1 = spec1.density(t.c1.points[static_cast<std::size_t>(pe.j)]);
    const std::size_t c = rho.cell_of(t.mid.points[e]);
    const double rs = c == VoxelGrid::npos ? 0.0 : rho.value[c];
    if (!(rs > 0.0) || !(r0 > 0.0) || !(r1 > 0.0)) {
      violating_mass += pe.mass;  // estimator hole counts against the check
      continue;
    }
    const double lhs = std::pow(rs, inv_n);
    const double rhs = tau_hat(1.0 - s, t.geo[e].theta, n, mov) * std::pow(r0, inv_n) +
                       tau_hat(s, t.geo[e].theta, n, mov) * std::pow(r1, inv_n);
    const double se_rho = std::sqrt(rs / (static_cast<double>(sample_size) * kernel_vol));
    const double se_lhs = lhs / (static_cast<double>(N) * rs) * se_rho;
    if (lhs < rhs - 3.0 * se_lhs - 1e-12) {
      violating_mass += pe.mass;
      worst = std::max(worst, (rhs - lhs) / rhs);
    }
  }

  VerifyReport rep = make_report("jacobian-density", violating_mass, 0.0, -violating_mass,
                                 0.0, seed, sample_size, std::to_string(grid_res) + "^3");
  rep.extra["static_mass"] = static_mass;
  rep.extra["worst_relative_violation"] = worst;
  rep.extra["bandwidth"] = bw;
  return rep;
}

} // namespace heis
