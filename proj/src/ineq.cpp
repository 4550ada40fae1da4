#include "heis/ineq.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "heis/cclog.hpp"
#include "heis/cloud.hpp"
#include "heis/distortion.hpp"
#include "heis/parallel.hpp"
#include "heis/voxel.hpp"

namespace heis {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;
constexpr double kInf = std::numeric_limits<double>::infinity();

double pow_int(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

// d/dv of v^(1/k) scaled by the volume standard error; 0 at v = 0 (the
// estimate is exact there: empty hit-or-miss cannot fluctuate upward much,
// and the bound side it feeds is already 0).
double root_se(double v, double se, int k) {
  if (!(v > 0.0)) return 0.0;
  return se * std::pow(v, 1.0 / k - 1.0) / k;
}

// tau * v^(1/k) under the inf * 0 = 0 convention.
double tau_term(const DistortionValue& t, double v, int k) {
  const double root = v > 0.0 ? std::pow(v, 1.0 / k) : 0.0;
  if (t.finite) return t.value * root;
  return root == 0.0 ? 0.0 : kInf;
}

struct OccupancyBracket {
  double value = 0.0;  // interior cells plus half the boundary shell
  double se = 0.0;     // Poisson noise plus the shell half-width
  double lo = 0.0, hi = 0.0;
};

// Occupancy with the boundary ambiguity made explicit: cells whose face
// neighbors are all hit count in full, the rest (the shell that straddles
// the true boundary) count at half weight, and the shell half-width enters
// the standard error as a uniform-distribution term.
OccupancyBracket occupancy_bracket(const std::vector<HPoint>& pts, const VoxelGrid& geom) {
  std::vector<std::uint32_t> count(geom.cells(), 0);
  for (const HPoint& p : pts) {
    const std::size_t c = geom.cell_of(p);
    if (c == VoxelGrid::npos) throw std::invalid_argument("occupancy_bracket: point outside grid");
    ++count[c];
  }
  const int d = geom.dim();
  std::vector<std::size_t> stride(d);
  std::size_t acc = 1;
  for (int a = d - 1; a >= 0; --a) {
    stride[a] = acc;
    acc *= static_cast<std::size_t>(geom.res[a]);
  }
  std::size_t interior = 0, shell = 0;
  double poisson_var = 0.0;
  std::vector<std::size_t> idx(d);
  for (std::size_t c = 0; c < geom.cells(); ++c) {
    if (count[c] == 0) continue;
    std::size_t rem = c;
    for (int a = 0; a < d; ++a) {
      idx[a] = rem / stride[a];
      rem %= stride[a];
    }
    bool inner = true;
    for (int a = 0; a < d && inner; ++a) {
      if (idx[a] == 0 || idx[a] + 1 == static_cast<std::size_t>(geom.res[a])) {
        inner = false;
        break;
      }
      if (count[c - stride[a]] == 0 || count[c + stride[a]] == 0) inner = false;
    }
    if (inner)
      ++interior;
    else
      ++shell;
    const double miss = std::exp(-static_cast<double>(count[c]));
    poisson_var += miss * (1.0 - miss);
  }
  const double v = geom.cell_volume();
  OccupancyBracket out;
  out.lo = v * static_cast<double>(interior);
  out.hi = v * static_cast<double>(interior + shell);
  out.value = v * (static_cast<double>(interior) + 0.5 * static_cast<double>(shell));
  const double half = 0.5 * v * static_cast<double>(shell);
  out.se = std::sqrt(poisson_var * v * v + half * half / 3.0);
  return out;
}

double ls_slope(const std::vector<double>& logx, const std::vector<double>& logy) {
  const std::size_t m = logx.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += logx[i];
    my += logy[i];
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    num += (logx[i] - mx) * (logy[i] - my);
    den += (logx[i] - mx) * (logx[i] - mx);
  }
  return num / den;
}

double euclidean_ball_volume(int dim, double radius) {
  return std::pow(kPi, dim / 2.0) / std::tgamma(dim / 2.0 + 1.0) * std::pow(radius, dim);
}

} // namespace

VerifyReport check_bm_weighted(const SetSpec& a, const SetSpec& b, double s,
                               std::size_t samples, std::uint64_t seed, int voxel_res) {
  const Rand r(seed, "bm-weighted");
  const int n = a.n();
  const int N = 2 * n + 1;
  const VolumeEstimate va = volume_mc(a, samples, r.sub("volA"));
  const VolumeEstimate vb = volume_mc(b, samples, r.sub("volB"));
  const ThetaEstimate th = theta_ab(a, b, samples, 0.001, r.sub("theta"));
  const ZsetEstimate z = zset_volume(a, b, s, samples, voxel_res, r.sub("zset"));

  const DistortionValue t0 = tau(1.0 - s, th.theta, n);
  const DistortionValue t1 = tau(s, th.theta, n);
  const double rhs = tau_term(t0, va.value, N) + tau_term(t1, vb.value, N);
  const double lhs = std::pow(z.volume, 1.0 / N);
  const double lhs_ref = std::pow(z.volume_refined, 1.0 / N);

  double tol = 3.0 * root_se(z.volume, z.se, N);
  if (t0.finite) tol += 3.0 * t0.value * root_se(va.value, va.se, N);
  if (t1.finite) tol += 3.0 * t1.value * root_se(vb.value, vb.se, N);

  VerifyReport rep = make_report("bm-weighted", lhs, rhs, std::min(lhs, lhs_ref) - rhs, tol,
                                 seed, samples, grid_label(z.res));
  rep.extra["lhs_refined"] = lhs_ref;
  rep.extra["vol_A"] = va.value;
  rep.extra["vol_B"] = vb.value;
  rep.extra["vol_Z"] = z.volume;
  rep.extra["theta"] = th.theta;
  rep.extra["theta_raw_min"] = th.raw_min;
  rep.extra["theta_sweep"] = th.sweep;
  rep.extra["tau_1ms"] = t0.finite ? t0.value : -1.0;
  rep.extra["tau_s"] = t1.finite ? t1.value : -1.0;
  return rep;
}

VerifyReport check_bm_nonweighted(const SetSpec& a, const SetSpec& b, double s, int variant,
                                  std::size_t samples, std::uint64_t seed, int voxel_res) {
  if (variant != 1 && variant != 2)
    throw std::invalid_argument("check_bm_nonweighted: variant must be 1 or 2");
  const Rand r(seed, "bm-nonweighted");
  const int n = a.n();
  const VolumeEstimate va = volume_mc(a, samples, r.sub("volA"));
  const VolumeEstimate vb = volume_mc(b, samples, r.sub("volB"));
  const ZsetEstimate z = zset_volume(a, b, s, samples, voxel_res, r.sub("zset"));

  const bool first = variant == 1;
  const int k = first ? 2 * n + 1 : 2 * n + 3;
  const double expnt = (2.0 * n + 3.0) / (2.0 * n + 1.0);
  const double w0 = first ? std::pow(1.0 - s, expnt) : (1.0 - s);
  const double w1 = first ? std::pow(s, expnt) : s;
  const double c = first ? 1.0 : std::pow(0.25, 1.0 / k);

  const double root_a = va.value > 0.0 ? std::pow(va.value, 1.0 / k) : 0.0;
  const double root_b = vb.value > 0.0 ? std::pow(vb.value, 1.0 / k) : 0.0;
  const double rhs = c * (w0 * root_a + w1 * root_b);
  const double lhs = std::pow(z.volume, 1.0 / k);
  const double lhs_ref = std::pow(z.volume_refined, 1.0 / k);
  const double tol = 3.0 * (root_se(z.volume, z.se, k) + c * w0 * root_se(va.value, va.se, k) +
                            c * w1 * root_se(vb.value, vb.se, k));

  VerifyReport rep = make_report(first ? "bm-nonweighted-i" : "bm-nonweighted-ii", lhs, rhs,
                                 std::min(lhs, lhs_ref) - rhs, tol, seed, samples,
                                 grid_label(z.res));
  rep.extra["lhs_refined"] = lhs_ref;
  rep.extra["vol_A"] = va.value;
  rep.extra["vol_B"] = vb.value;
  rep.extra["vol_Z"] = z.volume;
  return rep;
}

VerifyReport check_mcp(const HPoint& x, const SetSpec& e, double s, std::size_t samples,
                       std::uint64_t seed, int voxel_res) {
  const Rand r(seed, "mcp");
  const int n = x.n();
  const int N = 2 * n + 1;
  const VolumeEstimate ve = volume_mc(e, samples, r.sub("volE"));
  const ThetaEstimate th = theta_ab(SetSpec::point(x), e, samples, 0.001, r.sub("theta"));

  // Estimator (a): occupancy of contracted samples.
  const std::vector<HPoint> mids =
      zset_midpoints(SetSpec::point(x), e, s, samples, r.sub("mid"));
  const VoxelGrid geom = fit_grid({&mids}, voxel_res, 0.02);
  const OccupancyBracket occ = occupancy_bracket(mids, geom);

  // Estimator (b): vol(E) times the mean contraction Jacobian tau_s^(2n+1)
  // over uniform samples of E; exact change of variables, no grid.
  const Rand rc = r.sub("cov");
  std::vector<double> jac(samples);
  parallel_for(static_cast<std::int64_t>(samples), [&](std::int64_t i) {
    const std::uint64_t u = static_cast<std::uint64_t>(i);
    const double t = theta_angle(x, e.sample(rc, u));
    const DistortionValue tv = tau(s, t, n);
    jac[u] = tv.finite ? pow_int(tv.value, N) : 0.0;
  });
  double mean = 0.0;
  for (double j : jac) mean += j;
  mean /= static_cast<double>(samples);
  double var = 0.0;
  for (double j : jac) var += (j - mean) * (j - mean);
  var /= static_cast<double>(samples - 1);
  const double est_b = ve.value * mean;
  const double se_b = std::sqrt(var / static_cast<double>(samples)) * ve.value + mean * ve.se;

  const DistortionValue ts = tau(s, th.theta, n);
  const double f_sharp = ts.finite ? pow_int(ts.value, N) : kInf;
  const double bound_sharp = f_sharp == kInf ? (ve.value == 0.0 ? 0.0 : kInf)
                                             : f_sharp * ve.value;
  const double f_weak = std::pow(s, 2.0 * n + 3.0);
  const double bound_weak = f_weak * ve.value;

  const double m_sharp = occ.value - bound_sharp;
  const double tol_sharp = 3.0 * (occ.se + (f_sharp == kInf ? 0.0 : f_sharp * ve.se));
  const double m_weak = occ.value - bound_weak;
  const double tol_weak = 3.0 * (occ.se + f_weak * ve.se);
  const double m_agree = -std::abs(occ.value - est_b);
  const double tol_agree = 3.0 * (occ.se + se_b);

  VerifyReport rep = make_report("mcp", occ.value, bound_sharp, m_sharp, tol_sharp, seed,
                                 samples, grid_label(geom.res));
  rep.extra["est_cov"] = est_b;
  rep.extra["se_occupancy"] = occ.se;
  rep.extra["se_cov"] = se_b;
  rep.extra["bound_weak"] = bound_weak;
  rep.extra["margin_weak"] = m_weak;
  rep.extra["tolerance_weak"] = tol_weak;
  rep.extra["margin_agreement"] = m_agree;
  rep.extra["tolerance_agreement"] = tol_agree;
  rep.extra["theta"] = th.theta;
  rep.extra["vol_E"] = ve.value;
  rep.pass = rep.pass && (m_weak + tol_weak >= 0.0) && (m_agree + tol_agree >= 0.0);
  return rep;
}

VerifyReport check_mult_bm(const SetSpec& a, const SetSpec& b, std::size_t samples,
                           std::uint64_t seed, int voxel_res) {
  const Rand r(seed, "mult-bm");
  const int n = a.n();
  const int N = 2 * n + 1;
  const VolumeEstimate va = volume_mc(a, samples, r.sub("volA"));
  const VolumeEstimate vb = volume_mc(b, samples, r.sub("volB"));

  std::vector<HPoint> prod(samples);
  const Rand ra = r.sub("prod-A"), rb = r.sub("prod-B");
  parallel_for(static_cast<std::int64_t>(samples), [&](std::int64_t i) {
    const std::uint64_t u = static_cast<std::uint64_t>(i);
    prod[u] = mul(a.sample(ra, u), b.sample(rb, u));
  });
  const VoxelGrid geom = fit_grid({&prod}, voxel_res, 0.02);
  const OccupancyBracket occ = occupancy_bracket(prod, geom);

  const double root_a = va.value > 0.0 ? std::pow(va.value, 1.0 / N) : 0.0;
  const double root_b = vb.value > 0.0 ? std::pow(vb.value, 1.0 / N) : 0.0;
  const double lhs = std::pow(occ.value, 1.0 / N);
  const double rhs = root_a + root_b;
  const double tol = 3.0 * (root_se(occ.value, occ.se, N) + root_se(va.value, va.se, N) +
                            root_se(vb.value, vb.se, N));

  VerifyReport rep = make_report("mult-bm", lhs, rhs, lhs - rhs, tol, seed, samples,
                                 grid_label(geom.res));
  // The next integer exponent is known to fail for some sets; log, never assert.
  const int M = 2 * n + 2;
  const double lhs_m = std::pow(occ.value, 1.0 / M);
  const double rhs_m = (va.value > 0.0 ? std::pow(va.value, 1.0 / M) : 0.0) +
                       (vb.value > 0.0 ? std::pow(vb.value, 1.0 / M) : 0.0);
  rep.extra["margin_next_exponent"] = lhs_m - rhs_m;
  rep.extra["vol_A"] = va.value;
  rep.extra["vol_B"] = vb.value;
  rep.extra["vol_AB"] = occ.value;
  return rep;
}

VerifyReport check_quarter_sharpness(const std::vector<double>& r_list, std::size_t samples,
                                     std::uint64_t seed,
                                     std::vector<std::vector<double>>* table_out) {
  if (r_list.size() < 2) throw std::invalid_argument("check_quarter_sharpness: need >= 2 radii");
  for (std::size_t i = 0; i + 1 < r_list.size(); ++i)
    if (!(r_list[i] > r_list[i + 1]))
      throw std::invalid_argument("check_quarter_sharpness: r_list must decrease");
  if (!(r_list.back() >= 0.01))
    throw std::invalid_argument("check_quarter_sharpness: min radius is 0.01");

  const Rand r(seed, "quarter");
  std::vector<double> ratio(r_list.size()), ratio_se(r_list.size());
  for (std::size_t i = 0; i < r_list.size(); ++i) {
    const double rad = r_list[i];
    const SetSpec a = SetSpec::euclidean_ball(HPoint(-1.0, 0.0, 0.0), rad);
    const SetSpec b = SetSpec::euclidean_ball(HPoint(1.0, 0.0, 0.0), rad);
    const ZsetExactEstimate z =
        zset_volume_exact(a, b, 0.5, samples, r.sub(("r" + std::to_string(i)).c_str()));
    const double vball = euclidean_ball_volume(3, rad);
    ratio[i] = z.volume / vball;
    ratio_se[i] = z.se / vball;
    if (table_out) table_out->push_back({rad, ratio[i], ratio_se[i], z.volume, vball});
  }

  // Halving steps: the leading O(r) error cancels in 2 f(r) - f(2r).
  const std::size_t last = r_list.size() - 1;
  const double extrap = 2.0 * ratio[last] - ratio[last - 1];
  const double se_extrap =
      std::sqrt(4.0 * ratio_se[last] * ratio_se[last] + ratio_se[last - 1] * ratio_se[last - 1]);

  // Two facts are checked against the measured ratios.  The interpolation
  // inequality gives the floor: L(Z_{1/2}) >= 2^{2n+1} tau_{1/2}(0)^{2n+1}
  // L(B_r) = L(B_r)/4 as r -> 0, so every ratio must clear 1/4 minus noise.
  // The floor is not the limit.  The two differentials of the midpoint map
  // at the base pair are opposite shears in the (vertical, second
  // horizontal) plane; their image ellipsoids are not homothetic, so the
  // limiting ratio is the volume of their Minkowski sum over the ball
  // volume, strictly above the floor.  Support-function hulls of that sum
  // (inscribed and circumscribed, Richardson in the mesh) pin it down:
  const double limit = 0.405406;
  const double floor_val = pow_int(2.0, 3) * pow_int(tau(0.5, 0.0, 1).value, 3);
  const double dev_small = std::abs(ratio[last] - limit) / limit;
  const double dev_extrap = std::abs(extrap - limit) / limit;

  VerifyReport rep = make_report("quarter-sharpness", extrap, limit,
                                 0.05 * limit - std::abs(extrap - limit),
                                 3.0 * se_extrap, seed, samples);
  double floor_margin = kInf;
  for (std::size_t i = 0; i < ratio.size(); ++i)
    floor_margin = std::min(floor_margin, ratio[i] - floor_val + 3.0 * ratio_se[i]);
  rep.extra["ratios"] = ratio;
  rep.extra["ratio_se"] = ratio_se;
  rep.extra["radii"] = r_list;
  rep.extra["deviation_smallest_r"] = dev_small;
  rep.extra["deviation_extrapolated"] = dev_extrap;
  rep.extra["floor"] = floor_val;
  rep.extra["floor_margin_min"] = floor_margin;
  rep.extra["sum_limit"] = limit;
  rep.pass = rep.pass && dev_small <= 0.10 + 3.0 * ratio_se[last] / limit &&
             floor_margin >= 0.0;
  return rep;
}

VerifyReport ball_asymptotics(const std::vector<double>& r_list, double s, std::size_t samples,
                              std::uint64_t seed,
                              std::vector<std::vector<double>>* table_out) {
  if (r_list.size() < 3) throw std::invalid_argument("ball_asymptotics: need >= 3 radii");
  const Rand r(seed, "asymptotics");
  const int n = 1;
  const int N = 2 * n + 1;
  std::vector<double> lx, l_theta_gap, l_tau, l_lhs, l_rhs;
  for (std::size_t i = 0; i < r_list.size(); ++i) {
    const double rad = r_list[i];
    const SetSpec a = SetSpec::cc_ball(HPoint(0.0, 0.0, 0.0), rad);
    const SetSpec b = SetSpec::cc_ball(HPoint(0.0, 0.0, 1.0), rad);
    const Rand ri = r.sub(("r" + std::to_string(i)).c_str());
    const ThetaEstimate th = theta_ab(a, b, samples, 0.001, ri.sub("theta"));
    const double vz = zset_volume_exact(a, b, s, samples, ri.sub("zvol")).volume;
    const double vball = cc_ball_volume(n, rad);
    const DistortionValue t0 = tau(1.0 - s, th.theta, n);
    const DistortionValue t1 = tau(s, th.theta, n);
    const double rhs = tau_term(t0, vball, N) + tau_term(t1, vball, N);

    lx.push_back(std::log(rad));
    l_theta_gap.push_back(std::log(2.0 * kPi - th.theta));
    l_tau.push_back(std::log(t1.finite ? t1.value : kInf));
    l_lhs.push_back(std::log(std::pow(vz, 1.0 / N)));
    l_rhs.push_back(std::log(rhs));
    if (table_out)
      table_out->push_back({rad, 2.0 * kPi - th.theta, t1.finite ? t1.value : -1.0, vz, rhs});
  }
  const double slope_gap = ls_slope(lx, l_theta_gap);
  const double slope_tau = ls_slope(lx, l_tau);
  const double slope_lhs = ls_slope(lx, l_lhs);
  const double slope_rhs = ls_slope(lx, l_rhs);

  VerifyReport rep = make_report("ball-asymptotics", slope_lhs, slope_rhs,
                                 0.3 - std::abs(slope_lhs - slope_rhs), 0.0, seed, samples);
  rep.extra["slope_theta_gap"] = slope_gap;
  rep.extra["slope_tau"] = slope_tau;
  rep.extra["slope_lhs_root"] = slope_lhs;
  rep.extra["slope_rhs"] = slope_rhs;
  rep.pass = rep.pass && slope_gap >= 0.7 && slope_gap <= 1.3 && slope_tau >= -0.5 &&
             slope_tau <= -0.15;
  return rep;
}

} // namespace heis
