#include "heis/setspec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "heis/cclog.hpp"
#include "heis/cloud.hpp"
#include "heis/parallel.hpp"
#include "heis/stable.hpp"
#include "heis/voxel.hpp"

namespace heis {

namespace {
constexpr double kPi = 3.1415926535897932384626433832795;
constexpr double kTwoPi = 2.0 * kPi;
constexpr int kRejectionCap = 10000;
} // namespace

SetSpec SetSpec::cc_ball(const HPoint& center, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("SetSpec: radius must be positive");
  SetSpec s;
  s.kind = Kind::CCBall;
  s.center = center;
  s.radius = radius;
  return s;
}

SetSpec SetSpec::koranyi_box(const HPoint& center, std::vector<double> half_width) {
  if (half_width.size() != static_cast<std::size_t>(2 * center.n() + 1))
    throw std::invalid_argument("SetSpec: half_width size mismatch");
  for (double h : half_width)
    if (!(h > 0.0)) throw std::invalid_argument("SetSpec: half widths must be positive");
  SetSpec s;
  s.kind = Kind::KoranyiBox;
  s.center = center;
  s.half_width = std::move(half_width);
  return s;
}

SetSpec SetSpec::euclidean_ball(const HPoint& center, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("SetSpec: radius must be positive");
  SetSpec s;
  s.kind = Kind::EuclideanBall;
  s.center = center;
  s.radius = radius;
  return s;
}

SetSpec SetSpec::point(const HPoint& center) {
  SetSpec s;
  s.kind = Kind::Point;
  s.center = center;
  return s;
}

bool SetSpec::contains(const HPoint& p) const {
  const std::vector<double> x = to_coords(p);
  const std::vector<double> c = to_coords(center);
  if (x.size() != c.size()) throw std::invalid_argument("SetSpec: dimension mismatch");
  switch (kind) {
    case Kind::CCBall:
      return cc_dist(center, p) <= radius;
    case Kind::KoranyiBox:
      for (std::size_t k = 0; k < x.size(); ++k)
        if (std::abs(x[k] - c[k]) > half_width[k]) return false;
      return true;
    case Kind::EuclideanBall: {
      double q = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k) q += (x[k] - c[k]) * (x[k] - c[k]);
      return q <= radius * radius;
    }
    case Kind::Point:
      return x == c;
  }
  throw std::logic_error("SetSpec: unknown kind");
}

void SetSpec::bounding_box(std::vector<double>& lo, std::vector<double>& hi) const {
  const std::vector<double> c = to_coords(center);
  const std::size_t d = c.size();
  lo.assign(d, 0.0);
  hi.assign(d, 0.0);
  switch (kind) {
    case Kind::CCBall: {
      // Left translate of a centered ball: |zeta| <= r per component, and the
      // group law twists the t span by 2 |zeta_c| r on top of the 2 r^2 / pi
      // vertical reach of the centered ball.
      const double tspan = 2.0 * radius * radius / kPi + 2.0 * center.zeta_norm() * radius;
      for (std::size_t k = 0; k + 1 < d; ++k) {
        lo[k] = c[k] - radius;
        hi[k] = c[k] + radius;
      }
      lo[d - 1] = c[d - 1] - tspan;
      hi[d - 1] = c[d - 1] + tspan;
      return;
    }
    case Kind::KoranyiBox:
      for (std::size_t k = 0; k < d; ++k) {
        lo[k] = c[k] - half_width[k];
        hi[k] = c[k] + half_width[k];
      }
      return;
    case Kind::EuclideanBall:
      for (std::size_t k = 0; k < d; ++k) {
        lo[k] = c[k] - radius;
        hi[k] = c[k] + radius;
      }
      return;
    case Kind::Point:
      for (std::size_t k = 0; k < d; ++k) lo[k] = hi[k] = c[k];
      return;
  }
  throw std::logic_error("SetSpec: unknown kind");
}

HPoint SetSpec::sample(const Rand& r, std::uint64_t index) const {
  switch (kind) {
    case Kind::Point:
      return center;
    case Kind::CCBall:
      return DensitySpec::uniform_cc_ball(center, radius).sample(r, index);
    case Kind::KoranyiBox:
      return DensitySpec::uniform_box(center, half_width).sample(r, index);
    case Kind::EuclideanBall: {
      const int d = dim();
      const std::vector<double> c = to_coords(center);
      for (int attempt = 0; attempt < kRejectionCap; ++attempt) {
        std::vector<double> x(d);
        double q = 0.0;
        for (int k = 0; k < d; ++k) {
          const double u = r.uniform(-radius, radius,
                                     index, static_cast<std::uint64_t>(attempt) * d + k);
          x[k] = c[k] + u;
          q += u * u;
        }
        if (q <= radius * radius) return from_coords(x);
      }
      throw std::runtime_error("SetSpec: rejection sampling cap hit");
    }
  }
  throw std::logic_error("SetSpec: unknown kind");
}

VolumeEstimate volume_mc(const SetSpec& a, std::size_t samples, const Rand& r) {
  if (a.kind == SetSpec::Kind::Point) return {0.0, 0.0};
  if (samples < 1000) throw std::invalid_argument("volume_mc: need at least 1000 samples");
  std::vector<double> lo, hi;
  a.bounding_box(lo, hi);
  double box = 1.0;
  for (std::size_t k = 0; k < lo.size(); ++k) {
    if (!(hi[k] > lo[k])) throw std::invalid_argument("volume_mc: degenerate bounding box");
    box *= hi[k] - lo[k];
  }
  const int d = a.dim();
  const double hits = parallel_sum(static_cast<std::int64_t>(samples), [&](std::int64_t i) {
    std::vector<double> x(d);
    for (int k = 0; k < d; ++k)
      x[k] = r.uniform(lo[k], hi[k], static_cast<std::uint64_t>(i), k);
    return a.contains(from_coords(x)) ? 1.0 : 0.0;
  });
  const double frac = hits / static_cast<double>(samples);
  return {box * frac, box * std::sqrt(frac * (1.0 - frac) / static_cast<double>(samples))};
}

ThetaEstimate theta_ab(const SetSpec& a, const SetSpec& b, std::size_t samples,
                       double quantile, const Rand& r) {
  if (samples == 0) throw std::invalid_argument("theta_ab: samples must be positive");
  if (!(quantile >= 0.0) || !(quantile < 1.0))
    throw std::invalid_argument("theta_ab: quantile must lie in [0, 1)");
  std::vector<double> th(samples);
  const Rand ra = r.sub("theta-A"), rb = r.sub("theta-B");
  parallel_for(static_cast<std::int64_t>(samples), [&](std::int64_t i) {
    const std::uint64_t u = static_cast<std::uint64_t>(i);
    th[u] = theta_angle(a.sample(ra, u), b.sample(rb, u));
  });
  std::sort(th.begin(), th.end());
  auto at_quantile = [&](double q) {
    const std::size_t idx = std::min(samples - 1,
                                     static_cast<std::size_t>(q * static_cast<double>(samples)));
    return th[idx];
  };
  ThetaEstimate est;
  est.raw_min = th.front();
  est.quantile = quantile;
  est.theta = at_quantile(quantile);
  est.sweep = {at_quantile(0.01), at_quantile(0.001), at_quantile(0.0001)};
  return est;
}

std::vector<HPoint> zset_midpoints(const SetSpec& a, const SetSpec& b, double s,
                                   std::size_t samples, const Rand& r) {
  if (!(s > 0.0) || !(s < 1.0)) throw std::invalid_argument("zset_midpoints: s must be in (0,1)");
  std::vector<HPoint> mids(samples);
  const Rand ra = r.sub("Z-A"), rb = r.sub("Z-B");
  parallel_for(static_cast<std::int64_t>(samples), [&](std::int64_t i) {
    const std::uint64_t u = static_cast<std::uint64_t>(i);
    mids[u] = geo_point(a.sample(ra, u), b.sample(rb, u), s);
  });
  return mids;
}

ZsetEstimate zset_volume(const SetSpec& a, const SetSpec& b, double s,
                         std::size_t samples, int voxel_res, const Rand& r) {
  const std::vector<HPoint> mids = zset_midpoints(a, b, s, samples, r);
  const VoxelGrid geom = fit_grid({&mids}, voxel_res, 0.02);
  const OccupancyEstimate occ = occupied_volume_se(mids, geom);
  ZsetEstimate est;
  est.volume = occ.volume;
  est.se = occ.se;
  est.hit_cells = occ.hit_cells;
  est.res = geom.res;
  est.volume_refined = occupied_volume(mids, geom.refined(2));
  return est;
}

// ---------------------------------------------------------------------------
// Exact Z-set membership.  Everything below works in flat n = 1 coordinates
// to keep the inner Gauss-Newton loop free of heap traffic.

namespace {

struct P3 {
  double x = 0.0, y = 0.0, t = 0.0;
};

inline P3 mul1(const P3& a, const P3& b) {
  return {a.x + b.x, a.y + b.y, a.t + b.t + 2.0 * (a.y * b.x - a.x * b.y)};
}

inline P3 inv1(const P3& a) { return {-a.x, -a.y, -a.t}; }

inline P3 to_p3(const HPoint& p) { return {p.zeta[0], p.zeta[1], p.t}; }

inline double comp(const P3& p, int k) { return k == 0 ? p.x : (k == 1 ? p.y : p.t); }
inline void add_comp(P3& p, int k, double v) {
  if (k == 0) p.x += v; else if (k == 1) p.y += v; else p.t += v;
}

struct Log1 {
  double cr = 0.0, ci = 0.0, theta = 0.0;
  bool at_origin = false;
};

// Same recovery as cc_log: axis threshold, chi from the prefactor, |chi|
// polish against the vertical component.  Axis points take the first-axis
// representative.
Log1 log1(double dx, double dy, double dt) {
  static const double axis_ratio = nu(kTwoPi - 1e-7);
  Log1 o;
  const double q = dx * dx + dy * dy;
  if (q == 0.0 && dt == 0.0) {
    o.at_origin = true;
    return o;
  }
  if (q == 0.0 || std::abs(dt) > axis_ratio * q) {
    o.theta = dt >= 0.0 ? kTwoPi : -kTwoPi;
    o.cr = std::sqrt(kPi * std::abs(dt));
    return o;
  }
  double theta = dt == 0.0 ? 0.0 : nu_inverse(std::abs(dt) / q);
  if (dt < 0.0) theta = -theta;
  if (theta == 0.0) {
    o.cr = dx;
    o.ci = dy;
    return o;
  }
  const double dr = sinc(theta);
  const double di = -haversinc(theta);
  const double d2 = dr * dr + di * di;
  double cr = (dx * dr + dy * di) / d2;
  double ci = (dy * dr - dx * di) / d2;
  const double t_hat = 2.0 * (cr * cr + ci * ci) * x_minus_sin(std::abs(theta)) / (theta * theta);
  if (t_hat > 0.0) {
    const double lam = std::sqrt(std::abs(dt) / t_hat);
    if (lam > 0.5 && lam < 2.0) {
      cr *= lam;
      ci *= lam;
    }
  }
  o.cr = cr;
  o.ci = ci;
  o.theta = theta;
  return o;
}

inline double dist1(const P3& c, const P3& p) {
  const P3 d = mul1(inv1(c), p);
  const Log1 l = log1(d.x, d.y, d.t);
  return std::sqrt(l.cr * l.cr + l.ci * l.ci);
}

// Upper bound on sup over the set of the cc distance to its center.
double cc_outer_radius(const SetSpec& sp) {
  if (sp.kind == SetSpec::Kind::CCBall) return sp.radius;
  const double zc = sp.center.zeta_norm();
  return sp.radius + std::sqrt(kPi * sp.radius * (1.0 + 2.0 * zc));
}

// Search context shared across many membership queries for one (A, B, s).
struct MemberCtx {
  const SetSpec* a = nullptr;
  const SetSpec* b = nullptr;
  double s = 0.5;
  P3 ac, bc;
  double ra_outer = 0.0, rb_outer = 0.0, dist_ab = 0.0;
};

MemberCtx make_ctx(const SetSpec& a, const SetSpec& b, double s) {
  if (a.n() != 1 || b.n() != 1)
    throw std::invalid_argument("zset_member: n = 1 only");
  auto ball = [](const SetSpec& sp) {
    return sp.kind == SetSpec::Kind::CCBall || sp.kind == SetSpec::Kind::EuclideanBall;
  };
  if (!ball(a) || !ball(b))
    throw std::invalid_argument("zset_member: ball kinds only");
  if (!(s > 0.0) || !(s < 1.0)) throw std::invalid_argument("zset_member: s must be in (0,1)");
  MemberCtx c;
  c.a = &a;
  c.b = &b;
  c.s = s;
  c.ac = to_p3(a.center);
  c.bc = to_p3(b.center);
  c.ra_outer = cc_outer_radius(a);
  c.rb_outer = cc_outer_radius(b);
  c.dist_ab = dist1(c.ac, c.bc);
  return c;
}

// z is a member iff some geodesic through z, written omega(u) =
// z * Gamma_1(u chi, u theta) so that d(omega(-s), z) = s |chi| and
// d(z, omega(1-s)) = (1-s)|chi| hold by construction, has omega(-s) in A
// and omega(1-s) in B with |theta| <= 2 pi.  The search runs over
// v = (chi, theta) with theta clamped, which keeps every trial state
// evaluable; the objective is the sum of squared excess distances, exactly
// zero at a witness.

P3 omega(const P3& z, const double v[3], double u) {
  const double cr = u * v[0], ci = u * v[1], th = u * v[2];
  P3 g;
  if (th == 0.0) {
    g = {cr, ci, 0.0};
  } else {
    const double ur = sinc(th);
    const double ui = -haversinc(th);
    g.x = ur * cr - ui * ci;
    g.y = ur * ci + ui * cr;
    g.t = 2.0 * (cr * cr + ci * ci) * x_minus_sin(th) / (th * th);
  }
  return mul1(z, g);
}

inline double hinge_dist(const SetSpec& sp, const P3& center, const P3& p) {
  double d;
  if (sp.kind == SetSpec::Kind::EuclideanBall) {
    const double dx = p.x - center.x, dy = p.y - center.y, dt = p.t - center.t;
    d = std::sqrt(dx * dx + dy * dy + dt * dt);
  } else {
    d = dist1(center, p);
  }
  return std::max(d - sp.radius, 0.0);
}

// Nearest-point retraction into the set, pulled slightly inside so that the
// log/exp round trip through the projected point stays feasible under
// roundoff.  Euclidean balls clamp radially; cc balls retract by a group
// dilation about the center, which is metric-exact by homogeneity.
P3 proj_set(const SetSpec& sp, const P3& center, const P3& p) {
  const double r = sp.radius;
  if (sp.kind == SetSpec::Kind::EuclideanBall) {
    const double dx = p.x - center.x, dy = p.y - center.y, dt = p.t - center.t;
    const double n2 = dx * dx + dy * dy + dt * dt;
    if (n2 <= r * r) return p;
    const double f = r / std::sqrt(n2) * (1.0 - 1e-13);
    return {center.x + f * dx, center.y + f * dy, center.t + f * dt};
  }
  const P3 d = mul1(inv1(center), p);
  const Log1 l = log1(d.x, d.y, d.t);
  const double dd = std::sqrt(l.cr * l.cr + l.ci * l.ci);
  if (dd <= r) return p;
  const double f = r / dd * (1.0 - 1e-13);
  return mul1(center, {f * d.x, f * d.y, f * f * d.t});
}

// Alternating-projection snap from a near-witness state.  Each half step
// projects an endpoint into its set and rebuilds the geodesic data exactly
// through the projected point (the log at z recovers that arc because the
// restriction of a witness geodesic is itself minimizing), so one
// constraint holds by construction and the other is tested inclusively.
// The log direction is discontinuous near the vertical axis, so this is a
// short polish from an already close state, not a standalone search.  The
// theta clamp only fires on iterates no witness could produce; success
// re-verifies the constructed side to cover that case.
bool snap_member(const MemberCtx& c, const P3& z, double v[3]) {
  auto clamp_th = [](double th) {
    return th > kTwoPi ? kTwoPi : (th < -kTwoPi ? -kTwoPi : th);
  };
  for (int round = 0; round < 24; ++round) {
    {
      const P3 d = mul1(inv1(z), proj_set(*c.a, c.ac, omega(z, v, -c.s)));
      const Log1 l = log1(d.x, d.y, d.t);
      if (l.at_origin) {
        v[0] = v[1] = v[2] = 0.0;
      } else {
        v[0] = -l.cr / c.s;
        v[1] = -l.ci / c.s;
        v[2] = clamp_th(-l.theta / c.s);
      }
    }
    if (hinge_dist(*c.b, c.bc, omega(z, v, 1.0 - c.s)) == 0.0)
      return hinge_dist(*c.a, c.ac, omega(z, v, -c.s)) == 0.0;
    {
      const P3 d = mul1(inv1(z), proj_set(*c.b, c.bc, omega(z, v, 1.0 - c.s)));
      const Log1 l = log1(d.x, d.y, d.t);
      if (l.at_origin) {
        v[0] = v[1] = v[2] = 0.0;
      } else {
        v[0] = l.cr / (1.0 - c.s);
        v[1] = l.ci / (1.0 - c.s);
        v[2] = clamp_th(l.theta / (1.0 - c.s));
      }
    }
    if (hinge_dist(*c.a, c.ac, omega(z, v, -c.s)) == 0.0)
      return hinge_dist(*c.b, c.bc, omega(z, v, 1.0 - c.s)) == 0.0;
  }
  return false;
}

// Levenberg-Marquardt descent of the two hinge residuals from one start;
// returns as soon as both vanish.  chi_cap keeps runaway trial steps from
// leaving the annulus where witnesses can live.
bool lm_member(const MemberCtx& c, const P3& z, double v[3], double chi_cap) {
  auto clamp_v = [&](double w[3]) {
    if (w[2] > kTwoPi) w[2] = kTwoPi;
    if (w[2] < -kTwoPi) w[2] = -kTwoPi;
    const double m = std::sqrt(w[0] * w[0] + w[1] * w[1]);
    if (m > chi_cap) {
      w[0] *= chi_cap / m;
      w[1] *= chi_cap / m;
    }
  };
  auto eval = [&](const double w[3], double out[2]) {
    out[0] = hinge_dist(*c.a, c.ac, omega(z, w, -c.s));
    out[1] = hinge_dist(*c.b, c.bc, omega(z, w, 1.0 - c.s));
    return out[0] * out[0] + out[1] * out[1];
  };
  clamp_v(v);
  double F[2];
  double G = eval(v, F);
  if (G == 0.0) return true;
  double lambda = 1e-4;
  for (int it = 0; it < 35; ++it) {
    double J[2][3];
    for (int k = 0; k < 3; ++k) {
      const double h = k < 2 ? 1e-6 * (1.0 + chi_cap) : 1e-6;
      double vp[3] = {v[0], v[1], v[2]};
      vp[k] += h;
      double Fp[2];
      eval(vp, Fp);
      J[0][k] = (Fp[0] - F[0]) / h;
      J[1][k] = (Fp[1] - F[1]) / h;
    }
    double H[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
    double g[3] = {0, 0, 0};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j)
        for (int r = 0; r < 2; ++r) H[i][j] += J[r][i] * J[r][j];
      for (int r = 0; r < 2; ++r) g[i] += J[r][i] * F[r];
    }
    const double tr = (H[0][0] + H[1][1] + H[2][2]) / 3.0 + 1e-300;
    bool accepted = false;
    double step = 0.0;
    for (int inner = 0; inner < 8 && !accepted; ++inner) {
      double M[3][3];
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) M[i][j] = H[i][j] + (i == j ? lambda * tr : 0.0);
      const double det = M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) -
                         M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
                         M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
      if (std::abs(det) < 1e-300) {
        lambda *= 10.0;
        continue;
      }
      const double r0 = -g[0], r1 = -g[1], r2 = -g[2];
      double vt[3];
      vt[0] = v[0] + (r0 * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) -
                      M[0][1] * (r1 * M[2][2] - M[1][2] * r2) +
                      M[0][2] * (r1 * M[2][1] - M[1][1] * r2)) / det;
      vt[1] = v[1] + (M[0][0] * (r1 * M[2][2] - M[1][2] * r2) -
                      r0 * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
                      M[0][2] * (M[1][0] * r2 - r1 * M[2][0])) / det;
      vt[2] = v[2] + (M[0][0] * (M[1][1] * r2 - r1 * M[2][1]) -
                      M[0][1] * (M[1][0] * r2 - r1 * M[2][0]) +
                      r0 * (M[1][0] * M[2][1] - M[1][1] * M[2][0])) / det;
      clamp_v(vt);
      double Ft[2];
      const double Gt = eval(vt, Ft);
      if (Gt < G) {
        step = std::max({std::abs(vt[0] - v[0]), std::abs(vt[1] - v[1]),
                         std::abs(vt[2] - v[2])});
        v[0] = vt[0];
        v[1] = vt[1];
        v[2] = vt[2];
        G = Gt;
        F[0] = Ft[0];
        F[1] = Ft[1];
        lambda = std::max(lambda * 0.35, 1e-12);
        accepted = true;
      } else {
        lambda *= 10.0;
        if (lambda > 1e12) break;
      }
    }
    if (G == 0.0) return true;
    if (!accepted) break;
    if (step < 1e-12 * (1.0 + chi_cap)) break;
  }
  return false;
}

bool member_impl(const MemberCtx& c, const P3& z) {
  // Triangle-inequality prefilter: any member lies in a cc annulus around
  // each center since d(x, z) = s d(x, y) on the connecting geodesic.
  const double eps = 1e-9 * (1.0 + c.dist_ab);
  const double span = c.dist_ab + c.ra_outer + c.rb_outer;
  const double core = c.dist_ab - c.ra_outer - c.rb_outer;
  const double dza = dist1(c.ac, z);
  if (dza > c.ra_outer + c.s * span + eps) return false;
  if (dza < c.s * core - c.ra_outer - eps) return false;
  const double dzb = dist1(c.bc, z);
  if (dzb > c.rb_outer + (1.0 - c.s) * span + eps) return false;
  if (dzb < (1.0 - c.s) * core - c.rb_outer - eps) return false;

  const double chi_cap = (dza + 2.0 * c.ra_outer + 0.1 * (1.0 + dza)) / c.s;

  // Candidate geodesics: through A's center, through B's center, then a
  // ring of near-vertical and half-turn directions at the radius where the
  // A hinge can vanish (these matter for vertically stacked pairs, whose
  // witnesses cluster near |theta| = 2 pi).
  double cand[18][3];
  int nc = 0;
  {
    const P3 d = mul1(inv1(z), c.ac);
    const Log1 l = log1(d.x, d.y, d.t);
    if (!l.at_origin) {
      cand[nc][0] = -l.cr / c.s;
      cand[nc][1] = -l.ci / c.s;
      cand[nc][2] = -l.theta / c.s;
      ++nc;
    }
  }
  {
    const P3 d = mul1(inv1(z), c.bc);
    const Log1 l = log1(d.x, d.y, d.t);
    if (!l.at_origin) {
      cand[nc][0] = l.cr / (1.0 - c.s);
      cand[nc][1] = l.ci / (1.0 - c.s);
      cand[nc][2] = l.theta / (1.0 - c.s);
      ++nc;
    }
  }
  const double amp = dza / c.s;
  for (double th : {0.98 * kTwoPi, -0.98 * kTwoPi, kPi, -kPi}) {
    for (int j = 0; j < 4; ++j) {
      const double phi = 0.5 * kPi * j;
      cand[nc][0] = amp * std::cos(phi);
      cand[nc][1] = amp * std::sin(phi);
      cand[nc][2] = th;
      ++nc;
    }
  }
  for (int i = 0; i < nc; ++i) {
    if (lm_member(c, z, cand[i], chi_cap)) return true;
    if (snap_member(c, z, cand[i])) return true;
  }
  return false;
}

} // namespace

bool zset_member(const SetSpec& a, const SetSpec& b, double s, const HPoint& z) {
  if (z.n() != 1) throw std::invalid_argument("zset_member: n = 1 only");
  const MemberCtx c = make_ctx(a, b, s);
  return member_impl(c, to_p3(z));
}

ZsetExactEstimate zset_volume_exact(const SetSpec& a, const SetSpec& b, double s,
                                    std::size_t samples, const Rand& r) {
  if (samples < 1000)
    throw std::invalid_argument("zset_volume_exact: need at least 1000 samples");
  const MemberCtx c = make_ctx(a, b, s);

  const std::size_t presample = std::min<std::size_t>(4000, samples);
  const std::vector<HPoint> mids = zset_midpoints(a, b, s, presample, r.sub("exact-box"));
  double lo[3], hi[3];
  for (int k = 0; k < 3; ++k) {
    lo[k] = std::numeric_limits<double>::infinity();
    hi[k] = -std::numeric_limits<double>::infinity();
  }
  for (const HPoint& p : mids) {
    const P3 q = to_p3(p);
    for (int k = 0; k < 3; ++k) {
      lo[k] = std::min(lo[k], comp(q, k));
      hi[k] = std::max(hi[k], comp(q, k));
    }
  }
  for (int k = 0; k < 3; ++k) {
    const double pad = 0.3 * std::max(hi[k] - lo[k], 1e-6) + 1e-9;
    lo[k] -= pad;
    hi[k] += pad;
  }

  ZsetExactEstimate est;
  std::vector<std::uint8_t> flags(samples);
  for (int round = 0; round < 4; ++round) {
    const Rand rz = r.sub("exact-mc").sub(static_cast<std::uint64_t>(round + 1));
    std::fill(flags.begin(), flags.end(), 0);
    parallel_for(static_cast<std::int64_t>(samples), [&](std::int64_t i) {
      const std::uint64_t u = static_cast<std::uint64_t>(i);
      P3 z;
      z.x = rz.uniform(lo[0], hi[0], u, 1);
      z.y = rz.uniform(lo[1], hi[1], u, 2);
      z.t = rz.uniform(lo[2], hi[2], u, 3);
      if (!member_impl(c, z)) return;
      std::uint8_t f = 1;
      for (int k = 0; k < 3; ++k) {
        const double rel =
            std::min(comp(z, k) - lo[k], hi[k] - comp(z, k)) / (hi[k] - lo[k]);
        if (rel < 0.02) f = 2;
      }
      flags[u] = f;
    });
    std::size_t hits = 0, edge = 0;
    for (std::uint8_t f : flags) {
      if (f) ++hits;
      if (f == 2) ++edge;
    }
    double box = 1.0;
    for (int k = 0; k < 3; ++k) box *= hi[k] - lo[k];
    const double p = static_cast<double>(hits) / static_cast<double>(samples);
    est.volume = box * p;
    est.se = box * std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
    est.box_volume = box;
    est.hits = hits;
    est.grow_rounds = round;
    if (edge == 0) break;
    for (int k = 0; k < 3; ++k) {
      const double mid = 0.5 * (lo[k] + hi[k]);
      const double half = 0.5 * (hi[k] - lo[k]) * 1.35;
      lo[k] = mid - half;
      hi[k] = mid + half;
    }
  }
  return est;
}

} // namespace heis
