#include "heis/cclog.hpp"

#include <cmath>
#include <stdexcept>

#include "heis/stable.hpp"

namespace heis {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;
constexpr double kTwoPi = 2.0 * kPi;

// Above this ratio t/|zeta|^2 the point is treated as an axis point:
// nu(2pi - 1e-7) ~ 4pi / 1e-14.  Chosen so chi recovery keeps ~1e-9
// accuracy right up to the cut, see cc_log.
const double kAxisRatio = nu(kTwoPi - 1e-7);

double max_norm_diff(const HPoint& a, const HPoint& b) {
  double m = std::abs(a.t - b.t);
  for (std::size_t k = 0; k < a.zeta.size(); ++k)
    m = std::max(m, std::abs(a.zeta[k] - b.zeta[k]));
  return m;
}

} // namespace

LogResult cc_log(const HPoint& g, const GroupContext& ctx) {
  const int n = g.n();
  if (n != ctx.n) throw std::invalid_argument("cc_log: point dimension disagrees with context");

  LogResult res;
  res.param = GeodesicParam(std::vector<double>(2 * n, 0.0), 0.0);

  const double q = g.zeta_norm2();
  if (q == 0.0 && g.t == 0.0) {
    res.at_origin = true;
    return res;
  }

  const bool axis = (q == 0.0) || (std::abs(g.t) > kAxisRatio * q);
  if (axis) {
    // chi representative along the first axis, |chi| = sqrt(pi |t|).
    res.on_center = true;
    res.unique = false;
    res.param.theta = (g.t >= 0.0 ? kTwoPi : -kTwoPi);
    res.param.chi[0] = std::sqrt(kPi * std::abs(g.t));
    res.residual = g.zeta_norm();  // the dropped horizontal part
    return res;
  }

  double theta = 0.0;
  if (g.t != 0.0) {
    int iters = 0;
    theta = nu_inverse(std::abs(g.t) / q, &iters);
    if (g.t < 0.0) theta = -theta;
    res.iterations = iters;
  }
  res.param.theta = theta;

  // chi = zeta * theta / (i (e^{-i theta} - 1)); the divisor equals
  // sin(theta) - 2 i sin^2(theta/2), written to avoid cancellation.
  // At theta = 0 the quotient degenerates to zeta itself.
  if (theta == 0.0) {
    res.param.chi = g.zeta;
  } else {
    const double dr = sinc(theta);        //  Re / theta
    const double di = -haversinc(theta);  //  Im / theta
    const double d2 = dr * dr + di * di;
    for (int j = 0; j < n; ++j) {
      const double zr = g.zeta[2 * j], zi = g.zeta[2 * j + 1];
      res.param.chi[2 * j] = (zr * dr + zi * di) / d2;
      res.param.chi[2 * j + 1] = (zi * dr - zr * di) / d2;
    }
  }
  // theta is a double, so t_hat = |chi|^2 nu(theta) can miss t by
  // |t| ulp(theta) nu'/nu (worst near the pole, where nu'/nu ~ 1/(2pi - theta)).
  // Rescaling |chi| absorbs that quantization into a relative change of chi of
  // the same tiny size, making the t component exact while moving the
  // reproduced zeta by a negligible amount.
  if (theta != 0.0) {
    const double t_hat =
        2.0 * res.param.chi_norm2() * x_minus_sin(std::abs(theta)) / (theta * theta);
    if (t_hat > 0.0) {
      const double lam = std::sqrt(std::abs(g.t) / t_hat);
      if (lam > 0.5 && lam < 2.0)
        for (double& c : res.param.chi) c *= lam;
    }
  }

  res.residual = max_norm_diff(gamma(res.param, 1.0), g);
  return res;
}

LogResult cc_log(const HPoint& x, const HPoint& y, const GroupContext& ctx) {
  return cc_log(mul(inv(x), y), ctx);
}

double cc_dist0(const HPoint& g) {
  const double q = g.zeta_norm2();
  if (q == 0.0) return std::sqrt(kPi * std::abs(g.t));
  if (g.t == 0.0) return std::sqrt(q);
  return cc_log(g, GroupContext(g.n())).param.chi_norm();
}

double cc_dist(const HPoint& x, const HPoint& y) { return cc_dist0(mul(inv(x), y)); }

double theta_angle(const HPoint& x, const HPoint& y) {
  const HPoint g = mul(inv(x), y);
  const double q = g.zeta_norm2();
  if (q == 0.0 && g.t == 0.0) return 0.0;
  const LogResult lr = cc_log(g, GroupContext(g.n()));
  return std::abs(lr.param.theta);
}

HPoint geo_point(const HPoint& x, const HPoint& y, double s) {
  const HPoint g = mul(inv(x), y);
  const LogResult lr = cc_log(g, GroupContext(g.n()));
  return mul(x, gamma(lr.param, s));
}

HPoint midpoint(const HPoint& x, const HPoint& y) { return geo_point(x, y, 0.5); }

HPoint geo_point_center_rep(const HPoint& x, const HPoint& y, double s, double phi) {
  const HPoint g = mul(inv(x), y);
  LogResult lr = cc_log(g, GroupContext(g.n()));
  if (lr.on_center) {
    const double m = lr.param.chi_norm();
    std::fill(lr.param.chi.begin(), lr.param.chi.end(), 0.0);
    lr.param.chi[0] = m * std::cos(phi);
    lr.param.chi[1] = m * std::sin(phi);
  }
  return mul(x, gamma(lr.param, s));
}

PairPoint pair_point1(double ax, double ay, double at, double bx, double by, double bt,
                      double s, double phi) {
  PairPoint out;
  // delta = a^{-1} b in coordinates.
  const double dx = bx - ax;
  const double dy = by - ay;
  const double dt = bt - at + 2.0 * (ax * by - ay * bx);
  const double q = dx * dx + dy * dy;

  if (q == 0.0 && dt == 0.0) {
    out.at_origin = true;
    out.zx = ax;
    out.zy = ay;
    out.zt = at;
    return out;
  }

  double theta, cr, ci;
  if (q == 0.0 || std::abs(dt) > kAxisRatio * q) {
    out.on_center = true;
    theta = (dt >= 0.0 ? kTwoPi : -kTwoPi);
    const double m = std::sqrt(kPi * std::abs(dt));
    cr = m * std::cos(phi);
    ci = m * std::sin(phi);
  } else {
    theta = dt == 0.0 ? 0.0 : nu_inverse(std::abs(dt) / q);
    if (dt < 0.0) theta = -theta;
    if (theta == 0.0) {
      cr = dx;
      ci = dy;
    } else {
      const double dr = sinc(theta);
      const double di = -haversinc(theta);
      const double d2 = dr * dr + di * di;
      cr = (dx * dr + dy * di) / d2;
      ci = (dy * dr - dx * di) / d2;
      const double t_hat =
          2.0 * (cr * cr + ci * ci) * x_minus_sin(std::abs(theta)) / (theta * theta);
      if (t_hat > 0.0) {
        const double lam = std::sqrt(std::abs(dt) / t_hat);
        if (lam > 0.5 && lam < 2.0) {
          cr *= lam;
          ci *= lam;
        }
      }
    }
  }
  out.theta = std::abs(theta);

  // gamma(chi, theta)(s), then left-translate by a.
  double gx, gy, gt;
  if (theta == 0.0) {
    gx = s * cr;
    gy = s * ci;
    gt = 0.0;
  } else {
    const double ur = s * sinc(theta * s);
    const double ui = -s * haversinc(theta * s);
    gx = ur * cr - ui * ci;
    gy = ur * ci + ui * cr;
    gt = 2.0 * (cr * cr + ci * ci) * x_minus_sin(theta * s) / (theta * theta);
  }
  out.zx = ax + gx;
  out.zy = ay + gy;
  out.zt = at + gt + 2.0 * (ay * gx - ax * gy);
  return out;
}

} // namespace heis
