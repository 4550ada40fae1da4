#include "heis/riemapprox.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

#include "heis/cclog.hpp"
#include "heis/stable.hpp"

namespace heis {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;
constexpr double kTwoPi = 2.0 * kPi;

const double kAxisRatio = nu(kTwoPi - 1e-7);

} // namespace

double EpsParam::chi_norm2() const {
  double s = 0.0;
  for (double v : chi) s += v * v;
  return s;
}

HPoint gamma_eps(const EpsParam& p, double s) {
  HPoint out = gamma(p.horizontal(), s);
  out.t += 0.25 * p.eps * p.eps * p.theta * s;
  return out;
}

void jac_gamma_eps_parts(const EpsParam& p, double s, double* a_out, double* b_out) {
  const int n = p.n();
  const double th = p.theta;
  const double q = p.chi_norm2();
  const double e2 = p.eps * p.eps;
  if (th == 0.0) {
    *a_out = std::pow(s, 2 * n + 3) * q / 3.0;
    *b_out = std::pow(s, 2 * n + 1) * e2 / 4.0;
    return;
  }
  const double half = 0.5 * th * s;
  const double ratio = 0.5 * s * sinc(half);  // sin(theta s/2)/theta
  *a_out = std::ldexp(s * q, 2 * n + 2) * std::pow(ratio, 2 * n - 1) *
           sin_minus_xcos(half) / (th * th * th);
  *b_out = std::ldexp(0.25 * e2 * s, 2 * n) * std::pow(ratio, 2 * n);
}

double jac_gamma_eps(const EpsParam& p, double s) {
  double a, b;
  jac_gamma_eps_parts(p, s, &a, &b);
  return a + b;
}

double v_eps(const EpsParam& p, double s) {
  if (!(s > 0.0 && s <= 1.0)) throw std::invalid_argument("v_eps: s must lie in (0, 1]");
  const double js = jac_gamma_eps(p, s);
  const double j1 = jac_gamma_eps(p, 1.0);
  if (j1 == 0.0) throw std::domain_error("v_eps: degenerate unit-time Jacobian");
  return js / (std::pow(s, 2 * p.n() + 1) * j1);
}

double eps_length(const EpsParam& p) {
  const double w = 0.25 * p.eps * p.theta;
  return std::sqrt(p.chi_norm2() + w * w);
}

EpsLogResult eps_log(const HPoint& g, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps_log: eps must be positive");
  const int n = g.n();
  EpsLogResult res;
  res.param = EpsParam(std::vector<double>(2 * n, 0.0), 0.0, eps);

  const double q = g.zeta_norm2();
  const double at = std::abs(g.t);
  if (q == 0.0 && g.t == 0.0) {
    res.at_origin = true;
    return res;
  }

  const double e2 = eps * eps;
  const bool axis = (q == 0.0) || (at > kAxisRatio * q);
  if (axis) {
    res.on_center = true;
    if (at <= 0.5 * kPi * e2) {
      // Reached by running straight up the vertical line.
      res.param.theta = 4.0 * g.t / e2;
      res.residual = g.zeta_norm();
      res.non_minimizing = std::abs(res.param.theta) > kTwoPi + 1e-12;
      return res;
    }
    res.unique = false;
    res.param.theta = (g.t >= 0.0 ? kTwoPi : -kTwoPi);
    res.param.chi[0] = std::sqrt(kPi * (at - 0.5 * kPi * e2));
    res.residual = g.zeta_norm();
    return res;
  }

  // (eps^2/4) theta + q nu(theta) = t, strictly increasing through 0:
  // solve for |t| on (0, 2pi), flip the sign afterwards.
  double theta = 0.0;
  if (g.t != 0.0) {
    double lo = 0.0, hi = kTwoPi - 1e-12;
    auto F = [&](double th) { return 0.25 * e2 * th + q * nu(th) - at; };
    // Newton from the sub-Riemannian guess, bisection-safeguarded.
    double th = nu_inverse(at / q);
    th = std::min(th, hi);
    int it = 0;
    for (; it < 100; ++it) {
      const double f = F(th);
      if (f > 0.0) hi = th; else lo = th;
      const double d = 0.25 * e2 + q * nu_prime(th);
      double tn = th - f / d;
      if (!(tn > lo) || !(tn < hi)) tn = 0.5 * (lo + hi);
      const double delta = std::abs(tn - th);
      th = tn;
      if (delta < 1e-13 * (1.0 + th)) break;
    }
    res.iterations = it + 1;
    theta = (g.t >= 0.0 ? th : -th);
  }
  res.param.theta = theta;

  if (theta == 0.0) {
    res.param.chi = g.zeta;
  } else {
    const double dr = sinc(theta);
    const double di = -haversinc(theta);
    const double d2 = dr * dr + di * di;
    for (int j = 0; j < n; ++j) {
      const double zr = g.zeta[2 * j], zi = g.zeta[2 * j + 1];
      res.param.chi[2 * j] = (zr * dr + zi * di) / d2;
      res.param.chi[2 * j + 1] = (zi * dr - zr * di) / d2;
    }
  }

  const HPoint back = gamma_eps(res.param, 1.0);
  double m = std::abs(back.t - g.t);
  for (std::size_t k = 0; k < g.zeta.size(); ++k)
    m = std::max(m, std::abs(back.zeta[k] - g.zeta[k]));
  res.residual = m;
  return res;
}

ConvergenceReport fit_order(const std::vector<double>& eps, const std::vector<double>& errors,
                            double floor) {
  ConvergenceReport rep;
  rep.eps = eps;
  rep.errors = errors;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < eps.size() && i < errors.size(); ++i) {
    if (errors[i] > floor && eps[i] > 0.0) {
      lx.push_back(std::log(eps[i]));
      ly.push_back(std::log(errors[i]));
    }
  }
  if (lx.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(lx.size());
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sx += lx[i]; sy += ly[i]; sxx += lx[i] * lx[i]; sxy += lx[i] * ly[i];
    }
    const double denom = m * sxx - sx * sx;
    if (denom != 0.0) {
      rep.fitted_order = (m * sxy - sx * sy) / denom;
      rep.order_valid = true;
    }
  }
  return rep;
}

std::string ConvergenceReport::to_json() const {
  nlohmann::ordered_json j;
  j["eps"] = eps;
  j["error"] = errors;
  j["fitted_order"] = fitted_order;
  j["order_valid"] = order_valid;
  return j.dump(2);
}

SandwichReport sandwich_check(const std::vector<std::pair<HPoint, HPoint>>& pairs,
                              const std::vector<double>& eps_list, double tol) {
  SandwichReport rep;
  rep.eps = eps_list;
  rep.max_gap_per_eps.assign(eps_list.size(), 0.0);
  rep.max_overshoot = -1e300;
  double cmax = 0.0;
  for (const auto& [x, y] : pairs) {
    const HPoint g = mul(inv(x), y);
    const double d = cc_dist0(g);
    for (std::size_t k = 0; k < eps_list.size(); ++k) {
      const double eps = eps_list[k];
      const double proxy = eps_length(eps_log(g, eps).param);
      const double gap = d - proxy;
      rep.max_overshoot = std::max(rep.max_overshoot, -gap);
      rep.max_gap_per_eps[k] = std::max(rep.max_gap_per_eps[k], gap);
      cmax = std::max(cmax, gap / (kPi * eps));
    }
  }
  rep.c_estimate = cmax;
  rep.upper_bound_ok = rep.max_overshoot <= tol;
  return rep;
}

std::string SandwichReport::to_json() const {
  nlohmann::ordered_json j;
  j["eps"] = eps;
  j["max_gap_per_eps"] = max_gap_per_eps;
  j["max_overshoot"] = max_overshoot;
  j["c_estimate"] = c_estimate;
  j["upper_bound_ok"] = upper_bound_ok;
  return j.dump(2);
}

ConvergenceReport bridge_limit_check(const GeodesicParam& p, double s,
                                     const std::vector<double>& eps_list) {
  const double limit = jac_gamma(p, s) / (std::pow(s, 2 * p.n() + 1) * jac_gamma(p, 1.0));
  std::vector<double> errs;
  errs.reserve(eps_list.size());
  for (double eps : eps_list) {
    const EpsParam pe(p.chi, p.theta, eps);
    errs.push_back(std::abs(v_eps(pe, s) - limit));
  }
  return fit_order(eps_list, errs);
}

} // namespace heis
