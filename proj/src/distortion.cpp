#include "heis/distortion.hpp"

#include <cmath>
#include <stdexcept>

#include "heis/cclog.hpp"
#include "heis/stable.hpp"

namespace heis {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

bool at_top(double theta) { return std::abs(theta - kTwoPi) < 1e-12; }

void check_args(double s, double theta, int n) {
  if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("distortion: s must lie in [0, 1]");
  if (!(theta >= 0.0 && theta <= kTwoPi + 1e-12))
    throw std::invalid_argument("distortion: theta must lie in [0, 2pi]");
  if (n < 1) throw std::invalid_argument("distortion: n must be >= 1");
}

// (sin(theta s/2)/sin(theta/2))  and  (f(theta s/2)/f(theta/2)) with
// f(x) = sin x - x cos x; the theta -> 0 limits are s and s^3.
double sin_ratio(double s, double theta) {
  if (theta < 1e-8) return s;  // sinc-accurate limit, avoids 0/0
  return std::sin(0.5 * theta * s) / std::sin(0.5 * theta);
}

double f_ratio(double s, double theta) {
  if (theta < 1e-8) return s * s * s;
  return sin_minus_xcos(0.5 * theta * s) / sin_minus_xcos(0.5 * theta);
}

} // namespace

DistortionValue tau(double s, double theta, int n) {
  check_args(s, theta, n);
  if (at_top(theta)) return (s == 0.0) ? DistortionValue::fin(0.0) : DistortionValue::inf();
  const double N = 2.0 * n + 1.0;
  if (theta == 0.0) return DistortionValue::fin(std::pow(s, (2.0 * n + 3.0) / N));
  const double val = std::pow(s, 1.0 / N) *
                     std::pow(sin_ratio(s, theta), (2.0 * n - 1.0) / N) *
                     std::pow(f_ratio(s, theta), 1.0 / N);
  return DistortionValue::fin(val);
}

DistortionValue tau_tilde(double s, double theta, int n) {
  check_args(s, theta, n);
  if (s == 0.0) {
    // tau/s -> s^(2/(2n+1)) type limit: 0 for theta < 2pi.
    return at_top(theta) ? DistortionValue::inf() : DistortionValue::fin(0.0);
  }
  DistortionValue tv = tau(s, theta, n);
  if (!tv.finite) return tv;
  return DistortionValue::fin(tv.value / s);
}

DistortionValue v_heis_theta(double s, double theta, int n) {
  check_args(s, theta, n);
  if (!(s > 0.0)) throw std::invalid_argument("v_heis: s must be positive");
  if (at_top(theta)) return DistortionValue::inf();
  if (theta == 0.0) return DistortionValue::fin(s);
  const double val = std::pow(s, -(2.0 * n + 1.0)) *
                     std::pow(sin_ratio(s, theta), 2.0 * n - 1.0) * f_ratio(s, theta);
  return DistortionValue::fin(val);
}

DistortionValue v_heis(double s, const HPoint& x, const HPoint& y) {
  const HPoint g = mul(inv(x), y);
  if (g.zeta_norm2() == 0.0 && g.t == 0.0)
    throw std::invalid_argument("v_heis: x = y is outside the domain");
  return v_heis_theta(s, theta_angle(x, y), x.n());
}

DistortionValue v0(double s, const HPoint& x, const HPoint& y) {
  const HPoint g = mul(inv(x), y);
  if (g.zeta_norm2() == 0.0 && g.t == 0.0) return DistortionValue::fin(s * s);
  return v_heis(s, x, y).scaled_by(s);
}

double tau_hat(double s, double theta, int n, bool moving) {
  if (!moving) return s;
  const DistortionValue tv = tau(s, theta, n);
  if (!tv.finite) throw std::domain_error("tau_hat: infinite weight (theta = 2pi)");
  return tv.value;
}

double tau_tilde_hat(double s, double theta, int n, bool moving) {
  if (!moving) return 1.0;
  const DistortionValue tv = tau_tilde(s, theta, n);
  if (!tv.finite) throw std::domain_error("tau_tilde_hat: infinite weight (theta = 2pi)");
  return tv.value;
}

} // namespace heis
