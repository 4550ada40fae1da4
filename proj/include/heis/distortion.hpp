#pragma once

#include "heis/hpoint.hpp"

namespace heis {

/// Extended-real value on [0, +inf].  The coefficients below blow up on the
/// vertical axis (theta = 2pi); downstream set-level bounds multiply such
/// values by volumes with the convention inf * 0 = 0.
struct DistortionValue {
  double value = 0.0;
  bool finite = true;

  static DistortionValue fin(double v) { return {v, true}; }
  static DistortionValue inf() { return {0.0, false}; }

  // inf * 0 = 0; inf * positive = inf.
  DistortionValue scaled_by(double w) const {
    if (finite) return fin(value * w);
    return w == 0.0 ? fin(0.0) : inf();
  }
};

/// Weight tau_s^n(theta) controlling how s-intermediate points of geodesics
/// with vertical frequency theta concentrate volume:
///   theta = 0:           s^((2n+3)/(2n+1))
///   theta in (0, 2pi):   s^(1/(2n+1)) * (sin(theta s/2)/sin(theta/2))^((2n-1)/(2n+1))
///                        * ((sin(theta s/2) - (theta s/2) cos(theta s/2)) /
///                           (sin(theta/2)  - (theta/2)  cos(theta/2)))^(1/(2n+1))
///   theta = 2pi:         +inf
/// Strictly increasing in theta on [0, 2pi]; everywhere >= s^((2n+3)/(2n+1)).
DistortionValue tau(double s, double theta, int n);

/// tau_tilde = tau / s; its (2n+1)-th power equals v0 below.
DistortionValue tau_tilde(double s, double theta, int n);

/// Volume distortion at the s-point between distinct x and y:
///   v(s, x, y) = Jac(gamma_s)/ (s^(2n+2) Jac(gamma_1))  at cc_log(x^{-1} y),
/// +inf when x^{-1} y sits on the vertical axis.  x = y is rejected.
DistortionValue v_heis(double s, const HPoint& x, const HPoint& y);
DistortionValue v_heis_theta(double s, double theta, int n);

/// v0(s, x, y) = s * v(s, x, y) off the diagonal and s^2 on it; satisfies
/// v0 = tau_tilde^(2n+1) >= s^2 everywhere.
DistortionValue v0(double s, const HPoint& x, const HPoint& y);

/// Transport-adjusted weights: pairs that move use the geodesic weight,
/// static pairs keep the flat one.
double tau_hat(double s, double theta, int n, bool moving);        // static -> s
double tau_tilde_hat(double s, double theta, int n, bool moving);  // static -> 1

} // namespace heis
