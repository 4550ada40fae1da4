#pragma once

#include <complex>
#include <vector>

#include "heis/hpoint.hpp"

namespace heis {

/// Initial data of a unit-time geodesic from the origin: a horizontal
/// complex covector chi in C^n and a vertical frequency theta.  Curves with
/// |theta| <= 2pi are length minimizing; theta = 0 gives the straight
/// horizontal segment, |theta| = 2pi ends on the vertical axis.
struct GeodesicParam {
  std::vector<double> chi;  // interleaved like HPoint::zeta, size 2n
  double theta = 0.0;

  GeodesicParam() : chi(2, 0.0) {}
  GeodesicParam(std::vector<double> chi_, double theta_)
      : chi(std::move(chi_)), theta(theta_) {}
  GeodesicParam(std::complex<double> chi1, double theta_)
      : chi{chi1.real(), chi1.imag()}, theta(theta_) {}

  int n() const { return static_cast<int>(chi.size() / 2); }
  std::complex<double> c(int j) const { return {chi[2 * j], chi[2 * j + 1]}; }
  double chi_norm2() const;
  double chi_norm() const;
};

/// Position at time s of the geodesic with data p:
///   zeta(s) = i (e^{-i theta s} - 1)/theta * chi,
///   t(s)    = 2 |chi|^2 (theta s - sin(theta s)) / theta^2,
/// with the theta -> 0 limit (s chi, 0).  Both coordinates are evaluated
/// through cancellation-free forms, so small |theta s| needs no special
/// casing by callers.
HPoint gamma(const GeodesicParam& p, double s);

/// Jacobian determinant of (chi, theta) -> gamma_s(chi, theta) at p:
///   2^(2n+2) s |chi|^2 (sin(theta s/2)/theta)^(2n-1)
///     * (sin(theta s/2) - (theta s/2) cos(theta s/2)) / theta^3
/// for theta != 0, and s^(2n+3) |chi|^2 / 3 at theta = 0.  Positive for
/// 0 < |theta| s < 2pi; |theta| = 2pi is outside the domain (the endpoint
/// map degenerates on the vertical axis) and is rejected.
double jac_gamma(const GeodesicParam& p, double s);

} // namespace heis
