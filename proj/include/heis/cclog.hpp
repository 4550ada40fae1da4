#pragma once

#include "heis/geodesic.hpp"
#include "heis/hpoint.hpp"

namespace heis {

/// Result of inverting the unit-time geodesic map at a target point.
///
/// For g = (zeta, t) off the vertical axis the data (chi, theta) with
/// theta in (-2pi, 2pi) is unique: theta solves
///   (theta - sin theta)/(1 - cos theta) = t/|zeta|^2
/// (strictly increasing, so a bracketed Newton iteration converges fast)
/// and chi = zeta * theta / (i (e^{-i theta} - 1)).
///
/// On the axis (zeta = 0, t != 0) every chi with |chi| = sqrt(pi |t|) and
/// theta = sign(t) 2pi works; the returned representative points along the
/// first axis and `unique` is false.  At the identity chi = 0, theta = 0.
struct LogResult {
  GeodesicParam param;
  bool on_center = false;   // target on the vertical axis, away from 0
  bool at_origin = false;   // target is the identity
  bool unique = true;       // false exactly on the axis minus the origin
  double residual = 0.0;    // |gamma_1(param) - g| in max-norm, diagnostics
  int iterations = 0;       // Newton steps spent on the theta solve
};

/// Inverse of gamma(., 1) as described on LogResult.  Points are classified
/// as axis points when t/|zeta|^2 exceeds nu(2pi - 1e-7) ~ 1.3e15 (the
/// frequency solve would have to resolve theta closer to 2pi than the
/// recovery of chi stays well conditioned).
LogResult cc_log(const HPoint& g, const GroupContext& ctx = GroupContext(1));
LogResult cc_log(const HPoint& x, const HPoint& y, const GroupContext& ctx = GroupContext(1));

/// Carnot-Caratheodory distance d(x, y) = |chi| of cc_log(x^{-1} y).
/// Closed forms: d(0, (zeta, 0)) = |zeta| and d(0, (0, t)) = sqrt(pi |t|).
double cc_dist(const HPoint& x, const HPoint& y);
double cc_dist0(const HPoint& g);

/// |theta| of the connecting geodesic: 0 when x = y, 2pi when x^{-1} y sits
/// on the vertical axis, the unique |theta| in (0, 2pi) otherwise.
/// Symmetric in its arguments.
double theta_angle(const HPoint& x, const HPoint& y);

/// Point at parameter s of the minimizing geodesic from x to y,
/// x * gamma_s(cc_log(x^{-1} y)).  On the axis the first-axis representative
/// is used, which selects one geodesic of the family.
HPoint geo_point(const HPoint& x, const HPoint& y, double s);
HPoint midpoint(const HPoint& x, const HPoint& y);

/// All-axis variant used by set scans: the axis target admits a circle of
/// geodesics; returns the point at parameter s of the one whose chi points
/// along direction (cos phi, sin phi) in the first complex coordinate.
HPoint geo_point_center_rep(const HPoint& x, const HPoint& y, double s, double phi);

/// Bulk-scan fast path for n = 1, no heap traffic: landing point at
/// parameter s of the geodesic from a = (ax, ay, at) to b, and the |theta|
/// of the pair.  Matches geo_point / geo_point_center_rep(phi) and
/// theta_angle coordinate for coordinate; phi only matters on the axis.
struct PairPoint {
  double zx = 0.0, zy = 0.0, zt = 0.0;
  double theta = 0.0;
  bool on_center = false;
  bool at_origin = false;
};
PairPoint pair_point1(double ax, double ay, double at, double bx, double by, double bt,
                      double s, double phi = 0.0);

} // namespace heis
