#pragma once

#include <string>
#include <utility>
#include <vector>

#include "heis/geodesic.hpp"
#include "heis/hpoint.hpp"

namespace heis {

/// Geodesic data on the Riemannian relaxation with vertical frame scale eps:
/// the frame {X_j, Y_j, eps d_t} is declared orthonormal, and geodesics from
/// the origin form the family
///   zeta(s) = i (e^{-i theta s} - 1)/theta * chi,
///   t(s)    = (eps^2/4) theta s + 2 |chi|^2 (theta s - sin(theta s))/theta^2,
/// (theta = 0: the straight segment (s chi, 0)).  theta relates to the
/// vertical covector w via theta = 4 w / eps, so the Riemannian speed is
/// sqrt(|chi|^2 + (eps theta / 4)^2).
struct EpsParam {
  std::vector<double> chi;
  double theta = 0.0;
  double eps = 1.0;

  EpsParam() : chi(2, 0.0) {}
  EpsParam(std::vector<double> chi_, double theta_, double eps_)
      : chi(std::move(chi_)), theta(theta_), eps(eps_) {}

  int n() const { return static_cast<int>(chi.size() / 2); }
  double chi_norm2() const;
  GeodesicParam horizontal() const { return GeodesicParam(chi, theta); }
};

HPoint gamma_eps(const EpsParam& p, double s);

/// Jacobian determinant of the time-s map, a sum A + B where A is the
/// sub-Riemannian Jacobian at (chi, theta) and B = 2^(2n) (eps^2/4) s
/// (sin(theta s/2)/theta)^(2n) is the vertical-frame correction.
/// theta = 0 values: A = s^(2n+3)|chi|^2/3, B = s^(2n+1) eps^2/4.
double jac_gamma_eps(const EpsParam& p, double s);
void jac_gamma_eps_parts(const EpsParam& p, double s, double* a_out, double* b_out);

/// Volume distortion v_eps = Jac(s) / (s^(2n+1) Jac(1)); always >= s^2,
/// equal to 1 on pure vertical data (chi = 0) and at theta = 0, chi = 0.
double v_eps(const EpsParam& p, double s);

/// Riemannian length of the unit-time geodesic with data p.
double eps_length(const EpsParam& p);

/// Inversion of the unit-time endpoint map at fixed eps.  Off the vertical
/// axis theta solves (eps^2/4) theta + |zeta|^2 nu(theta) = t on (-2pi, 2pi)
/// (strictly increasing, bracketed Newton) and chi is recovered as in the
/// sub-Riemannian log.  Axis targets split: |t| <= pi eps^2 / 2 is reached
/// by the vertical line (chi = 0, theta = 4t/eps^2), larger |t| by the
/// theta = +-2pi family with |chi|^2 = pi(|t| - pi eps^2/2) (non-unique).
/// Solutions with |theta| > 2pi are flagged as potentially non-minimizing.
struct EpsLogResult {
  EpsParam param;
  bool on_center = false;
  bool at_origin = false;
  bool unique = true;
  bool non_minimizing = false;
  double residual = 0.0;
  int iterations = 0;
};

EpsLogResult eps_log(const HPoint& g, double eps);

/// Log-log least-squares convergence record for a quantity with errors
/// err(eps); fitted_order is the slope.  Entries with error below `floor`
/// are dropped from the fit; order_valid is false when fewer than two
/// usable points remain.
struct ConvergenceReport {
  std::vector<double> eps;
  std::vector<double> errors;
  double fitted_order = 0.0;
  bool order_valid = false;

  std::string to_json() const;
};

ConvergenceReport fit_order(const std::vector<double>& eps, const std::vector<double>& errors,
                            double floor = 1e-14);

/// Compares the candidate Riemannian length eps_length(eps_log(x^{-1} y, eps))
/// with the sub-Riemannian distance over pairs and eps values.  The candidate
/// must never exceed cc_dist + tol (it upper-bounds the Riemannian distance,
/// which the sub-Riemannian one dominates); the gap scaled by pi*eps yields
/// an empirical constant, reported but never asserted.
struct SandwichReport {
  std::vector<double> eps;
  std::vector<double> max_gap_per_eps;
  double max_overshoot = 0.0;  // max of candidate - cc_dist
  double c_estimate = 0.0;     // max gap / (pi eps)
  bool upper_bound_ok = false;

  std::string to_json() const;
};

SandwichReport sandwich_check(const std::vector<std::pair<HPoint, HPoint>>& pairs,
                              const std::vector<double>& eps_list, double tol = 1e-9);

/// Convergence of v_eps at fixed data (chi, theta, s) to the sub-Riemannian
/// volume distortion (1/s^(2n+1)) Jac(gamma_s)/Jac(gamma_1); second order
/// in eps.
ConvergenceReport bridge_limit_check(const GeodesicParam& p, double s,
                                     const std::vector<double>& eps_list);

} // namespace heis
