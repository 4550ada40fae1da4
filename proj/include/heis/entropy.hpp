#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "heis/cloud.hpp"
#include "heis/report.hpp"
#include "heis/voxel.hpp"

namespace heis {

/// Internal-energy integrands U for Ent_U(mu) = int U(rho) dL.  Admissibility
/// (U(0) = 0, and t -> t^(2n+1) U(t^(-(2n+1))) nonincreasing and convex) holds
/// for every catalog entry within the validated parameter ranges; the
/// constructors reject parameters outside them.  All entries are convex, so
/// kernel-smoothed density estimates can only lower the estimated entropy.
struct UFunc {
  enum class Kind { Renyi, Shannon, Kinetic, Tsallis };

  Kind kind = Kind::Renyi;
  double gamma = 0.0;
  int n = 1;

  /// -t^gamma with gamma in [1 - 1/(2n+1), 1); the dimensional exponent
  /// gamma = 1 - 1/(2n+1) is the sharp Renyi case.
  static UFunc renyi(int n);
  static UFunc renyi_gamma(int n, double gamma);
  /// t log t.
  static UFunc shannon(int n);
  /// t^gamma with gamma >= 1.
  static UFunc kinetic(int n, double gamma);
  /// (t^gamma - t)/(gamma - 1), gamma > 0, gamma != 1, gamma >= 1 - 1/(2n+1).
  static UFunc tsallis(int n, double gamma);

  double operator()(double t) const;
  std::string name() const;

  /// Cell-sum entropy of a voxel density.
  double entropy(const VoxelGrid& rho) const;
  /// Closed form for the uniform density kinds (volume V):
  ///   Renyi -V^(1-gamma), Shannon -log V, Kinetic V^(1-gamma),
  ///   Tsallis (V^(1-gamma) - 1)/(gamma - 1).
  /// Throws for non-uniform specs.
  double entropy(const DensitySpec& spec) const;
};

/// Additive slack of the Shannon corollary: w(s) = -2 log((1-s)^(1-s) s^s),
/// positive on (0,1), w(1/2) = log 4.
double shannon_shift(double s);

/// Interpolation-entropy inequality: samples mu_0, mu_1 from the specs,
/// transports, interpolates at s, and compares the voxel entropy of mu_s
/// against two upper bounds assembled from the plan:
///   sharp:   per-pair tau-tilde weights at the pair angle theta,
///   uniform: flat weights (1-s)^2, s^2 in the arguments (worst angle 0).
/// tolerance = 3 standard errors of the margin from an 8-way sample split.
/// The report carries the sharp bound; the uniform bound and its own margin
/// and tolerance ride in extra.  pass needs both margins.
VerifyReport check_entropy_inequality(const DensitySpec& spec0, const DensitySpec& spec1,
                                      double s, const UFunc& u, std::size_t sample_size,
                                      std::uint64_t seed, int grid_res = 24);

/// Interpolant density bound (contraction form): for each occupied cell of
/// the interpolant histogram, the density must stay below the largest
/// transported bound among the pairs landing in that cell, both with the
/// sharp tau factor and with the crude (1-s)^-(2n+3) factor.  lhs is the
/// fraction of occupied cells violating beyond 3 Poisson standard errors
/// (target 0).  The target measure may be singular (e.g. one point).
VerifyReport check_density_bound(const DensitySpec& spec0, const Cloud& target,
                                 double s, std::size_t sample_size, std::uint64_t seed,
                                 int grid_res = 24);
VerifyReport check_density_bound(const DensitySpec& spec0, const DensitySpec& spec1,
                                 double s, std::size_t sample_size, std::uint64_t seed,
                                 int grid_res = 24);

/// Pointwise Jacobian inequality in density form: per transported pair,
///   rho_s(mid)^(-1/(2n+1)) >= tau_(1-s)(theta) rho_0(x)^(-1/(2n+1))
///                           + tau_s(theta) rho_1(y)^(-1/(2n+1)),
/// with rho_s voxel-estimated and the endpoint densities analytic.  lhs is
/// the mass-weighted fraction of pairs violating beyond 3 delta-method
/// standard errors (target 0).
VerifyReport check_jacobian_density(const DensitySpec& spec0, const DensitySpec& spec1,
                                    double s, std::size_t sample_size, std::uint64_t seed,
                                    int grid_res = 24);

} // namespace heis
