#pragma once

#include <cstdint>
#include <vector>

#include "heis/report.hpp"
#include "heis/setspec.hpp"

namespace heis {

/// Weighted set inequality: vol(Z_s(A,B))^(1/(2n+1)) must dominate the
/// tau-weighted sum of the endpoint volume roots at the pair angle Theta.
/// The occupancy lhs is computed at voxel_res and at twice that resolution
/// and both must clear the bound (occupancy is lower-biased, so this is the
/// safe side).  Infinite tau against zero volume contributes 0.
VerifyReport check_bm_weighted(const SetSpec& a, const SetSpec& b, double s,
                               std::size_t samples, std::uint64_t seed, int voxel_res = 24);

/// Non-weighted variants: 1 keeps the 1/(2n+1) exponent with weights
/// (1-s)^((2n+3)/(2n+1)), s^((2n+3)/(2n+1)); 2 moves both sides to the
/// 1/(2n+3) exponent with the constant (1/4)^(1/(2n+3)).
VerifyReport check_bm_nonweighted(const SetSpec& a, const SetSpec& b, double s, int variant,
                                  std::size_t samples, std::uint64_t seed, int voxel_res = 24);

/// Contraction of a set toward a point: vol(Z_s(x,E)) against the
/// tau-weighted bound and the flat s^(2n+3) bound, with two independent
/// estimators (voxel occupancy vs the exact change-of-variables average of
/// tau^(2n+1) over E) that must agree within 3 combined standard errors.
VerifyReport check_mcp(const HPoint& x, const SetSpec& e, double s, std::size_t samples,
                       std::uint64_t seed, int voxel_res = 20);

/// Multiplicative inequality for the group product set A*B at the
/// topological-dimension exponent 1/(2n+1); the 1/(2n+2) variant is logged
/// in extra but never asserted.
VerifyReport check_mult_bm(const SetSpec& a, const SetSpec& b, std::size_t samples,
                           std::uint64_t seed, int voxel_res = 24);

/// Small-ball behaviour of vol(Z_1/2)/vol(B_r) for Euclidean balls of
/// radius r at (-1,0,0) and (1,0,0).  Checks the interpolation floor 1/4 on
/// every radius and convergence to the true limit 0.405406, the volume
/// ratio of the Minkowski sum of the two midpoint-differential images of
/// the ball (within 10% at the smallest r, 5% after Richardson
/// extrapolation in r).  Z volumes come from the exact membership oracle,
/// so the only error is binomial.  r_list must be decreasing, min >= 0.01.
VerifyReport check_quarter_sharpness(const std::vector<double>& r_list, std::size_t samples,
                                     std::uint64_t seed,
                                     std::vector<std::vector<double>>* table_out = nullptr);

/// Log-log slope fits for the vertically stacked cc-ball family A_r = B(0,r),
/// B_r = B((0,1),r): slope of 2pi - Theta (target 1), of tau_s(Theta)
/// (target -1/3 at n=1), and agreement of the growth exponents of the two
/// sides of the weighted inequality after the 1/(2n+1) root.  Z volumes come
/// from the exact membership oracle.
VerifyReport ball_asymptotics(const std::vector<double>& r_list, double s, std::size_t samples,
                              std::uint64_t seed,
                              std::vector<std::vector<double>>* table_out = nullptr);

} // namespace heis
