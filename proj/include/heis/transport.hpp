#pragma once

#include <cstddef>
#include <vector>

#include "heis/cloud.hpp"

namespace heis {

/// Transport plan between two clouds: sparse list of (source, target, mass).
/// Row sums match the source weights and column sums the target weights to
/// 1e-9 (validate_plan); total mass is 1.
struct PlanEntry {
  int i = 0;
  int j = 0;
  double mass = 0.0;
};

struct Plan {
  std::vector<PlanEntry> entries;
  double cost = 0.0;  // sum of mass * d_CC^2 / 2 as reported by the solver
};

/// Dense cost matrix, entry (i, j) = d_CC(a_i, b_j)^2 / 2, row-major.
/// Assembly parallelizes over rows.
std::vector<double> cost_matrix(const Cloud& a, const Cloud& b);

/// Exact minimum-cost plan by successive shortest augmenting paths with node
/// potentials (Dijkstra on the bipartite residual network).  The optimal cost
/// is unique even when the plan is not.  Sizes above the cap are rejected.
Plan solve_exact(const Cloud& a, const Cloud& b, std::size_t cap = 512);
Plan solve_exact(const Cloud& a, const Cloud& b, const std::vector<double>& cost,
                 std::size_t cap = 512);

/// Entropically regularized plan by log-domain matrix scaling, iterated to a
/// marginal L1 error below 5e-10, then row-rescaled so rows are exact.
/// Throws on iteration-cap exhaustion (reg too small for the instance).
Plan solve_entropic(const Cloud& a, const Cloud& b, double reg,
                    int max_iterations = 200000);

double plan_cost(const Plan& p, const std::vector<double>& cost, std::size_t ncols);

/// Checks marginals against the cloud weights; throws on violation.
void validate_plan(const Plan& p, const Cloud& a, const Cloud& b, double tol = 1e-9);

/// Minimal cost over all one-to-one matchings; only for equal-size clouds
/// with uniform weights and size <= 9 (test oracle).
double brute_force_cost(const Cloud& a, const Cloud& b);

///// Geometry of one transported pair, computed once and shared by the checks:
/// frequency |theta|, cc distance, the s-intermediate point, and whether the
/// pair sits on the vertical axis (non-unique midpoint).
struct PairGeo {
  double theta = 0.0;
  double dist = 0.0;
  HPoint mid;
  bool on_center = false;
};
PairGeo pair_geo(const HPoint& x, const HPoint& y, double s);

///// Displacement interpolation: each plan entry contributes its mass at the
/// s-intermediate point of (a_i, b_j).  Pairs closer than 1e-9 times the
/// plan diameter stay at the source point.  Output weights sum to 1.
Cloud interpolate(const Plan& p, const Cloud& a, const Cloud& b, double s);

} // namespace heis
