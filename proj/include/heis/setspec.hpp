#pragma once

#include <cstdint>
#include <vector>

#include "heis/hpoint.hpp"
#include "heis/rng.hpp"

namespace heis {

/// Axis-aligned or metric test sets for the set-level inequalities.  Each
/// kind has an exact membership predicate and a finite bounding box, which
/// is all the estimators below need.
struct SetSpec {
  enum class Kind { CCBall, KoranyiBox, EuclideanBall, Point };

  Kind kind = Kind::Point;
  HPoint center;
  double radius = 0.0;             // ball kinds
  std::vector<double> half_width;  // box kind, size 2n+1

  static SetSpec cc_ball(const HPoint& center, double radius);
  static SetSpec koranyi_box(const HPoint& center, std::vector<double> half_width);
  static SetSpec euclidean_ball(const HPoint& center, double radius);
  static SetSpec point(const HPoint& center);

  int n() const { return center.n(); }
  int dim() const { return 2 * center.n() + 1; }

  bool contains(const HPoint& p) const;
  void bounding_box(std::vector<double>& lo, std::vector<double>& hi) const;

  /// Uniform draw from the set (rejection from the bounding box for the ball
  /// kinds); deterministic in (r, index).  A Point returns its center.
  HPoint sample(const Rand& r, std::uint64_t index) const;
};

struct VolumeEstimate {
  double value = 0.0;
  double se = 0.0;
};

/// Hit-or-miss Lebesgue volume over the bounding box.  Unbiased; a Point
/// returns (0, 0) without sampling.
VolumeEstimate volume_mc(const SetSpec& a, std::size_t samples, const Rand& r);

/// Verticality gauge of a set pair: the essential infimum of |theta(x, y)|
/// over A x B, realized as a low quantile of sampled pairs since an honest
/// infimum would chase null sets.  Raw minimum and a quantile sensitivity
/// sweep ride along for diagnostics.
struct ThetaEstimate {
  double theta = 0.0;    // the chosen quantile
  double raw_min = 0.0;  // smallest sampled |theta|
  double quantile = 0.0; // q actually used
  std::vector<double> sweep;  // values at q = 0.01, 0.001, 0.0001
};
ThetaEstimate theta_ab(const SetSpec& a, const SetSpec& b, std::size_t samples,
                       double quantile, const Rand& r);

/// Volume of the s-midpoint set Z_s(A, B) by voxel occupancy of sampled
/// pair midpoints.  Lower-biased (sampling misses cells) yet boundary cells
/// count in full; the refined value at twice the resolution tracks the
/// discretization, and se carries the occupancy noise.
struct ZsetEstimate {
  double volume = 0.0;
  double volume_refined = 0.0;  // at 2x resolution, same midpoints
  double se = 0.0;
  std::size_t hit_cells = 0;
  std::vector<int> res;
};
ZsetEstimate zset_volume(const SetSpec& a, const SetSpec& b, double s,
                         std::size_t samples, int voxel_res, const Rand& r);

/// Midpoints of sampled pairs, the raw material of zset_volume; exposed for
/// checks that need the same sample for several grids.
std::vector<HPoint> zset_midpoints(const SetSpec& a, const SetSpec& b, double s,
                                   std::size_t samples, const Rand& r);

/// Exact membership in Z_s(A, B): true when some minimizing geodesic
/// through z has its (-s)-point in A and its (1-s)-point in B.  The search
/// runs over the geodesic data (chi, theta) at z, which is smooth and
/// gate-free: multistart Levenberg-Marquardt on the two distance-excess
/// hinges, then an alternating-projection snap from the LM endpoint for
/// near-boundary states.  Ball kinds with n = 1 only.
bool zset_member(const SetSpec& a, const SetSpec& b, double s, const HPoint& z);

/// Hit-or-miss volume of Z_s(A, B) with zset_member as the oracle.  Samples
/// a box inflated around presampled midpoints and regrows it until no
/// member lands near a face, so the occupancy fringe bias of zset_volume
/// does not appear here; se is the plain binomial error.
struct ZsetExactEstimate {
  double volume = 0.0;
  double se = 0.0;
  double box_volume = 0.0;
  std::size_t hits = 0;
  int grow_rounds = 0;
};
ZsetExactEstimate zset_volume_exact(const SetSpec& a, const SetSpec& b, double s,
                                    std::size_t samples, const Rand& r);

} // namespace heis
