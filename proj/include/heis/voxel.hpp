#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "heis/cloud.hpp"
#include "heis/hpoint.hpp"

namespace heis {

/// Regular axis-aligned grid over group coordinates, the carrier for density
/// estimates and occupancy volumes.  Geometry (bounds, resolution) and cell
/// values live together; value order is row-major with the t axis fastest.
struct VoxelGrid {
  std::vector<double> lo, hi;  // per coordinate, size 2n+1
  std::vector<int> res;        // cells per axis, each >= 2
  std::vector<double> value;   // res product entries, 0-initialized

  VoxelGrid() = default;
  VoxelGrid(std::vector<double> lo_, std::vector<double> hi_, std::vector<int> res_);

  int dim() const { return static_cast<int>(lo.size()); }
  std::size_t cells() const { return value.size(); }
  double cell_volume() const;
  double axis_step(int a) const { return (hi[a] - lo[a]) / res[a]; }

  /// Flat cell index of a point, or npos when outside the bounds.
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t cell_of(const HPoint& p) const;
  HPoint cell_center(std::size_t flat) const;

  double integral() const;  // sum of values times cell volume

  /// Same bounds at k times the resolution per axis.
  VoxelGrid refined(int k) const;
};

/// Bounds that contain every listed point, inflated by margin (fraction of
/// each axis extent) plus pad (absolute, e.g. a kernel half-width).
VoxelGrid fit_grid(const std::vector<const std::vector<HPoint>*>& point_sets,
                   int res, double margin = 0.1, double pad = 0.0);

/// Histogram density: per-cell mass / cell volume.  Integrates to 1 exactly
/// when every point lands inside; out-of-bounds points throw.
VoxelGrid voxel_density(const Cloud& c, const VoxelGrid& geometry);

/// Box-kernel density: each point's mass spreads uniformly over an
/// axis-aligned cube of side bandwidth[a] per axis, deposited by exact
/// cell-overlap fractions.  Mass falling outside the bounds is clipped and
/// the result renormalized to integrate to 1; callers should pad the grid
/// by bandwidth/2 so the clip is empty.
VoxelGrid voxel_density_smoothed(const Cloud& c, const VoxelGrid& geometry,
                                 const std::vector<double>& bandwidth);

/// Per-axis rule-of-thumb bandwidth for m samples on this grid:
/// 1.6 * extent * m^(-1/3), floored at one cell.
std::vector<double> default_bandwidth(const VoxelGrid& geometry, std::size_t m);

/// Occupancy volume: number of cells hit by at least one point times the
/// cell volume.  Points outside the bounds throw.
double occupied_volume(const std::vector<HPoint>& pts, const VoxelGrid& geometry);

/// Occupancy with a noise estimate: cells with few hits may flip between
/// runs; the standard error sums Bernoulli variance of the per-cell
/// hit indicators under a Poisson count model.
struct OccupancyEstimate {
  double volume = 0.0;
  double se = 0.0;
  std::size_t hit_cells = 0;
};
OccupancyEstimate occupied_volume_se(const std::vector<HPoint>& pts,
                                     const VoxelGrid& geometry);

} // namespace heis
