#include "heis/voxel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace heis {

VoxelGrid::VoxelGrid(std::vector<double> lo_, std::vector<double> hi_,
                     std::vector<int> res_)
    : lo(std::move(lo_)), hi(std::move(hi_)), res(std::move(res_)) {
  if (lo.size() != hi.size() || lo.size() != res.size() || lo.empty())
    throw std::invalid_argument("VoxelGrid: bounds/resolution size mismatch");
  std::size_t total = 1;
  for (std::size_t a = 0; a < lo.size(); ++a) {
    if (!(hi[a] > lo[a])) throw std::invalid_argument("VoxelGrid: empty axis");
    if (res[a] < 2) throw std::invalid_argument("VoxelGrid: resolution must be >= 2");
    total *= static_cast<std::size_t>(res[a]);
  }
  value.assign(total, 0.0);
}

double VoxelGrid::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim(); ++a) v *= axis_step(a);
  return v;
}

std::size_t VoxelGrid::cell_of(const HPoint& p) const {
  const std::vector<double> x = to_coords(p);
  if (x.size() != lo.size()) throw std::invalid_argument("VoxelGrid: dimension mismatch");
  std::size_t flat = 0;
  for (std::size_t a = 0; a < x.size(); ++a) {
    if (x[a] < lo[a] || x[a] > hi[a]) return npos;
    int i = static_cast<int>((x[a] - lo[a]) / axis_step(static_cast<int>(a)));
    i = std::min(std::max(i, 0), res[a] - 1);  // hi-edge points join the last cell
    flat = flat * static_cast<std::size_t>(res[a]) + static_cast<std::size_t>(i);
  }
  return flat;
}

HPoint VoxelGrid::cell_center(std::size_t flat) const {
  std::vector<double> x(lo.size());
  for (int a = dim() - 1; a >= 0; --a) {
    const std::size_t r = static_cast<std::size_t>(res[a]);
    x[static_cast<std::size_t>(a)] =
        lo[a] + (static_cast<double>(flat % r) + 0.5) * axis_step(a);
    flat /= r;
  }
  return from_coords(x);
}

double VoxelGrid::integral() const {
  double s = 0.0;
  for (double v : value) s += v;
  return s * cell_volume();
}

VoxelGrid VoxelGrid::refined(int k) const {
  if (k < 1) throw std::invalid_argument("VoxelGrid: refinement factor must be >= 1");
  std::vector<int> r2 = res;
  for (int& r : r2) r *= k;
  return VoxelGrid(lo, hi, r2);
}

VoxelGrid fit_grid(const std::vector<const std::vector<HPoint>*>& point_sets,
                   int res, double margin, double pad) {
  if (point_sets.empty() || point_sets[0]->empty())
    throw std::invalid_argument("fit_grid: no points");
  const std::size_t dim = to_coords((*point_sets[0])[0]).size();
  std::vector<double> lo(dim, 1e300), hi(dim, -1e300);
  for (const auto* set : point_sets)
    for (const HPoint& p : *set) {
      const std::vector<double> x = to_coords(p);
      if (x.size() != dim) throw std::invalid_argument("fit_grid: mixed dimensions");
      for (std::size_t a = 0; a < dim; ++a) {
        lo[a] = std::min(lo[a], x[a]);
        hi[a] = std::max(hi[a], x[a]);
      }
    }
  for (std::size_t a = 0; a < dim; ++a) {
    const double extent = std::max(hi[a] - lo[a], 1e-9);
    const double grow = margin * extent + pad;
    lo[a] -= grow;
    hi[a] += grow;
  }
  return VoxelGrid(std::move(lo), std::move(hi), std::vector<int>(dim, res));
}

VoxelGrid voxel_density(const Cloud& c, const VoxelGrid& geometry) {
  VoxelGrid g = geometry;
  std::fill(g.value.begin(), g.value.end(), 0.0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const std::size_t cell = g.cell_of(c.points[i]);
    if (cell == VoxelGrid::npos)
      throw std::invalid_argument("voxel_density: point outside the grid bounds");
    g.value[cell] += c.weights[i];
  }
  const double cv = g.cell_volume();
  for (double& v : g.value) v /= cv;
  return g;
}

VoxelGrid voxel_density_smoothed(const Cloud& c, const VoxelGrid& geometry,
                                 const std::vector<double>& bandwidth) {
  const int dim = geometry.dim();
  if (bandwidth.size() != static_cast<std::size_t>(dim))
    throw std::invalid_argument("voxel_density_smoothed: bandwidth per axis required");
  for (double h : bandwidth)
    if (!(h > 0.0)) throw std::invalid_argument("voxel_density_smoothed: bandwidth must be positive");

  VoxelGrid g = geometry;
  std::fill(g.value.begin(), g.value.end(), 0.0);

  // Per-axis overlap weights of [x - h/2, x + h/2] with the cell lattice.
  std::vector<std::vector<std::pair<int, double>>> axis(static_cast<std::size_t>(dim));
  for (std::size_t i = 0; i < c.size(); ++i) {
    const std::vector<double> x = to_coords(c.points[i]);
    for (int a = 0; a < dim; ++a) {
      auto& w = axis[static_cast<std::size_t>(a)];
      w.clear();
      const double step = g.axis_step(a);
      const double l = x[static_cast<std::size_t>(a)] - 0.5 * bandwidth[static_cast<std::size_t>(a)];
      const double r = x[static_cast<std::size_t>(a)] + 0.5 * bandwidth[static_cast<std::size_t>(a)];
      const int il = static_cast<int>(std::floor((l - g.lo[a]) / step));
      const int ir = static_cast<int>(std::floor((r - g.lo[a]) / step));
      for (int k = std::max(il, 0); k <= std::min(ir, g.res[a] - 1); ++k) {
        const double cl = g.lo[a] + k * step;
        const double overlap = std::min(r, cl + step) - std::max(l, cl);
        if (overlap > 0.0)
          w.emplace_back(k, overlap / bandwidth[static_cast<std::size_t>(a)]);
      }
    }
    bool clipped_out = false;
    for (int a = 0; a < dim; ++a)
      clipped_out = clipped_out || axis[static_cast<std::size_t>(a)].empty();
    if (clipped_out) continue;  // kernel box entirely outside the bounds

    // Outer product across axes (dim is 3 for n = 1; general loop kept small).
    std::vector<std::size_t> idx(static_cast<std::size_t>(dim), 0);
    for (;;) {
      double w = c.weights[i];
      std::size_t flat = 0;
      for (int a = 0; a < dim; ++a) {
        const auto& e = axis[static_cast<std::size_t>(a)][idx[static_cast<std::size_t>(a)]];
        w *= e.second;
        flat = flat * static_cast<std::size_t>(g.res[a]) + static_cast<std::size_t>(e.first);
      }
      g.value[flat] += w;
      int a = dim - 1;
      for (; a >= 0; --a) {
        if (++idx[static_cast<std::size_t>(a)] < axis[static_cast<std::size_t>(a)].size()) break;
        idx[static_cast<std::size_t>(a)] = 0;
      }
      if (a < 0) break;
    }
  }

  double mass = 0.0;
  for (double v : g.value) mass += v;
  if (!(mass > 0.0))
    throw std::invalid_argument("voxel_density_smoothed: all mass fell outside the grid");
  const double cv = g.cell_volume();
  for (double& v : g.value) v /= mass * cv;
  return g;
}

std::vector<double> default_bandwidth(const VoxelGrid& geometry, std::size_t m) {
  std::vector<double> h(static_cast<std::size_t>(geometry.dim()));
  const double shrink = std::pow(static_cast<double>(std::max<std::size_t>(m, 2)), -1.0 / 3.0);
  for (int a = 0; a < geometry.dim(); ++a)
    h[static_cast<std::size_t>(a)] =
        std::max(1.6 * (geometry.hi[a] - geometry.lo[a]) * shrink, geometry.axis_step(a));
  return h;
}

namespace {

std::vector<std::uint32_t> hit_counts(const std::vector<HPoint>& pts,
                                      const VoxelGrid& geometry) {
  std::vector<std::uint32_t> count(geometry.cells(), 0);
  for (const HPoint& p : pts) {
    const std::size_t cell = geometry.cell_of(p);
    if (cell == VoxelGrid::npos)
      throw std::invalid_argument("occupied_volume: point outside the grid bounds");
    ++count[cell];
  }
  return count;
}

} // namespace

double occupied_volume(const std::vector<HPoint>& pts, const VoxelGrid& geometry) {
  const auto count = hit_counts(pts, geometry);
  std::size_t hit = 0;
  for (std::uint32_t c : count) hit += (c > 0);
  return static_cast<double>(hit) * geometry.cell_volume();
}

OccupancyEstimate occupied_volume_se(const std::vector<HPoint>& pts,
                                     const VoxelGrid& geometry) {
  const auto count = hit_counts(pts, geometry);
  OccupancyEstimate est;
  double var = 0.0;
  for (std::uint32_t c : count) {
    if (c == 0) continue;
    ++est.hit_cells;
    // P(cell unseen) under a Poisson count with the observed rate.
    const double miss = std::exp(-static_cast<double>(c));
    var += miss * (1.0 - miss);
  }
  est.volume = static_cast<double>(est.hit_cells) * geometry.cell_volume();
  est.se = std::sqrt(var) * geometry.cell_volume();
  return est;
}

} // namespace heis
