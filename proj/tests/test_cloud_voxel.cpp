#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "heis/cclog.hpp"
#include "heis/cloud.hpp"
#include "heis/rng.hpp"
#include "heis/voxel.hpp"

using namespace heis;

namespace {
constexpr double kPi = 3.1415926535897932384626433832795;
} // namespace

TEST_CASE("cloud construction validates weights") {
  std::vector<HPoint> pts = {HPoint(0.0, 0.0, 0.0), HPoint(1.0, 0.0, 0.0)};
  CHECK_THROWS_AS(Cloud(pts, {0.5, 0.4}), std::invalid_argument);
  CHECK_THROWS_AS(Cloud(pts, {1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(Cloud(pts, {0.5}), std::invalid_argument);
  const Cloud u = Cloud::uniform(pts);
  CHECK(u.weights[0] == 0.5);
  CHECK(u.n() == 1);
}

TEST_CASE("cc ball volume: scaling law and Monte Carlo cross-check") {
  const double v1 = cc_ball_volume(1, 1.0);
  // Homogeneous dimension 4 at n = 1: volume scales as r^4.
  CHECK(cc_ball_volume(1, 2.0) == doctest::Approx(16.0 * v1).epsilon(1e-13));
  CHECK(cc_ball_volume(2, 2.0) == doctest::Approx(64.0 * cc_ball_volume(2, 1.0)).epsilon(1e-13));

  // Rejection estimate over the bounding box |x|,|y| <= 1, |t| <= 2/pi.
  const Rand r(77, 1);
  const std::size_t trials = 200000;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    const HPoint p(r.uniform(-1.0, 1.0, i, 0), r.uniform(-1.0, 1.0, i, 1),
                   r.uniform(-2.0 / kPi, 2.0 / kPi, i, 2));
    if (cc_dist0(p) <= 1.0) ++hits;
  }
  const double box = 2.0 * 2.0 * (4.0 / kPi);
  const double frac = static_cast<double>(hits) / static_cast<double>(trials);
  const double mc = box * frac;
  const double se = box * std::sqrt(frac * (1.0 - frac) / static_cast<double>(trials));
  CHECK(std::abs(mc - v1) <= 4.0 * se);
  CHECK(se <= 0.01 * v1);
}

TEST_CASE("density specs: support, constancy, sampling") {
  const Rand r(13, 2);
  SUBCASE("uniform box") {
    const HPoint c(0.5, -0.25, 1.0);
    const DensitySpec spec = DensitySpec::uniform_box(c, {0.5, 1.0, 2.0});
    const double want = 1.0 / (1.0 * 2.0 * 4.0);
    CHECK(spec.density(c) == doctest::Approx(want).epsilon(1e-14));
    CHECK(spec.density(HPoint(1.1, 0.0, 1.0)) == 0.0);
    for (std::uint64_t i = 0; i < 500; ++i) {
      const HPoint p = spec.sample(r, i);
      CHECK(std::abs(p.zeta[0] - 0.5) <= 0.5);
      CHECK(std::abs(p.zeta[1] + 0.25) <= 1.0);
      CHECK(std::abs(p.t - 1.0) <= 2.0);
      CHECK(spec.density(p) == doctest::Approx(want).epsilon(1e-14));
    }
    std::vector<double> lo, hi;
    spec.support_bounds(lo, hi);
    CHECK(lo[0] == 0.0);
    CHECK(hi[2] == 3.0);
  }
  SUBCASE("uniform cc ball") {
    const HPoint c(1.0, 0.0, 0.5);
    const DensitySpec spec = DensitySpec::uniform_cc_ball(c, 0.8);
    const double want = 1.0 / cc_ball_volume(1, 0.8);
    CHECK(spec.density(c) == doctest::Approx(want).epsilon(1e-12));
    for (std::uint64_t i = 0; i < 500; ++i) {
      const HPoint p = spec.sample(r, i);
      CHECK(cc_dist(c, p) <= 0.8);
      CHECK(spec.density(p) == doctest::Approx(want).epsilon(1e-12));
    }
    std::vector<double> lo, hi;
    spec.support_bounds(lo, hi);
    for (std::uint64_t i = 0; i < 500; ++i) {
      const HPoint p = spec.sample(r.sub("bounds"), i);
      for (int a = 0; a < 2; ++a) {
        CHECK(p.zeta[a] >= lo[a] - 1e-12);
        CHECK(p.zeta[a] <= hi[a] + 1e-12);
      }
      CHECK(p.t >= lo[2] - 1e-12);
      CHECK(p.t <= hi[2] + 1e-12);
    }
  }
  SUBCASE("gaussian box integrates to 1 on its support") {
    const HPoint c(0.0, 0.0, 0.0);
    const DensitySpec spec = DensitySpec::gaussian_box(c, {0.4, 0.6, 0.5}, {1.0, 1.0, 1.0});
    const Rand rq(5, 5);
    const std::size_t trials = 200000;
    double acc = 0.0, acc2 = 0.0;
    for (std::size_t i = 0; i < trials; ++i) {
      const HPoint p(rq.uniform(-1.0, 1.0, i, 0), rq.uniform(-1.0, 1.0, i, 1),
                     rq.uniform(-1.0, 1.0, i, 2));
      const double v = spec.density(p) * 8.0;
      acc += v;
      acc2 += v * v;
    }
    const double mean = acc / trials;
    const double se = std::sqrt((acc2 / trials - mean * mean) / trials);
    CHECK(std::abs(mean - 1.0) <= 4.0 * se);
    for (std::uint64_t i = 0; i < 500; ++i) {
      const HPoint p = spec.sample(r, i);
      CHECK(std::abs(p.zeta[0]) <= 1.0);
      CHECK(std::abs(p.t) <= 1.0);
      CHECK(spec.density(p) > 0.0);
    }
  }
}

TEST_CASE("sampled clouds are deterministic in the rng handle") {
  const DensitySpec spec = DensitySpec::uniform_box(HPoint(0.0, 0.0, 0.0), {1.0, 1.0, 1.0});
  const Cloud c1 = sample_cloud(spec, 64, Rand(42, 3));
  const Cloud c2 = sample_cloud(spec, 64, Rand(42, 3));
  const Cloud c3 = sample_cloud(spec, 64, Rand(43, 3));
  REQUIRE(c1.size() == 64);
  bool same = true, differ = false;
  for (std::size_t i = 0; i < 64; ++i) {
    same = same && c1.points[i].zeta == c2.points[i].zeta && c1.points[i].t == c2.points[i].t;
    differ = differ || c1.points[i].zeta != c3.points[i].zeta;
  }
  CHECK(same);
  CHECK(differ);
}

TEST_CASE("voxel grid geometry: indexing, centers, refinement") {
  VoxelGrid g({0.0, 0.0, -1.0}, {1.0, 2.0, 1.0}, {4, 5, 8});
  CHECK(g.cells() == 4u * 5u * 8u);
  CHECK(g.cell_volume() == doctest::Approx((0.25) * (0.4) * (0.25)).epsilon(1e-14));
  for (std::size_t f : {0u, 17u, 93u, 159u}) {
    const HPoint c = g.cell_center(f);
    CHECK(g.cell_of(c) == f);
  }
  CHECK(g.cell_of(HPoint(1.5, 0.0, 0.0)) == VoxelGrid::npos);
  // Points exactly on the upper face belong to the last cell.
  CHECK(g.cell_of(HPoint(1.0, 2.0, 1.0)) == g.cells() - 1);
  const VoxelGrid fine = g.refined(2);
  CHECK(fine.res[0] == 8);
  CHECK(fine.cells() == 8u * g.cells());
  CHECK(fine.cell_volume() == doctest::Approx(g.cell_volume() / 8.0).epsilon(1e-14));
}

TEST_CASE("histogram and smoothed densities integrate to one") {
  const Rand r(31, 6);
  const DensitySpec spec = DensitySpec::uniform_box(HPoint(0.0, 0.0, 0.0), {1.0, 1.0, 1.0});
  const Cloud c = sample_cloud(spec, 2000, r);
  std::vector<const std::vector<HPoint>*> sets = {&c.points};
  const VoxelGrid geom = fit_grid(sets, 12, 0.05);
  const VoxelGrid hist = voxel_density(c, geom);
  CHECK(hist.integral() == doctest::Approx(1.0).epsilon(1e-12));

  const std::vector<double> bw = default_bandwidth(geom, c.size());
  const VoxelGrid padded = fit_grid(sets, 12, 0.05, 0.5 * bw[0]);
  const VoxelGrid smooth = voxel_density_smoothed(c, padded, bw);
  CHECK(smooth.integral() == doctest::Approx(1.0).epsilon(1e-12));

  // Smoothing only spreads mass; peak density cannot rise.
  double hist_max = 0.0, smooth_max = 0.0;
  for (double v : hist.value) hist_max = std::max(hist_max, v);
  for (double v : smooth.value) smooth_max = std::max(smooth_max, v);
  CHECK(smooth_max <= hist_max + 1e-12);
}

TEST_CASE("occupancy volume recovers an aligned box") {
  const Rand r(9, 1);
  const DensitySpec spec = DensitySpec::uniform_box(HPoint(0.5, 0.5, 0.5), {0.5, 0.5, 0.5});
  const Cloud c = sample_cloud(spec, 20000, r);
  VoxelGrid geom({0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}, {8, 8, 8});
  // 20000 points over 512 cells: every cell is hit with overwhelming odds.
  const double vol = occupied_volume(c.points, geom);
  CHECK(vol == doctest::Approx(1.0).epsilon(1e-12));
  const OccupancyEstimate est = occupied_volume_se(c.points, geom);
  CHECK(est.volume == vol);
  CHECK(est.hit_cells == 512);
  CHECK(est.se <= 1e-6);

  VoxelGrid off({0.0, 0.0, 0.0}, {2.0, 2.0, 2.0}, {8, 8, 8});
  const double half = occupied_volume(c.points, off);
  // Support fills exactly one octant of this grid.
  CHECK(half == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(occupied_volume(c.points, VoxelGrid({0.0, 0.0, 0.0}, {0.5, 0.5, 0.5}, {4, 4, 4})),
                  std::invalid_argument);
}
