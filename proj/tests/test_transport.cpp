#include "doctest.h"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "heis/cclog.hpp"
#include "heis/cloud.hpp"
#include "heis/rng.hpp"
#include "heis/transport.hpp"

using namespace heis;

namespace {

HPoint random_point(const Rand& r, std::uint64_t i, int n, double box = 2.0) {
  HPoint p(n);
  for (std::size_t k = 0; k < p.zeta.size(); ++k)
    p.zeta[k] = r.uniform(-box, box, i, k);
  p.t = r.uniform(-box, box, i, 99);
  return p;
}

Cloud random_cloud(const Rand& r, std::size_t m, int n, double box = 2.0) {
  std::vector<HPoint> pts;
  pts.reserve(m);
  for (std::size_t i = 0; i < m; ++i) pts.push_back(random_point(r, i, n, box));
  return Cloud::uniform(std::move(pts));
}

} // namespace

TEST_CASE("cost matrix: frozen singleton entries") {
  const Cloud a = Cloud::uniform({HPoint(0.0, 0.0, 0.0)});
  SUBCASE("coincident points cost 0") {
    const std::vector<double> c = cost_matrix(a, a);
    REQUIRE(c.size() == 1);
    CHECK(c[0] == 0.0);
  }
  SUBCASE("unit horizontal step costs 1/2") {
    const Cloud b = Cloud::uniform({HPoint(1.0, 0.0, 0.0)});
    const std::vector<double> c = cost_matrix(a, b);
    REQUIRE(c.size() == 1);
    CHECK(c[0] == doctest::Approx(0.5).epsilon(1e-14));
  }
}

TEST_CASE("exact solver: self transport is free and diagonal") {
  const Rand r(11, 10);
  const Cloud a = random_cloud(r, 8, 1);
  const Plan p = solve_exact(a, a);
  validate_plan(p, a, a);
  CHECK(p.cost <= 1e-14);
}

TEST_CASE("exact solver: two-point crossing picks the cheaper matching") {
  // Identity matching would pay two long trips; the swap is optimal.
  const Cloud a = Cloud::uniform({HPoint(0.0, 0.0, 0.0), HPoint(10.0, 0.0, 0.0)});
  const Cloud b = Cloud::uniform({HPoint(10.5, 0.0, 0.0), HPoint(0.5, 0.0, 0.0)});
  const Plan p = solve_exact(a, b);
  validate_plan(p, a, b);
  CHECK(p.cost == doctest::Approx(brute_force_cost(a, b)).epsilon(1e-12));
  CHECK(p.cost == doctest::Approx(0.5 * 0.5 * 0.5 * 2.0 / 2.0).epsilon(1e-12));
  REQUIRE(p.entries.size() == 2);
  CHECK(p.entries[0].j == 1);
  CHECK(p.entries[1].j == 0);
}

TEST_CASE("exact solver matches brute force on random uniform instances") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const Rand r(seed, 7);
    for (std::size_t m : {2, 5, 6}) {
      const Cloud a = random_cloud(r.sub("a"), m, 1);
      const Cloud b = random_cloud(r.sub("b"), m, 1);
      const Plan p = solve_exact(a, b);
      validate_plan(p, a, b);
      const double oracle = brute_force_cost(a, b);
      CHECK(p.cost == doctest::Approx(oracle).epsilon(1e-11));
      CHECK(p.cost <= oracle + 1e-12);
    }
  }
}

TEST_CASE("exact solver: unbalanced sizes and nonuniform weights") {
  const Rand r(3, 5);
  std::vector<HPoint> apts, bpts;
  for (std::size_t i = 0; i < 5; ++i) apts.push_back(random_point(r.sub("a"), i, 1));
  for (std::size_t j = 0; j < 3; ++j) bpts.push_back(random_point(r.sub("b"), j, 1));
  std::vector<double> aw = {0.1, 0.3, 0.2, 0.25, 0.15};
  std::vector<double> bw = {0.5, 0.2, 0.3};
  const Cloud a(apts, aw), b(bpts, bw);
  const Plan p = solve_exact(a, b);
  validate_plan(p, a, b);

  // The product coupling is feasible, so the optimum cannot beat it.
  const std::vector<double> c = cost_matrix(a, b);
  double product_cost = 0.0;
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 3; ++j) product_cost += aw[i] * bw[j] * c[i * 3 + j];
  CHECK(p.cost <= product_cost + 1e-12);
  CHECK(p.cost == doctest::Approx(plan_cost(p, c, 3)).epsilon(1e-12));

  // Complementary slackness cross-check: swapping any two used columns
  // between two used rows cannot lower the cost.
  for (const PlanEntry& e1 : p.entries)
    for (const PlanEntry& e2 : p.entries) {
      if (e1.i == e2.i || e1.j == e2.j) continue;
      const double keep = c[e1.i * 3 + e1.j] + c[e2.i * 3 + e2.j];
      const double swap = c[e1.i * 3 + e2.j] + c[e2.i * 3 + e1.j];
      CHECK(keep <= swap + 1e-10);
    }
}

TEST_CASE("exact solver rejects instances above the size cap") {
  const Rand r(9, 9);
  const Cloud a = random_cloud(r, 4, 1);
  CHECK_THROWS_AS(solve_exact(a, a, 3), std::invalid_argument);
}

TEST_CASE("entropic solver: upper-bounds exact cost, tightens as reg shrinks") {
  const Rand r(21, 4);
  const Cloud a = random_cloud(r.sub("a"), 12, 1, 0.8);
  const Cloud b = random_cloud(r.sub("b"), 12, 1, 0.8);
  const Plan exact = solve_exact(a, b);
  double prev = std::numeric_limits<double>::infinity();
  for (double reg : {0.5, 0.2, 0.08}) {
    const Plan p = solve_entropic(a, b, reg);
    validate_plan(p, a, b, 1e-8);
    CHECK(p.cost >= exact.cost - 1e-9);
    CHECK(p.cost <= prev + 1e-8);
    prev = p.cost;
  }
  // At the smallest reg the blur is mild; the gap to exact stays bounded.
  CHECK(prev <= exact.cost + 0.08 * std::log(12.0) + 1e-9);
}

TEST_CASE("pair geometry: horizontal, vertical and generic pairs") {
  const HPoint o(0.0, 0.0, 0.0);
  SUBCASE("horizontal pair moves along the x axis") {
    const PairGeo g = pair_geo(o, HPoint(1.0, 0.0, 0.0), 0.25);
    CHECK(g.theta == 0.0);
    CHECK(g.dist == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_FALSE(g.on_center);
    CHECK(g.mid.zeta[0] == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(std::abs(g.mid.zeta[1]) <= 1e-13);
    CHECK(std::abs(g.mid.t) <= 1e-13);
  }
  SUBCASE("vertical pair is on-center with theta 2*pi") {
    const PairGeo g = pair_geo(o, HPoint(0.0, 0.0, 1.0), 0.5);
    CHECK(g.on_center);
    CHECK(g.theta == doctest::Approx(2.0 * 3.14159265358979324).epsilon(1e-13));
    CHECK(g.dist == doctest::Approx(std::sqrt(3.14159265358979324)).epsilon(1e-13));
  }
  SUBCASE("midpoint agrees with the two-point helper") {
    const Rand r(5, 2);
    for (std::uint64_t i = 0; i < 20; ++i) {
      const HPoint x = random_point(r, 2 * i, 1);
      const HPoint y = random_point(r, 2 * i + 1, 1);
      const PairGeo g = pair_geo(x, y, 0.5);
      const HPoint m = midpoint(x, y);
      CHECK(std::abs(g.mid.zeta[0] - m.zeta[0]) <= 1e-11);
      CHECK(std::abs(g.mid.zeta[1] - m.zeta[1]) <= 1e-11);
      CHECK(std::abs(g.mid.t - m.t) <= 1e-11);
      CHECK(g.dist == doctest::Approx(cc_dist(x, y)).epsilon(1e-12));
    }
  }
}

TEST_CASE("interpolation: endpoints slide along geodesics, static pairs stay") {
  const Cloud a = Cloud::uniform({HPoint(0.0, 0.0, 0.0), HPoint(3.0, 0.0, 0.0)});
  const Cloud b = Cloud::uniform({HPoint(1.0, 0.0, 0.0), HPoint(3.0, 0.0, 0.0)});
  const Plan p = solve_exact(a, b);
  const Cloud mid = interpolate(p, a, b, 0.5);
  REQUIRE(mid.size() == 2);
  validate_plan(p, a, b);
  // Moving pair lands halfway; static pair is pinned to its source point.
  bool saw_half = false, saw_static = false;
  for (std::size_t i = 0; i < 2; ++i) {
    if (std::abs(mid.points[i].zeta[0] - 0.5) <= 1e-12) saw_half = true;
    if (mid.points[i].zeta[0] == 3.0 && mid.points[i].t == 0.0) saw_static = true;
  }
  CHECK(saw_half);
  CHECK(saw_static);
  CHECK(mid.weights[0] + mid.weights[1] == 1.0);
}
