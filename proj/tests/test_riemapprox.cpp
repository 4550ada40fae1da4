#include "doctest.h"

#include <cmath>

#include "heis/cclog.hpp"
#include "heis/riemapprox.hpp"
#include "heis/rng.hpp"

using namespace heis;

namespace {
constexpr double kPi = 3.1415926535897932384626433832795;
constexpr double kTwoPi = 2.0 * kPi;

double max_coord_diff(const HPoint& a, const HPoint& b) {
  double m = std::abs(a.t - b.t);
  for (std::size_t k = 0; k < a.zeta.size(); ++k)
    m = std::max(m, std::abs(a.zeta[k] - b.zeta[k]));
  return m;
}
} // namespace

TEST_CASE("gamma_eps reduces to gamma at eps = 0 and adds the linear drift") {
  const Rand r(41, "geps");
  for (std::uint64_t i = 0; i < 100; ++i) {
    EpsParam p(std::vector<double>{r.uniform(-2, 2, i, 0), r.uniform(-2, 2, i, 1)},
               r.uniform(-6.2, 6.2, i, 2), r.uniform(0.05, 1.0, i, 3));
    const double s = r.uniform(0.0, 1.0, i, 4);
    const HPoint sub = gamma(p.horizontal(), s);
    const HPoint rie = gamma_eps(p, s);
    CHECK(rie.zeta[0] == sub.zeta[0]);
    CHECK(rie.zeta[1] == sub.zeta[1]);
    CHECK(rie.t == doctest::Approx(sub.t + 0.25 * p.eps * p.eps * p.theta * s).epsilon(1e-14));
  }
  // theta = 0: straight horizontal line regardless of eps.
  const EpsParam flat(std::vector<double>{1.0, 2.0}, 0.0, 0.7);
  CHECK(max_coord_diff(gamma_eps(flat, 0.5), HPoint(0.5, 1.0, 0.0)) == 0.0);
}

TEST_CASE("jac_gamma_eps frozen values and split parts") {
  // chi = 0, theta = 0, s = 1, n = 1, eps = 1: pure vertical correction 1/4.
  const EpsParam vert(std::vector<double>{0.0, 0.0}, 0.0, 1.0);
  CHECK(jac_gamma_eps(vert, 1.0) == doctest::Approx(0.25).epsilon(1e-15));
  // theta = 0 general form s^(2n+3)|chi|^2/3 + s^(2n+1) eps^2/4.
  const EpsParam flat(std::vector<double>{2.0, 0.0}, 0.0, 0.5);
  double a, b;
  jac_gamma_eps_parts(flat, 0.5, &a, &b);
  CHECK(a == doctest::Approx(std::pow(0.5, 5) * 4.0 / 3.0).epsilon(1e-15));
  CHECK(b == doctest::Approx(std::pow(0.5, 3) * 0.25 / 4.0).epsilon(1e-15));
  // The horizontal part coincides with the sub-Riemannian Jacobian.
  const Rand r(43, "jeps");
  for (std::uint64_t i = 0; i < 100; ++i) {
    EpsParam p(std::vector<double>{r.uniform(-2, 2, i, 0), r.uniform(-2, 2, i, 1)},
               r.uniform(-6.0, 6.0, i, 2), r.uniform(0.05, 1.0, i, 3));
    const double s = r.uniform(0.05, 1.0, i, 4);
    jac_gamma_eps_parts(p, s, &a, &b);
    CHECK(a == doctest::Approx(jac_gamma(p.horizontal(), s)).epsilon(1e-13));
    CHECK(b > 0.0);
  }
}

TEST_CASE("part inequalities: A_s >= s^(2n+3) A_1 and B_s >= s^(2n+1) B_1") {
  const Rand r(47, "parts");
  for (std::uint64_t i = 0; i < 300; ++i) {
    EpsParam p(std::vector<double>{r.uniform(-2, 2, i, 0), r.uniform(-2, 2, i, 1)},
               r.uniform(-6.2, 6.2, i, 2), r.uniform(0.05, 1.0, i, 3));
    const double s = r.uniform(0.01, 0.99, i, 4);
    double as, bs, a1, b1;
    jac_gamma_eps_parts(p, s, &as, &bs);
    jac_gamma_eps_parts(p, 1.0, &a1, &b1);
    CHECK(as >= std::pow(s, 5) * a1 * (1.0 - 1e-12));
    CHECK(bs >= std::pow(s, 3) * b1 * (1.0 - 1e-12));
  }
}

TEST_CASE("v_eps: normalization, floor s^2, vertical value 1") {
  const EpsParam vert(std::vector<double>{0.0, 0.0}, 0.0, 0.8);
  CHECK(v_eps(vert, 0.37) == doctest::Approx(1.0).epsilon(1e-15));
  const Rand r(53, "veps");
  for (std::uint64_t i = 0; i < 500; ++i) {
    EpsParam p(std::vector<double>{r.uniform(-2, 2, i, 0), r.uniform(-2, 2, i, 1)},
               r.uniform(-6.2, 6.2, i, 2), r.uniform(0.02, 1.0, i, 3));
    const double s = r.uniform(0.01, 1.0, i, 4);
    CHECK(v_eps(p, s) >= s * s * (1.0 - 1e-12));
  }
  CHECK_THROWS_AS(v_eps(vert, 0.0), std::invalid_argument);
}

TEST_CASE("(Jac_eps - Jac)/eps^2 is independent of eps (exact vertical split)") {
  const Rand r(59, "split");
  for (std::uint64_t i = 0; i < 50; ++i) {
    const GeodesicParam p(
        std::vector<double>{r.uniform(0.5, 2.0, i, 0), r.uniform(0.5, 2.0, i, 1)},
        r.uniform(0.05, 5.9, i, 2));
    const double s = r.uniform(0.1, 0.9, i, 3);
    const double base = jac_gamma(p, s);
    double ref = 0.0;
    bool first = true;
    for (double eps : {1e-1, 1e-2, 1e-3}) {
      const EpsParam pe(p.chi, p.theta, eps);
      const double q = (jac_gamma_eps(pe, s) - base) / (eps * eps);
      if (first) { ref = q; first = false; }
      CHECK(q == doctest::Approx(ref).epsilon(1e-8));
    }
  }
}

TEST_CASE("eps_log: off-axis round-trip and monotone approach to the sub-Riemannian log") {
  const Rand r(61, "elog");
  for (std::uint64_t i = 0; i < 300; ++i) {
    const HPoint g(r.uniform(-2, 2, i, 0), r.uniform(-2, 2, i, 1), r.uniform(-2, 2, i, 2));
    if (g.zeta_norm() <= 1e-6) continue;
    const double eps = r.uniform(0.05, 1.0, i, 3);
    const EpsLogResult lr = eps_log(g, eps);
    CHECK(lr.residual <= 1e-9);
    CHECK(max_coord_diff(gamma_eps(lr.param, 1.0), g) <= 1e-9);
    CHECK(std::abs(lr.param.theta) <= kTwoPi);
    CHECK_FALSE(lr.non_minimizing);
    // The relaxed frequency never exceeds the sub-Riemannian one in size.
    const double th_cc = cc_log(g).param.theta;
    CHECK(std::abs(lr.param.theta) <= std::abs(th_cc) + 1e-12);
  }
}

TEST_CASE("eps_log on the vertical axis: branch split at |t| = pi eps^2/2") {
  // Small |t|: vertical line, theta = 4t/eps^2.
  const EpsLogResult low = eps_log(HPoint(0.0, 0.0, 0.1), 1.0);
  CHECK(low.on_center);
  CHECK(low.unique);
  CHECK(low.param.theta == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(low.param.chi_norm2() == 0.0);
  CHECK(eps_length(low.param) == doctest::Approx(0.1).epsilon(1e-15));

  // Large |t|: the 2pi family with |chi|^2 = pi(|t| - pi eps^2/2).
  const EpsLogResult high = eps_log(HPoint(0.0, 0.0, 1.0), 0.5);
  CHECK(high.on_center);
  CHECK_FALSE(high.unique);
  CHECK(high.param.theta == doctest::Approx(kTwoPi).epsilon(1e-15));
  CHECK(high.param.chi_norm2() ==
        doctest::Approx(kPi * (1.0 - kPi * 0.125)).epsilon(1e-14));
  CHECK(max_coord_diff(gamma_eps(high.param, 1.0), HPoint(0.0, 0.0, 1.0)) <= 1e-12);

  // Negative t mirrors the sign.
  CHECK(eps_log(HPoint(0.0, 0.0, -1.0), 0.5).param.theta ==
        doctest::Approx(-kTwoPi).epsilon(1e-15));
}

TEST_CASE("axis frequency is non-increasing in eps across the branch switch") {
  // t = 1: the switch sits at eps = sqrt(2/pi) ~ 0.7979.
  const HPoint g(0.0, 0.0, 1.0);
  double prev = 1e300;
  for (double eps : {0.125, 0.25, 0.5, 1.0, 1.5}) {
    const double th = eps_log(g, eps).param.theta;
    CHECK(th <= prev + 1e-12);
    prev = th;
  }
  // Below the switch the family pins theta at 2pi exactly.
  CHECK(eps_log(g, 0.125).param.theta == doctest::Approx(kTwoPi).epsilon(1e-15));
  CHECK(eps_log(g, 0.5).param.theta == doctest::Approx(kTwoPi).epsilon(1e-15));
  // Above it the vertical line takes over and drops below 2pi.
  CHECK(eps_log(g, 1.0).param.theta == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(eps_log(g, 1.5).param.theta < kTwoPi);
}

TEST_CASE("candidate Riemannian length never exceeds the distance; gap grows with eps") {
  const Rand r(67, "sand");
  std::vector<std::pair<HPoint, HPoint>> pairs;
  for (std::uint64_t i = 0; i < 100; ++i) {
    pairs.emplace_back(
        HPoint(r.uniform(-2, 2, i, 0), r.uniform(-2, 2, i, 1), r.uniform(-2, 2, i, 2)),
        HPoint(r.uniform(-2, 2, i, 3), r.uniform(-2, 2, i, 4), r.uniform(-2, 2, i, 5)));
  }
  const SandwichReport rep = sandwich_check(pairs, {0.5, 0.25, 0.125});
  CHECK(rep.upper_bound_ok);
  CHECK(rep.max_overshoot <= 1e-9);
  CHECK(rep.c_estimate >= 0.0);
  // Larger eps relaxes more: the worst gap may only shrink as eps does.
  CHECK(rep.max_gap_per_eps[0] >= rep.max_gap_per_eps[1] - 1e-12);
  CHECK(rep.max_gap_per_eps[1] >= rep.max_gap_per_eps[2] - 1e-12);

  // Vertical pair: gap positive, decreasing with eps, order at least 1.
  std::vector<std::pair<HPoint, HPoint>> vert{{HPoint(0.0, 0.0, 0.0), HPoint(0.0, 0.0, 1.0)}};
  const SandwichReport vrep = sandwich_check(vert, {0.5, 0.25, 0.125});
  CHECK(vrep.upper_bound_ok);
  CHECK(vrep.max_gap_per_eps[0] > 0.0);
  CHECK(vrep.max_gap_per_eps[0] > vrep.max_gap_per_eps[1]);
  CHECK(vrep.max_gap_per_eps[1] > vrep.max_gap_per_eps[2]);
  const ConvergenceReport fit = fit_order({0.5, 0.25, 0.125}, vrep.max_gap_per_eps);
  CHECK(fit.order_valid);
  CHECK(fit.fitted_order >= 1.0);
}

TEST_CASE("bridge limit: v_eps converges to the volume distortion at order 2") {
  const Rand r(71, "bridge");
  for (std::uint64_t i = 0; i < 20; ++i) {
    const GeodesicParam p(
        std::vector<double>{r.uniform(0.3, 2.0, i, 0), r.uniform(0.3, 2.0, i, 1)},
        r.uniform(0.1, 5.9, i, 2));
    const double s = r.uniform(0.1, 0.9, i, 3);
    const ConvergenceReport rep = bridge_limit_check(p, s, {1e-1, 3e-2, 1e-2});
    REQUIRE(rep.order_valid);
    CHECK(rep.fitted_order >= 1.9);
    CHECK(rep.fitted_order <= 2.1);
  }
}

TEST_CASE("convergence report serialization carries the fit") {
  const ConvergenceReport rep = fit_order({0.1, 0.01}, {1e-2, 1e-4});
  CHECK(rep.order_valid);
  CHECK(rep.fitted_order == doctest::Approx(2.0).epsilon(1e-12));
  const std::string js = rep.to_json();
  CHECK(js.find("\"fitted_order\"") != std::string::npos);
  CHECK(js.find("\"eps\"") != std::string::npos);
  CHECK(js.find("\"error\"") != std::string::npos);
  // Degenerate fit flagged, not thrown.
  CHECK_FALSE(fit_order({0.1, 0.01}, {0.0, 0.0}).order_valid);
}
