#include "doctest.h"

#include <cmath>

#include "heis/cclog.hpp"
#include "heis/distortion.hpp"
#include "heis/geodesic.hpp"
#include "heis/rng.hpp"

using namespace heis;

namespace {
constexpr double kPi = 3.1415926535897932384626433832795;
constexpr double kTwoPi = 2.0 * kPi;

// Independent oracle: the weight as the (2n+1)-th root of the Jacobian ratio
// of the time maps, evaluated through the geodesic module.
double tau_oracle(double s, double theta, int n) {
  GeodesicParam p(std::vector<double>(2 * n, 0.0), theta);
  p.chi[0] = 1.0;
  return std::pow(jac_gamma(p, s) / jac_gamma(p, 1.0), 1.0 / (2.0 * n + 1.0));
}
} // namespace

TEST_CASE("tau frozen values") {
  // theta = 0 closed form.
  CHECK(tau(0.5, 0.0, 1).value == doctest::Approx(std::pow(0.5, 5.0 / 3.0)).epsilon(1e-15));
  CHECK(tau(0.3, 0.0, 2).value == doctest::Approx(std::pow(0.3, 7.0 / 5.0)).epsilon(1e-15));
  // Half-turn frequency at the midpoint, first group: oracle + 4-digit pin.
  const double t_half = tau(0.5, kPi, 1).value;
  CHECK(t_half == doctest::Approx(tau_oracle(0.5, kPi, 1)).epsilon(1e-13));
  CHECK(t_half == doctest::Approx(0.3772).epsilon(5e-4));
  CHECK(tau_tilde(0.5, kPi, 1).value == doctest::Approx(2.0 * t_half).epsilon(1e-15));
  CHECK(tau_tilde(0.5, kPi, 1).value == doctest::Approx(0.7544).epsilon(5e-4));
  // Endpoint values in s.
  CHECK(tau(1.0, 2.0, 1).value == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(tau(0.0, 2.0, 1).value == 0.0);
}

TEST_CASE("tau equals the Jacobian ratio root to 1e-12 relative") {
  for (int n : {1, 2, 3}) {
    for (int i = 0; i < 200; ++i) {
      const double s = (i + 0.5) / 200.0;
      for (int j = 0; j < 200; ++j) {
        const double theta = kTwoPi * j / 200.0;
        const double direct = tau(s, theta, n).value;
        const double oracle = tau_oracle(s, theta, n);
        CHECK(std::abs(direct - oracle) <= 1e-12 * oracle);
      }
    }
  }
}

TEST_CASE("tau is strictly increasing in theta and obeys the lower bound") {
  for (int n : {1, 2, 3}) {
    for (double s : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      const double floor = std::pow(s, (2.0 * n + 3.0) / (2.0 * n + 1.0));
      double prev = -1.0;
      int violations_mono = 0, violations_bound = 0;
      for (int j = 0; j < 2000; ++j) {
        const double theta = (kTwoPi - 1e-9) * j / 1999.0;
        const double v = tau(s, theta, n).value;
        if (v <= prev) ++violations_mono;
        if (v < floor) ++violations_bound;
        prev = v;
      }
      CHECK(violations_mono == 0);
      CHECK(violations_bound == 0);
    }
  }
}

TEST_CASE("tau diverges at the top frequency and is tagged infinite there") {
  CHECK_FALSE(tau(0.5, kTwoPi, 1).finite);
  CHECK_FALSE(tau(0.5, kTwoPi - 5e-13, 1).finite);  // inside the 1e-12 collar
  // For n = 1 the blow-up rate is (2pi - theta)^(-1/3):
  // each 1000x step toward the pole multiplies tau by ~10.
  CHECK(tau(0.5, kTwoPi - 1e-6, 1).finite);
  CHECK(tau(0.5, kTwoPi - 1e-6, 1).value > 60.0);
  CHECK(tau(0.5, kTwoPi - 1e-9, 1).value >
        9.0 * tau(0.5, kTwoPi - 1e-6, 1).value);
  CHECK(tau(0.5, kTwoPi - 1e-10, 1).value > 1e3);
  CHECK_FALSE(tau_tilde(0.5, kTwoPi, 1).finite);
  // inf * 0 = 0 convention carried by the value type.
  CHECK(tau(0.5, kTwoPi, 1).scaled_by(0.0).value == 0.0);
  CHECK(tau(0.5, kTwoPi, 1).scaled_by(0.0).finite);
  CHECK_FALSE(tau(0.5, kTwoPi, 1).scaled_by(2.0).finite);
}

TEST_CASE("tau domain checks") {
  CHECK_THROWS_AS(tau(-0.1, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(tau(1.1, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(tau(0.5, -0.1, 1), std::invalid_argument);
  CHECK_THROWS_AS(tau(0.5, 7.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(tau(0.5, 1.0, 0), std::invalid_argument);
}

TEST_CASE("v matches the Jacobian ratio and v0 closes the tilde identity") {
  const Rand r(31, "vheis");
  for (std::uint64_t i = 0; i < 300; ++i) {
    const HPoint x(r.uniform(-2, 2, i, 0), r.uniform(-2, 2, i, 1), r.uniform(-2, 2, i, 2));
    const HPoint y(r.uniform(-2, 2, i, 3), r.uniform(-2, 2, i, 4), r.uniform(-2, 2, i, 5));
    const double s = r.uniform(0.05, 0.95, i, 6);
    const double theta = theta_angle(x, y);
    if (theta >= kTwoPi - 1e-6) continue;

    const DistortionValue v = v_heis(s, x, y);
    REQUIRE(v.finite);
    // Independent path: Jacobian ratio over s^(2n+2).
    GeodesicParam p(std::vector<double>{1.0, 0.0}, theta);
    const double via_jac = jac_gamma(p, s) / (std::pow(s, 4) * jac_gamma(p, 1.0));
    CHECK(v.value == doctest::Approx(via_jac).epsilon(1e-11));

    const DistortionValue v0v = v0(s, x, y);
    const DistortionValue tt = tau_tilde(s, theta, 1);
    CHECK(v0v.value == doctest::Approx(s * v.value).epsilon(1e-13));
    CHECK(v0v.value == doctest::Approx(std::pow(tt.value, 3)).epsilon(1e-11));
    CHECK(v0v.value >= s * s * (1.0 - 1e-12));
  }
}

TEST_CASE("v0 diagonal value and v rejections") {
  const HPoint x(0.3, 0.1, -0.2);
  CHECK(v0(0.25, x, x).value == doctest::Approx(0.0625).epsilon(1e-15));
  CHECK_THROWS_AS(v_heis(0.5, x, x), std::invalid_argument);
  // Vertical pair: infinite distortion, finite once scaled by zero volume.
  const HPoint above = mul(x, HPoint(0.0, 0.0, 1.0));
  CHECK_FALSE(v_heis(0.5, x, above).finite);
  CHECK_FALSE(v0(0.5, x, above).finite);
}

TEST_CASE("theta = 0 values: v = s, v0 = s^2 off-diagonal") {
  const HPoint x(0.0, 0.0, 0.0);
  const HPoint y(1.0, 0.5, 0.0);  // same horizontal plane through the origin
  CHECK(v_heis(0.4, x, y).value == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(v0(0.4, x, y).value == doctest::Approx(0.16).epsilon(1e-12));
}

TEST_CASE("hat weights switch between geodesic and flat values") {
  CHECK(tau_hat(0.5, kPi, 1, true) == tau(0.5, kPi, 1).value);
  CHECK(tau_hat(0.5, kPi, 1, false) == 0.5);
  CHECK(tau_tilde_hat(0.5, kPi, 1, true) == tau_tilde(0.5, kPi, 1).value);
  CHECK(tau_tilde_hat(0.5, kPi, 1, false) == 1.0);
  // Static beats the vanishing-frequency moving weight: s > s^((2n+3)/(2n+1)).
  CHECK(tau_hat(0.5, 0.0, 1, false) > tau_hat(0.5, 0.0, 1, true));
  CHECK_THROWS_AS(tau_hat(0.5, kTwoPi, 1, true), std::domain_error);
}
