#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>

#include "heis/stable.hpp"

using namespace heis;

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

namespace {

// Long double references.  The direct differences cancel catastrophically
// below ~1e-3, so the reference switches to an independent series there
// (more terms than the production code carries).
long double ref_x_minus_sin(long double x) {
  if (fabsl(x) >= 1e-3L) return x - sinl(x);
  long double term = x * x * x / 6.0L, sum = term;
  for (int k = 2; k <= 8; ++k)
    sum += (term *= -x * x / ((2.0L * k) * (2.0L * k + 1.0L)));
  return sum;
}

long double ref_sin_minus_xcos(long double x) {
  if (fabsl(x) >= 1e-3L) return sinl(x) - x * cosl(x);
  // sum_{k>=1} (-1)^(k+1) 2k x^(2k+1)/(2k+1)!
  long double sum = 0.0L, pw = x * x * x, fact = 6.0L;
  for (int k = 1; k <= 8; ++k) {
    sum += ((k % 2) ? 1.0L : -1.0L) * (2.0L * k) * pw / fact;
    pw *= x * x;
    fact *= (2.0L * k + 2.0L) * (2.0L * k + 3.0L);
  }
  return sum;
}

} // namespace

TEST_CASE("series and direct branches of the singular primitives agree") {
  for (double x : {1e-6, 1e-5, 1e-4, 1e-3, 0.05, 0.0999, 0.1001, 0.3, 1.0, 2.5}) {
    const double xs_ref = static_cast<double>(ref_x_minus_sin(x));
    const double sc_ref = static_cast<double>(ref_sin_minus_xcos(x));
    CHECK(std::abs(x_minus_sin(x) - xs_ref) <= 1e-12 * xs_ref);
    CHECK(std::abs(sin_minus_xcos(x) - sc_ref) <= 1e-12 * sc_ref);
    CHECK(x_minus_sin(-x) == -x_minus_sin(x));
    CHECK(sin_minus_xcos(-x) == -sin_minus_xcos(x));
  }
  CHECK(x_minus_sin(0.0) == 0.0);
  CHECK(sin_minus_xcos(0.0) == 0.0);
  CHECK(sinc(0.0) == 1.0);
  CHECK(haversinc(0.0) == 0.0);
}

TEST_CASE("nu is a strictly increasing bijection with nu(t) ~ t/3") {
  CHECK(nu(0.0) == 0.0);
  CHECK(nu(1e-9) == doctest::Approx(1e-9 / 3.0).epsilon(1e-12));
  // pi: (pi - 0)/(1 - (-1)) = pi/2
  CHECK(nu(3.14159265358979323846) == doctest::Approx(1.5707963267948966).epsilon(1e-14));

  // Monotone on a dense grid up to the pole.
  double prev = 0.0;
  const int m = 10000;
  for (int k = 1; k <= m; ++k) {
    const double t = (kTwoPi - 1e-9) * k / m;
    const double v = nu(t);
    CHECK(v > prev);
    prev = v;
  }
  CHECK(prev > 1e9);  // blows up at the pole
}

TEST_CASE("nu_prime matches a central difference") {
  for (double t : {1e-4, 0.01, 0.5, 1.0, 2.0, 3.0, 4.5, 6.0}) {
    const double h = 1e-6;
    const double fd = (nu(t + h) - nu(t - h)) / (2.0 * h);
    CHECK(nu_prime(t) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("nu_inverse solves nu over many magnitudes") {
  for (double y : {1e-12, 1e-6, 1e-3, 0.1, 0.5, 1.0, 1.5707963267948966, 5.0,
                   1e3, 1e6, 1e12}) {
    int iters = 0;
    const double t = nu_inverse(y, &iters);
    CHECK(iters <= 100);
    CHECK(t >= 0.0);
    CHECK(t < kTwoPi);
    // Near the pole nu jumps by ~2 ulp(theta) * nu'(theta) between adjacent
    // doubles, so the best reachable residual grows like sqrt(y).
    const double quantum = 4.0 * std::numeric_limits<double>::epsilon() *
                           kTwoPi * nu_prime(t) / y;
    const double tol = std::max(1e-11, quantum);
    CHECK(nu(t) == doctest::Approx(y).epsilon(tol));
  }
  CHECK(nu_inverse(0.0) == 0.0);
  // Round-trip theta -> nu -> theta.
  for (int k = 1; k < 200; ++k) {
    const double t = kTwoPi * k / 200.5;
    const double back = nu_inverse(nu(t));
    CHECK(back == doctest::Approx(t).epsilon(1e-12));
  }
}
