#include "doctest.h"

#include <cmath>
#include <vector>

#include "heis/geodesic.hpp"
#include "heis/hpoint.hpp"
#include "heis/rng.hpp"

using namespace heis;

namespace {

HPoint random_point(const Rand& r, std::uint64_t i, int n, double box = 2.0) {
  HPoint p(n);
  for (std::size_t k = 0; k < p.zeta.size(); ++k)
    p.zeta[k] = r.uniform(-box, box, i, k);
  p.t = r.uniform(-box, box, i, 99);
  return p;
}

double max_coord_diff(const HPoint& a, const HPoint& b) {
  double m = std::abs(a.t - b.t);
  for (std::size_t k = 0; k < a.zeta.size(); ++k)
    m = std::max(m, std::abs(a.zeta[k] - b.zeta[k]));
  return m;
}

// Determinant of the coordinate differential of `f` at p, central differences.
template <typename F>
double numeric_jacobian_det(const F& f, const HPoint& p, double h = 1e-5) {
  const int d = 2 * p.n() + 1;
  std::vector<std::vector<double>> J(d, std::vector<double>(d));
  for (int c = 0; c < d; ++c) {
    std::vector<double> up = to_coords(p), dn = to_coords(p);
    up[c] += h;
    dn[c] -= h;
    const auto fu = to_coords(f(from_coords(up)));
    const auto fd = to_coords(f(from_coords(dn)));
    for (int r = 0; r < d; ++r) J[r][c] = (fu[r] - fd[r]) / (2.0 * h);
  }
  // Gaussian elimination with partial pivoting.
  double det = 1.0;
  for (int c = 0; c < d; ++c) {
    int piv = c;
    for (int r = c + 1; r < d; ++r)
      if (std::abs(J[r][c]) > std::abs(J[piv][c])) piv = r;
    if (piv != c) { std::swap(J[piv], J[c]); det = -det; }
    det *= J[c][c];
    if (J[c][c] == 0.0) return 0.0;
    for (int r = c + 1; r < d; ++r) {
      const double m = J[r][c] / J[c][c];
      for (int k = c; k < d; ++k) J[r][k] -= m * J[c][k];
    }
  }
  return det;
}

} // namespace

TEST_CASE("group law: identity, inverse, frozen product") {
  const HPoint e(1);
  const HPoint a(1.0, 0.0, 0.0);
  const HPoint b(0.0, 1.0, 0.0);
  const HPoint ab = mul(a, b);
  CHECK(ab.zeta[0] == 1.0);
  CHECK(ab.zeta[1] == 1.0);
  CHECK(ab.t == -2.0);  // 2 Im<1, i-bar> = -2: the product picks up area
  const HPoint ba = mul(b, a);
  CHECK(ba.t == 2.0);   // noncommutative: reversed order flips the area term

  CHECK(max_coord_diff(mul(a, e), a) == 0.0);
  CHECK(max_coord_diff(mul(e, a), a) == 0.0);
  CHECK(max_coord_diff(mul(a, inv(a)), e) == 0.0);

  CHECK_THROWS_AS(mul(HPoint(1), HPoint(2)), std::invalid_argument);
}

TEST_CASE("associativity to 1e-12 on random triples, n = 1, 2, 3") {
  const Rand r(7, "assoc");
  for (int n : {1, 2, 3}) {
    for (std::uint64_t i = 0; i < 200; ++i) {
      const HPoint x = random_point(r.sub(n), 3 * i, n);
      const HPoint y = random_point(r.sub(n), 3 * i + 1, n);
      const HPoint z = random_point(r.sub(n), 3 * i + 2, n);
      CHECK(max_coord_diff(mul(mul(x, y), z), mul(x, mul(y, z))) <= 1e-12);
    }
  }
}

TEST_CASE("left translations have unit Jacobian (numerical differentiation)") {
  const Rand r(11, "ltrans");
  for (int n : {1, 2}) {
    for (std::uint64_t i = 0; i < 20; ++i) {
      const HPoint x = random_point(r.sub(n), 2 * i, n);
      const HPoint y = random_point(r.sub(n), 2 * i + 1, n);
      const double det = numeric_jacobian_det([&](const HPoint& p) { return mul(x, p); }, y);
      CHECK(det == doctest::Approx(1.0).epsilon(1e-8));
    }
  }
}

TEST_CASE("dilations scale volume by lambda^(2n+2) and respect the group law") {
  const Rand r(13, "dilate");
  for (int n : {1, 2}) {
    for (std::uint64_t i = 0; i < 10; ++i) {
      const HPoint x = random_point(r.sub(n), 2 * i, n);
      const HPoint y = random_point(r.sub(n), 2 * i + 1, n);
      const double lam = 0.5 + r.u01(i, 7);
      // homomorphism: rho_lam(x y) = rho_lam(x) rho_lam(y)
      CHECK(max_coord_diff(dilate(mul(x, y), lam), mul(dilate(x, lam), dilate(y, lam))) <= 1e-12);
      const double det =
          numeric_jacobian_det([&](const HPoint& p) { return dilate(p, lam); }, y);
      CHECK(det == doctest::Approx(std::pow(lam, 2 * n + 2)).epsilon(1e-7));
    }
  }
}

TEST_CASE("koranyi gauge: frozen values and degree-1 homogeneity") {
  CHECK(koranyi_gauge(HPoint(0.0, 0.0, 1.0)) == 1.0);
  CHECK(koranyi_gauge(HPoint(1.0, 0.0, 0.0)) == 1.0);
  CHECK(koranyi_gauge(HPoint(1.0, 1.0, 1.0)) == doctest::Approx(std::pow(5.0, 0.25)).epsilon(1e-15));
  const Rand r(17, "gauge");
  for (std::uint64_t i = 0; i < 50; ++i) {
    const HPoint p = random_point(r, i, 1);
    const double lam = 0.25 + 2.0 * r.u01(i, 5);
    CHECK(koranyi_gauge(dilate(p, lam)) ==
          doctest::Approx(lam * koranyi_gauge(p)).epsilon(1e-13));
  }
}

TEST_CASE("geodesic frozen endpoint: |chi| = pi/2, theta = pi lands at (0, -1, pi/2)") {
  const GeodesicParam p(std::complex<double>(1.5707963267948966, 0.0), 3.14159265358979323846);
  const HPoint g = gamma(p, 1.0);
  CHECK(std::abs(g.zeta[0]) <= 1e-15);
  CHECK(g.zeta[1] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(g.t == doctest::Approx(1.5707963267948966).epsilon(1e-14));
  CHECK(max_coord_diff(gamma(p, 0.0), HPoint(1)) == 0.0);
}

TEST_CASE("geodesic small-theta regime matches the long double closed form to 1e-12") {
  const GeodesicParam base(std::complex<double>(0.7, -0.4), 0.0);
  for (double th : {1e-8, 1e-6, 1e-5, 1e-4, 2e-4, 1e-2}) {
    GeodesicParam p = base;
    p.theta = th;
    for (double s : {0.3, 1.0}) {
      const HPoint g = gamma(p, s);
      const long double lth = th, ls = s;
      const long double cr = 0.7L, ci = -0.4L;
      const long double ur = sinl(lth * ls) / lth;
      // cos(x) - 1 = -2 sin^2(x/2), exact to the last bit; the x - sin x
      // difference switches to a series where the direct form cancels.
      const long double hs = sinl(lth * ls / 2.0L);
      const long double ui = -2.0L * hs * hs / lth;
      const long double q = cr * cr + ci * ci;
      const long double x = lth * ls;
      const long double xms =
          (fabsl(x) >= 1e-3L)
              ? x - sinl(x)
              : (x * x * x / 6.0L) *
                    (1.0L - x * x / 20.0L * (1.0L - x * x / 42.0L * (1.0L - x * x / 72.0L)));
      const long double tz = 2.0L * q * xms / (lth * lth);
      CHECK(g.zeta[0] == doctest::Approx(static_cast<double>(ur * cr - ui * ci)).epsilon(1e-12));
      CHECK(g.zeta[1] == doctest::Approx(static_cast<double>(ur * ci + ui * cr)).epsilon(1e-12));
      CHECK(g.t == doctest::Approx(static_cast<double>(tz)).epsilon(1e-12));
    }
  }
}

TEST_CASE("geodesic reversal: gamma_1(-chi e^{-i theta}, -theta) = -gamma_1(chi, theta)") {
  const Rand r(23, "reversal");
  for (int n : {1, 2}) {
    for (std::uint64_t i = 0; i < 100; ++i) {
      GeodesicParam p(std::vector<double>(2 * n), r.uniform(-6.2, 6.2, i, 0));
      for (std::size_t k = 0; k < p.chi.size(); ++k) p.chi[k] = r.uniform(-2, 2, i, k + 1);
      GeodesicParam q(std::vector<double>(2 * n), -p.theta);
      const double c = std::cos(-p.theta), s = std::sin(-p.theta);
      for (int j = 0; j < n; ++j) {
        q.chi[2 * j] = -(p.chi[2 * j] * c - p.chi[2 * j + 1] * s);
        q.chi[2 * j + 1] = -(p.chi[2 * j] * s + p.chi[2 * j + 1] * c);
      }
      CHECK(max_coord_diff(gamma(q, 1.0), inv(gamma(p, 1.0))) <= 1e-12);
    }
  }
}

TEST_CASE("jac_gamma: frozen values and domain") {
  // theta = 0, |chi| = 1, s = 1/2, n = 1: s^5/3 = 1/96.
  CHECK(jac_gamma(GeodesicParam(std::complex<double>(1.0, 0.0), 0.0), 0.5) ==
        doctest::Approx(1.0 / 96.0).epsilon(1e-15));
  // theta = pi, s = 1, |chi| = 1, n = 1: 16/pi^4.
  CHECK(jac_gamma(GeodesicParam(std::complex<double>(0.0, 1.0), 3.14159265358979323846), 1.0) ==
        doctest::Approx(16.0 / std::pow(3.14159265358979323846, 4)).epsilon(1e-14));
  CHECK_THROWS_AS(jac_gamma(GeodesicParam(std::complex<double>(1.0, 0.0),
                                          6.283185307179586), 0.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(jac_gamma(GeodesicParam(std::complex<double>(1.0, 0.0),
                                          -6.283185307179586), 0.5),
                  std::invalid_argument);
}

TEST_CASE("jac_gamma ratio depends only on |chi| through the quadratic prefactor") {
  const Rand r(29, "jacratio");
  for (int n : {1, 2, 3}) {
    for (std::uint64_t i = 0; i < 50; ++i) {
      const double th = r.uniform(-6.0, 6.0, i, 0);
      const double s = r.uniform(0.05, 0.95, i, 1);
      GeodesicParam a(std::vector<double>(2 * n), th);
      GeodesicParam b(std::vector<double>(2 * n), th);
      for (std::size_t k = 0; k < a.chi.size(); ++k) {
        a.chi[k] = r.uniform(-2, 2, i, 10 + k);
        b.chi[k] = r.uniform(-2, 2, i, 40 + k);
      }
      const double ra = jac_gamma(a, s) / jac_gamma(a, 1.0);
      const double rb = jac_gamma(b, s) / jac_gamma(b, 1.0);
      // The s-to-1 ratio forgets |chi| and the direction entirely.
      CHECK(ra == doctest::Approx(rb).epsilon(1e-12));
      // And the raw value scales as |chi|^2.
      CHECK(jac_gamma(a, s) * b.chi_norm2() ==
            doctest::Approx(jac_gamma(b, s) * a.chi_norm2()).epsilon(1e-12));
      // Sign of theta is invisible.
      GeodesicParam neg = a;
      neg.theta = -th;
      CHECK(jac_gamma(neg, s) == doctest::Approx(jac_gamma(a, s)).epsilon(1e-13));
    }
  }
}

TEST_CASE("point serialization round-trips and validates") {
  const HPoint p(0.25, -1.5, 3.0);
  const HPoint q = hpoint_from_json(to_json(p));
  CHECK(max_coord_diff(p, q) == 0.0);
  CHECK(to_json(p) == "[0.25,-1.5,3.0]");

  HPoint w(2);
  w.set_z(0, {1.0, 2.0});
  w.set_z(1, {3.0, 4.0});
  w.t = -0.5;
  CHECK(max_coord_diff(hpoint_from_json(to_json(w)), w) == 0.0);

  CHECK_THROWS_AS(hpoint_from_json("[1.0, 2.0]"), std::invalid_argument);
  CHECK_THROWS_AS(hpoint_from_json("{\"t\": 1}"), std::invalid_argument);
  CHECK_THROWS_AS(from_coords({1.0, 2.0}), std::invalid_argument);
}
