#include "heis/stable.hpp"

#include <algorithm>
#include <limits>

namespace heis {

double x_minus_sin(double x) {
  const double ax = std::abs(x);
  if (ax < 0.1) {
    const double x2 = x * x;
    // x^3/6 * (1 - x^2/20 + x^4/840 - x^6/60480)
    return x * x2 / 6.0 *
           (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0)));
  }
  return x - std::sin(x);
}

double sin_minus_xcos(double x) {
  const double ax = std::abs(x);
  if (ax < 0.1) {
    const double x2 = x * x;
    // x^3/3 * (1 - x^2/10 + x^4/280 - x^6/15120)
    return x * x2 / 3.0 *
           (1.0 - x2 / 10.0 * (1.0 - x2 / 28.0 * (1.0 - x2 / 54.0)));
  }
  return std::sin(x) - x * std::cos(x);
}

double sinc(double x) {
  if (std::abs(x) < 1e-8) {
    return 1.0 - x * x / 6.0;
  }
  return std::sin(x) / x;
}

double haversinc(double x) {
  if (std::abs(x) < 1e-8) {
    return 0.5 * x;
  }
  const double h = std::sin(0.5 * x);
  return 2.0 * h * h / x;
}

double nu(double t) {
  if (std::abs(t) < 1e-3) {
    const double t2 = t * t;
    // t/3 * (1 + t^2/30 + t^4/840)
    return t / 3.0 * (1.0 + t2 / 30.0 + t2 * t2 / 840.0);
  }
  // 1 - cos t = 2 sin^2(t/2) keeps relative accuracy near the 2pi pole.
  const double h = std::sin(0.5 * t);
  return (t - std::sin(t)) / (2.0 * h * h);
}

double nu_prime(double t) {
  if (std::abs(t) < 1e-3) {
    const double t2 = t * t;
    return 1.0 / 3.0 + t2 / 30.0 + t2 * t2 / 504.0;
  }
  const double h = std::sin(0.5 * t);
  const double c = 2.0 * h * h;
  return 1.0 - (t - std::sin(t)) * std::sin(t) / (c * c);
}

double nu_inverse(double y, int* iters_out) {
  constexpr double two_pi = 6.283185307179586476925286766559;
  if (iters_out) *iters_out = 0;
  if (y <= 0.0) return 0.0;

  // Bracket [lo, hi] always satisfies nu(lo) <= y <= nu(hi).
  double lo = 0.0;
  double hi = two_pi - 1e-12;
  if (y >= nu(hi)) return hi;

  // Initial guess: series inversion for small y, pole asymptote
  // nu(t) ~ 4pi/(2pi - t)^2 for y large, linear-ish in between.
  double t;
  if (y < 0.7) {
    t = 3.0 * y * (1.0 - 0.1 * (3.0 * y) * (3.0 * y) / 10.0);
  } else if (y > 4.0) {
    t = two_pi - std::sqrt(4.0 * two_pi / (2.0 * y));
  } else {
    t = 1.8 * y;
  }
  t = std::clamp(t, 1e-12, hi);

  int it = 0;
  for (; it < 100; ++it) {
    const double f = nu(t) - y;
    // Residual-based termination: a small theta step near the 2pi pole says
    // nothing about the residual, which is what the round-trip needs.
    if (std::abs(f) <= 5e-13 * y) break;
    if (f > 0.0) hi = t; else lo = t;
    double tn = t - f / nu_prime(t);
    if (!(tn > lo) || !(tn < hi)) {
      tn = 0.5 * (lo + hi);  // bisection fallback keeps the bracket
    }
    if (tn == t || hi - lo < 1e-15) { t = tn; break; }
    t = tn;
  }
  if (iters_out) *iters_out = it + 1;
  return t;
}

} // namespace heis
