#pragma once

#include <cmath>

namespace heis {

// Primitives with removable singularities at 0.  Each switches to a truncated
// Taylor series below a threshold chosen so both branches agree to ~1e-15
// relative; the cancellation-prone direct forms are only used where safe.

// x - sin(x).  Leading order x^3/6.
double x_minus_sin(double x);

// sin(x) - x*cos(x).  Leading order x^3/3.
double sin_minus_xcos(double x);

// sin(x)/x, equal to 1 at x = 0.
double sinc(double x);

// 2*sin^2(x/2)/x = (1 - cos x)/x, equal to 0 at x = 0.
double haversinc(double x);

// nu(t) = (t - sin t)/(1 - cos t): strictly increasing bijection (0,2pi) -> (0,inf),
// odd through 0 with nu(t) ~ t/3.
double nu(double t);

// d nu / d t = 1 - (t - sin t) sin t / (1 - cos t)^2, with nu'(0) = 1/3.
double nu_prime(double t);

// Inverse of nu on [0, 2pi): returns theta >= 0 with nu(theta) = y for y >= 0.
// Safeguarded Newton, |step| tolerance 1e-13, hard cap 100 iterations.
// iters_out, if non-null, receives the iteration count (for diagnostics).
double nu_inverse(double y, int* iters_out = nullptr);

} // namespace heis
