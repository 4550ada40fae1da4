#include "heis/geodesic.hpp"

#include <cmath>
#include <stdexcept>

#include "heis/stable.hpp"

namespace heis {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

double GeodesicParam::chi_norm2() const {
  double s = 0.0;
  for (double v : chi) s += v * v;
  return s;
}

double GeodesicParam::chi_norm() const { return std::sqrt(chi_norm2()); }

HPoint gamma(const GeodesicParam& p, double s) {
  const int n = p.n();
  HPoint out(n);
  const double th = p.theta;
  if (th == 0.0) {
    for (std::size_t k = 0; k < p.chi.size(); ++k) out.zeta[k] = s * p.chi[k];
    out.t = 0.0;
    return out;
  }
  // i (e^{-i theta s} - 1)/theta = (sin(theta s) + i (cos(theta s) - 1))/theta;
  // both parts stay accurate down to theta s = 0 (sinc / haversinc forms).
  const double ur = s * sinc(th * s);
  const double ui = -s * haversinc(th * s);
  for (int j = 0; j < n; ++j) {
    const double cr = p.chi[2 * j], ci = p.chi[2 * j + 1];
    out.zeta[2 * j] = ur * cr - ui * ci;
    out.zeta[2 * j + 1] = ur * ci + ui * cr;
  }
  out.t = 2.0 * p.chi_norm2() * x_minus_sin(th * s) / (th * th);
  return out;
}

double jac_gamma(const GeodesicParam& p, double s) {
  const int n = p.n();
  const double th = p.theta;
  if (std::abs(std::abs(th) - kTwoPi) < 1e-12)
    throw std::invalid_argument("jac_gamma: |theta| = 2pi is outside the domain");
  const double q = p.chi_norm2();
  if (th == 0.0) {
    return std::pow(s, 2 * n + 3) * q / 3.0;
  }
  const double half = 0.5 * th * s;
  // (sin(theta s/2)/theta)^(2n-1) written via sinc to survive theta s -> 0.
  const double ratio = 0.5 * s * sinc(half);
  const double lead = std::ldexp(s * q, 2 * n + 2);  // 2^(2n+2) s |chi|^2
  return lead * std::pow(ratio, 2 * n - 1) * sin_minus_xcos(half) / (th * th * th);
}

} // namespace heis
