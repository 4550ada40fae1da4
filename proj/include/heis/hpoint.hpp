#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace heis {

/// Point of the n-th Heisenberg group, coordinates (zeta, t) with
/// zeta in C^n and t real.  zeta is stored as interleaved real pairs
/// [re_1, im_1, ..., re_n, im_n]; the vertical coordinate t is kept apart.
///
/// Group law:  (zeta, t) * (zeta', t') = (zeta + zeta', t + t' + 2 Im<zeta, zeta'>)
/// with the Hermitian pairing <z, w> = sum_j z_j conj(w_j).  The law is
/// polynomial, the identity is (0, 0) and (zeta, t)^{-1} = (-zeta, -t).
struct HPoint {
  std::vector<double> zeta;  // size 2n
  double t = 0.0;

  HPoint() : zeta(2, 0.0) {}
  explicit HPoint(int n) : zeta(2 * static_cast<std::size_t>(n), 0.0) {
    if (n < 1) throw std::invalid_argument("HPoint: n must be >= 1");
  }
  HPoint(std::vector<double> zeta_, double t_) : zeta(std::move(zeta_)), t(t_) {
    if (zeta.size() < 2 || zeta.size() % 2 != 0)
      throw std::invalid_argument("HPoint: zeta must hold n >= 1 complex entries");
  }
  // Convenience for the first Heisenberg group.
  HPoint(double xi, double eta, double t_) : zeta{xi, eta}, t(t_) {}

  int n() const { return static_cast<int>(zeta.size() / 2); }
  std::complex<double> z(int j) const { return {zeta[2 * j], zeta[2 * j + 1]}; }
  void set_z(int j, std::complex<double> v) {
    zeta[2 * j] = v.real();
    zeta[2 * j + 1] = v.imag();
  }
  double zeta_norm2() const;
  double zeta_norm() const;
};

/// Ambient dimension context.  Most operations infer n from their operands;
/// the context pins it where no operand is available (sampling, parsing).
struct GroupContext {
  int n = 1;
  explicit GroupContext(int n_ = 1) : n(n_) {
    if (n < 1) throw std::invalid_argument("GroupContext: n must be >= 1");
  }
  int topological_dim() const { return 2 * n + 1; }
  int homogeneous_dim() const { return 2 * n + 2; }
};

HPoint mul(const HPoint& a, const HPoint& b);
HPoint inv(const HPoint& a);

// Anisotropic dilation (zeta, t) -> (lambda zeta, lambda^2 t); group
// automorphism scaling volume by lambda^(2n+2) and distance by lambda.
HPoint dilate(const HPoint& a, double lambda);

// Koranyi gauge (|zeta|^4 + t^2)^(1/4); homogeneous of degree 1 under dilate.
double koranyi_gauge(const HPoint& a);

// Flat coordinate vector [re_1, im_1, ..., re_n, im_n, t] and back.
std::vector<double> to_coords(const HPoint& a);
HPoint from_coords(const std::vector<double>& c);

// JSON round-trip, array layout [re_1, im_1, ..., re_n, im_n, t].
std::string to_json(const HPoint& a);
HPoint hpoint_from_json(const std::string& text);

} // namespace heis
