#pragma once

#include <cstdint>
#include <vector>

#include "heis/hpoint.hpp"
#include "heis/rng.hpp"

namespace heis {

/// Weighted point cloud, the discrete stand-in for a compactly supported
/// probability measure.  Weights are strictly positive and sum to 1.
struct Cloud {
  std::vector<HPoint> points;
  std::vector<double> weights;

  Cloud() = default;
  Cloud(std::vector<HPoint> pts, std::vector<double> w);  // validates
  static Cloud uniform(std::vector<HPoint> pts);

  std::size_t size() const { return points.size(); }
  int n() const;
};

/// Analytic probability density on H^n with a matching sampler.  Three
/// shapes cover the experiment suite:
///   uniform-box:      constant on an axis-aligned box,
///   uniform-cc-ball:  constant on a cc-metric ball (normalization from a
///                     radial-frequency quadrature, exact to ~1e-12),
///   gaussian-box:     product of per-axis normals truncated to a box.
struct DensitySpec {
  enum class Kind { UniformBox, UniformCCBall, GaussianBox };

  Kind kind = Kind::UniformBox;
  HPoint center;
  std::vector<double> half_width;  // per coordinate, size 2n+1 (box kinds)
  std::vector<double> sigma;       // per coordinate (gaussian kind)
  double radius = 0.0;             // cc-ball kind

  static DensitySpec uniform_box(const HPoint& center,
                                 std::vector<double> half_width);
  static DensitySpec uniform_cc_ball(const HPoint& center, double radius);
  static DensitySpec gaussian_box(const HPoint& center,
                                  std::vector<double> sigma,
                                  std::vector<double> half_width);

  int n() const { return center.n(); }
  int dim() const { return 2 * center.n() + 1; }

  /// Density value; 0 outside the support.
  double density(const HPoint& p) const;

  /// One draw.  Deterministic in (r, index); rejection loops advance an
  /// internal counter so distinct indices never share variates.
  HPoint sample(const Rand& r, std::uint64_t index) const;

  /// Axis-aligned box containing the support.
  void support_bounds(std::vector<double>& lo, std::vector<double>& hi) const;

  /// Integral of the unnormalized shape (so density = shape / this).
  double normalization() const;
};

/// m iid draws with uniform weights 1/m.
Cloud sample_cloud(const DensitySpec& spec, std::size_t m, const Rand& r);

/// Lebesgue volume of the cc ball of radius r in H^n, by quadrature over
/// the geodesic-parameter polar representation (exact map, smooth
/// integrand).  Accurate to ~1e-12 relative.
double cc_ball_volume(int n, double r);

} // namespace heis
