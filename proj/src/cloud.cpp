#include "heis/cloud.hpp"

#include <cmath>
#include <stdexcept>

#include "heis/cclog.hpp"
#include "heis/parallel.hpp"
#include "heis/stable.hpp"

namespace heis {

namespace {
constexpr double kPi = 3.1415926535897932384626433832795;
constexpr double kSqrt2 = 1.4142135623730950488016887242097;
} // namespace

Cloud::Cloud(std::vector<HPoint> pts, std::vector<double> w)
    : points(std::move(pts)), weights(std::move(w)) {
  if (points.size() != weights.size())
    throw std::invalid_argument("Cloud: points/weights length mismatch");
  if (points.empty()) throw std::invalid_argument("Cloud: empty");
  double sum = 0.0;
  for (double x : weights) {
    if (!(x > 0.0)) throw std::invalid_argument("Cloud: weights must be positive");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("Cloud: weights must sum to 1");
  const int dim = points[0].n();
  for (const HPoint& p : points)
    if (p.n() != dim) throw std::invalid_argument("Cloud: mixed dimensions");
}

Cloud Cloud::uniform(std::vector<HPoint> pts) {
  const std::size_t m = pts.size();
  if (m == 0) throw std::invalid_argument("Cloud: empty");
  std::vector<double> w(m, 1.0 / static_cast<double>(m));
  // Remove the rounding defect of m * (1/m) so the sum is exactly 1.
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < m; ++i) sum += w[i];
  w[m - 1] = 1.0 - sum;
  return Cloud(std::move(pts), std::move(w));
}

int Cloud::n() const { return points.empty() ? 0 : points[0].n(); }

DensitySpec DensitySpec::uniform_box(const HPoint& center,
                                     std::vector<double> half_width) {
  DensitySpec d;
  d.kind = Kind::UniformBox;
  d.center = center;
  d.half_width = std::move(half_width);
  if (d.half_width.size() != static_cast<std::size_t>(d.dim()))
    throw std::invalid_argument("DensitySpec: need one half-width per coordinate");
  for (double h : d.half_width)
    if (!(h > 0.0)) throw std::invalid_argument("DensitySpec: half-widths must be positive");
  return d;
}

DensitySpec DensitySpec::uniform_cc_ball(const HPoint& center, double radius) {
  DensitySpec d;
  d.kind = Kind::UniformCCBall;
  d.center = center;
  d.radius = radius;
  if (!(radius > 0.0)) throw std::invalid_argument("DensitySpec: radius must be positive");
  return d;
}

DensitySpec DensitySpec::gaussian_box(const HPoint& center,
                                      std::vector<double> sigma,
                                      std::vector<double> half_width) {
  DensitySpec d;
  d.kind = Kind::GaussianBox;
  d.center = center;
  d.sigma = std::move(sigma);
  d.half_width = std::move(half_width);
  const std::size_t dim = static_cast<std::size_t>(d.dim());
  if (d.sigma.size() != dim || d.half_width.size() != dim)
    throw std::invalid_argument("DensitySpec: need sigma and half-width per coordinate");
  for (std::size_t k = 0; k < dim; ++k)
    if (!(d.sigma[k] > 0.0) || !(d.half_width[k] > 0.0))
      throw std::invalid_argument("DensitySpec: scales must be positive");
  return d;
}

void DensitySpec::support_bounds(std::vector<double>& lo, std::vector<double>& hi) const {
  const std::vector<double> c = to_coords(center);
  const std::size_t dim = c.size();
  lo.resize(dim);
  hi.resize(dim);
  switch (kind) {
    case Kind::UniformBox:
    case Kind::GaussianBox:
      for (std::size_t k = 0; k < dim; ++k) {
        lo[k] = c[k] - half_width[k];
        hi[k] = c[k] + half_width[k];
      }
      return;
    case Kind::UniformCCBall: {
      // Ball at the origin: every zeta coordinate is within |chi| <= r and
      // |t| <= 2 r^2 / pi (the theta = pi endpoints).  Left translation by
      // the center shifts zeta and twists t by at most 2 |center_zeta| r.
      double cz = 0.0;
      for (std::size_t k = 0; k + 1 < dim; ++k) cz += c[k] * c[k];
      cz = std::sqrt(cz);
      const double tspan = 2.0 * radius * radius / kPi + 2.0 * cz * radius;
      for (std::size_t k = 0; k + 1 < dim; ++k) {
        lo[k] = c[k] - radius;
        hi[k] = c[k] + radius;
      }
      lo[dim - 1] = c[dim - 1] - tspan;
      hi[dim - 1] = c[dim - 1] + tspan;
      return;
    }
  }
  throw std::logic_error("DensitySpec: unknown kind");
}

double DensitySpec::normalization() const {
  switch (kind) {
    case Kind::UniformBox: {
      double v = 1.0;
      for (double h : half_width) v *= 2.0 * h;
      return v;
    }
    case Kind::UniformCCBall:
      return cc_ball_volume(n(), radius);
    case Kind::GaussianBox: {
      // Product of per-axis truncated-normal masses; the box is centered at
      // the mean, so each factor is erf(h / (sigma sqrt 2)).
      double v = 1.0;
      for (std::size_t k = 0; k < sigma.size(); ++k)
        v *= std::sqrt(2.0 * kPi) * sigma[k] * std::erf(half_width[k] / (sigma[k] * kSqrt2));
      return v;
    }
  }
  throw std::logic_error("DensitySpec: unknown kind");
}

double DensitySpec::density(const HPoint& p) const {
  const std::vector<double> x = to_coords(p);
  const std::vector<double> c = to_coords(center);
  if (x.size() != c.size()) throw std::invalid_argument("DensitySpec: dimension mismatch");
  switch (kind) {
    case Kind::UniformBox: {
      for (std::size_t k = 0; k < x.size(); ++k)
        if (std::abs(x[k] - c[k]) > half_width[k]) return 0.0;
      return 1.0 / normalization();
    }
    case Kind::UniformCCBall: {
      if (cc_dist(center, p) > radius) return 0.0;
      return 1.0 / normalization();
    }
    case Kind::GaussianBox: {
      double shape = 1.0;
      for (std::size_t k = 0; k < x.size(); ++k) {
        const double d = x[k] - c[k];
        if (std::abs(d) > half_width[k]) return 0.0;
        shape *= std::exp(-0.5 * d * d / (sigma[k] * sigma[k]));
      }
      return shape / normalization();
    }
  }
  throw std::logic_error("DensitySpec: unknown kind");
}

HPoint DensitySpec::sample(const Rand& r, std::uint64_t index) const {
  const std::vector<double> c = to_coords(center);
  const std::size_t dim = c.size();
  std::vector<double> x(dim);
  std::uint64_t ctr = 0;
  switch (kind) {
    case Kind::UniformBox: {
      for (std::size_t k = 0; k < dim; ++k)
        x[k] = c[k] + half_width[k] * (2.0 * r.u01(index, ctr++) - 1.0);
      return from_coords(x);
    }
    case Kind::UniformCCBall: {
      const double tspan = 2.0 * radius * radius / kPi;
      for (int attempt = 0; attempt < 10000; ++attempt) {
        HPoint g(n());
        for (std::size_t k = 0; k + 1 < dim; ++k)
          g.zeta[k] = radius * (2.0 * r.u01(index, ctr++) - 1.0);
        g.t = tspan * (2.0 * r.u01(index, ctr++) - 1.0);
        if (cc_dist0(g) <= radius) return mul(center, g);
      }
      throw std::runtime_error("DensitySpec: cc-ball rejection stalled");
    }
    case Kind::GaussianBox: {
      for (std::size_t k = 0; k < dim; ++k) {
        for (int attempt = 0;; ++attempt) {
          if (attempt >= 10000)
            throw std::runtime_error("DensitySpec: truncated-normal rejection stalled");
          const double d = sigma[k] * r.normal(index, ctr++);
          if (std::abs(d) <= half_width[k]) {
            x[k] = c[k] + d;
            break;
          }
        }
      }
      return from_coords(x);
    }
  }
  throw std::logic_error("DensitySpec: unknown kind");
}

Cloud sample_cloud(const DensitySpec& spec, std::size_t m, const Rand& r) {
  if (m == 0) throw std::invalid_argument("sample_cloud: need m >= 1");
  std::vector<HPoint> pts(m, HPoint(spec.n()));
  parallel_for(static_cast<std::int64_t>(m), [&](std::int64_t i) {
    pts[static_cast<std::size_t>(i)] = spec.sample(r, static_cast<std::uint64_t>(i));
  });
  return Cloud::uniform(std::move(pts));
}

double cc_ball_volume(int n, double r) {
  if (n < 1) throw std::invalid_argument("cc_ball_volume: n must be >= 1");
  if (!(r > 0.0)) throw std::invalid_argument("cc_ball_volume: radius must be positive");
  // The unit ball is the image of {|chi| <= 1, |theta| <= 2pi} under the
  // exponential map, which is injective off a null set, so the volume is the
  // integral of the Jacobian.  In polar form everything separates except
  //   J_n = int_0^pi sinc(x)^(2n-1) (sin x - x cos x) / x^3 dx
  // (x = theta/2), integrated here by composite Simpson on a smooth integrand.
  const int segments = 1 << 12;
  const double hstep = kPi / segments;
  auto f = [n](double x) {
    return std::pow(sinc(x), 2 * n - 1) * sin_minus_xcos(x) / (x * x * x);
  };
  double acc = 1.0 / 3.0 + f(kPi);  // x -> 0 limit of the integrand is 1/3
  for (int i = 1; i < segments; ++i)
    acc += (i % 2 == 1 ? 4.0 : 2.0) * f(i * hstep);
  const double jn = acc * hstep / 3.0;
  // Surface of S^(2n-1) is 2 pi^n / (n-1)!.  Collecting the chi shell
  // integral r^(2n+2)/(2n+2), the theta symmetry factor 2 and the power-of-2
  // bookkeeping of the substitution leaves 4 pi^n J_n / ((n-1)! (n+1)).
  double surf = 2.0;
  for (int k = 1; k <= n; ++k) surf *= kPi;
  for (int k = 2; k <= n - 1; ++k) surf /= k;
  const double unit = 2.0 * surf * jn / (n + 1.0);
  return unit * std::pow(r, 2 * n + 2);
}

} // namespace heis
