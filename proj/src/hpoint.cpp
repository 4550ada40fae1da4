#include "heis/hpoint.hpp"

#include <cmath>

#include "json.hpp"

namespace heis {

double HPoint::zeta_norm2() const {
  double s = 0.0;
  for (double v : zeta) s += v * v;
  return s;
}

double HPoint::zeta_norm() const { return std::sqrt(zeta_norm2()); }

namespace {

void require_same_n(const HPoint& a, const HPoint& b, const char* op) {
  if (a.zeta.size() != b.zeta.size())
    throw std::invalid_argument(std::string(op) + ": operands live in different groups");
}

} // namespace

HPoint mul(const HPoint& a, const HPoint& b) {
  require_same_n(a, b, "mul");
  HPoint out(a.n());
  double im = 0.0;  // Im sum_j a_j conj(b_j)
  for (int j = 0; j < a.n(); ++j) {
    const double ar = a.zeta[2 * j], ai = a.zeta[2 * j + 1];
    const double br = b.zeta[2 * j], bi = b.zeta[2 * j + 1];
    out.zeta[2 * j] = ar + br;
    out.zeta[2 * j + 1] = ai + bi;
    im += ai * br - ar * bi;
  }
  out.t = a.t + b.t + 2.0 * im;
  return out;
}

HPoint inv(const HPoint& a) {
  HPoint out = a;
  for (double& v : out.zeta) v = -v;
  out.t = -a.t;
  return out;
}

HPoint dilate(const HPoint& a, double lambda) {
  HPoint out = a;
  for (double& v : out.zeta) v *= lambda;
  out.t *= lambda * lambda;
  return out;
}

double koranyi_gauge(const HPoint& a) {
  const double q = a.zeta_norm2();
  return std::pow(q * q + a.t * a.t, 0.25);
}

std::vector<double> to_coords(const HPoint& a) {
  std::vector<double> c = a.zeta;
  c.push_back(a.t);
  return c;
}

HPoint from_coords(const std::vector<double>& c) {
  if (c.size() < 3 || c.size() % 2 != 1)
    throw std::invalid_argument("from_coords: need 2n+1 coordinates with n >= 1");
  std::vector<double> zeta(c.begin(), c.end() - 1);
  return HPoint(std::move(zeta), c.back());
}

std::string to_json(const HPoint& a) {
  nlohmann::json j = to_coords(a);
  return j.dump();
}

HPoint hpoint_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  if (!j.is_array()) throw std::invalid_argument("hpoint_from_json: expected an array");
  return from_coords(j.get<std::vector<double>>());
}

} // namespace heis
