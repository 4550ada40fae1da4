#pragma once

#include <cstdint>
#include <vector>

#include "heis/cloud.hpp"
#include "heis/report.hpp"

namespace heis {

/// Nonnegative integrable function presented as mass times a unit-mass
/// density, so indicators of a density's support are expressible
/// (scale = support volume for a uniform density).
struct FnSpec {
  DensitySpec spec;
  double scale = 1.0;

  double value(const HPoint& p) const { return scale * spec.density(p); }
  double integral() const { return scale; }
  int n() const { return spec.n(); }

  static FnSpec indicator_box(const HPoint& center, std::vector<double> half_width);
  static FnSpec indicator_cc_ball(const HPoint& center, double radius);
  static FnSpec gaussian(const HPoint& center, std::vector<double> sigma,
                         std::vector<double> half_width, double mass = 1.0);
};

/// Hypothesis weights: Weighted divides the arguments by the angle-dependent
/// volume distortions (tau_tilde_{1-s}(theta))^(2n+1), (tau_tilde_s(theta))^(2n+1);
/// Uniform by their floors (1-s)^2, s^2; Nonweighted leaves them alone and
/// pays the constant 1/4 and the heavier exponent in the conclusion.
enum class BBLMode { Weighted, Uniform, Nonweighted };

/// p-mean ((1-s) a^p + s b^p)^(1/p) with the boundary conventions: 0
/// whenever ab = 0 (at every order, the infinite ones included), geometric
/// mean at p = 0, min at -inf, max at +inf.
double p_mean(double a, double b, double s, double p);

/// Conclusion order p / (1 + K p) where K = 2n+1 (weighted, uniform) or
/// 2n+3 (nonweighted).  +inf maps to 1/K and the admissible endpoint
/// p = -1/K maps to -inf.
double bbl_conclusion_order(double p, int K);

struct BBLCase {
  double p = 0.0;
  BBLMode mode = BBLMode::Weighted;
};

/// Minimal-h construction (n = 1 only) for every requested case on one scan
/// of the grid pair: f and g are evaluated at the cell centers of their own
/// support boxes at grid_res cells per axis, every center pair with f g > 0
/// contributes its s-intermediate point (a ring of 16 representatives when
/// the pair is vertically aligned), and per case the landing cell of h takes
/// the running max of the required p-mean.  h lives on the lattice spanned
/// by the union of the support boxes at the same pitch; landings outside
/// that box land on extension cells, so no constraint is dropped.  The
/// conclusion compares the cell sum of h against the p/(1+Kp)-mean of the
/// grid integrals of f and g.  The whole construction is repeated at
/// refine_res; each case must clear its conclusion at both resolutions, and
/// a relative shift of the h integral above 5% marks the case as aliased
/// and failing.
std::vector<VerifyReport> check_bbl_suite(const FnSpec& f, const FnSpec& g, double s,
                                          const std::vector<BBLCase>& cases,
                                          int grid_res = 15, int refine_res = 21);

/// Single-case wrapper around the suite scan.
VerifyReport check_bbl(const FnSpec& f, const FnSpec& g, double s, double p, BBLMode mode,
                       int grid_res = 15, int refine_res = 21);

} // namespace heis
