#include "heis/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "heis/cclog.hpp"
#include "heis/parallel.hpp"

namespace heis {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
} // namespace

std::vector<double> cost_matrix(const Cloud& a, const Cloud& b) {
  if (a.n() != b.n()) throw std::invalid_argument("cost_matrix: dimension mismatch");
  const std::size_t m = a.size(), k = b.size();
  std::vector<double> cost(m * k);
  parallel_for(static_cast<std::int64_t>(m), [&](std::int64_t i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double d = cc_dist(a.points[static_cast<std::size_t>(i)], b.points[j]);
      cost[static_cast<std::size_t>(i) * k + j] = 0.5 * d * d;
    }
  });
  return cost;
}

Plan solve_exact(const Cloud& a, const Cloud& b, std::size_t cap) {
  return solve_exact(a, b, cost_matrix(a, b), cap);
}

// Successive shortest augmenting paths with node potentials.  Arcs run from
// every source to every sink (uncapacitated); the residual graph adds a
// backward arc wherever flow is positive.  Potentials keep all reduced costs
// nonnegative so plain Dijkstra applies; each augmentation exhausts a supply
// or a demand, so at most m + k - 1 rounds run in the nondegenerate case.
Plan solve_exact(const Cloud& a, const Cloud& b, const std::vector<double>& cost,
                 std::size_t cap) {
  const std::size_t m = a.size(), k = b.size();
  if (m > cap || k > cap) throw std::invalid_argument("solve_exact: instance above size cap");
  if (cost.size() != m * k) throw std::invalid_argument("solve_exact: cost matrix size mismatch");

  std::vector<double> flow(m * k, 0.0);
  std::vector<double> rs = a.weights, rd = b.weights;  // remaining supply/demand
  std::vector<double> ps(m, 0.0), pt(k, kInf);         // potentials
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < m; ++i) pt[j] = std::min(pt[j], cost[i * k + j]);

  std::vector<double> ds(m), dt(k);
  std::vector<char> vs(m), vt(k);
  std::vector<int> par_t(k), par_s(m);
  const double mass_floor = 1e-15;

  const std::size_t round_cap = m * k + m + k + 16;
  std::size_t rounds = 0;
  for (std::size_t s0 = 0; s0 < m;) {
    if (rs[s0] <= mass_floor) {
      ++s0;
      continue;
    }
    if (++rounds > round_cap) throw std::runtime_error("solve_exact: augmentation cap hit");

    // Dijkstra over reduced costs, run to completion (all reachable nodes
    // settled) so the potential update below is exact.
    std::fill(ds.begin(), ds.end(), kInf);
    std::fill(dt.begin(), dt.end(), kInf);
    std::fill(vs.begin(), vs.end(), 0);
    std::fill(vt.begin(), vt.end(), 0);
    std::fill(par_t.begin(), par_t.end(), -1);
    std::fill(par_s.begin(), par_s.end(), -1);
    ds[s0] = 0.0;
    for (;;) {
      double best = kInf;
      std::size_t bi = 0;
      bool best_is_sink = false, found = false;
      for (std::size_t i = 0; i < m; ++i)
        if (!vs[i] && ds[i] < best) { best = ds[i]; bi = i; best_is_sink = false; found = true; }
      for (std::size_t j = 0; j < k; ++j)
        if (!vt[j] && dt[j] < best) { best = dt[j]; bi = j; best_is_sink = true; found = true; }
      if (!found) break;
      if (!best_is_sink) {
        vs[bi] = 1;
        const double base = ds[bi] ;
        for (std::size_t j = 0; j < k; ++j) {
          if (vt[j]) continue;
          const double rc = std::max(0.0, cost[bi * k + j] + ps[bi] - pt[j]);
          if (base + rc < dt[j]) { dt[j] = base + rc; par_t[j] = static_cast<int>(bi); }
        }
      } else {
        vt[bi] = 1;
        for (std::size_t i = 0; i < m; ++i) {
          if (vs[i] || flow[i * k + bi] <= mass_floor) continue;
          // Backward arc of a flow-carrying pair has reduced cost 0.
          if (dt[bi] < ds[i]) { ds[i] = dt[bi]; par_s[i] = static_cast<int>(bi); }
        }
      }
    }

    std::size_t t0 = k;
    double dmin = kInf;
    for (std::size_t j = 0; j < k; ++j)
      if (rd[j] > mass_floor && dt[j] < dmin) { dmin = dt[j]; t0 = j; }
    if (t0 == k) throw std::runtime_error("solve_exact: no augmenting path (unbalanced weights)");

    // Bottleneck along the path, then apply the augmentation.
    double delta = std::min(rs[s0], rd[t0]);
    for (std::size_t j = t0;;) {
      const std::size_t i = static_cast<std::size_t>(par_t[j]);
      if (i == s0) break;
      const std::size_t jb = static_cast<std::size_t>(par_s[i]);
      delta = std::min(delta, flow[i * k + jb]);
      j = jb;
    }
    for (std::size_t j = t0;;) {
      const std::size_t i = static_cast<std::size_t>(par_t[j]);
      flow[i * k + j] += delta;
      if (i == s0) break;
      const std::size_t jb = static_cast<std::size_t>(par_s[i]);
      flow[i * k + jb] -= delta;
      if (flow[i * k + jb] < mass_floor) flow[i * k + jb] = 0.0;
      j = jb;
    }
    rs[s0] -= delta;
    rd[t0] -= delta;
    if (rs[s0] < mass_floor) rs[s0] = 0.0;
    if (rd[t0] < mass_floor) rd[t0] = 0.0;

    const double cut = dmin;
    for (std::size_t i = 0; i < m; ++i) ps[i] += std::min(ds[i], cut);
    for (std::size_t j = 0; j < k; ++j) pt[j] += std::min(dt[j], cut);
  }

  Plan plan;
  plan.entries.reserve(m + k);
  double total_cost = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const double f = flow[i * k + j];
      if (f > 1e-16) {
        plan.entries.push_back({static_cast<int>(i), static_cast<int>(j), f});
        total_cost += f * cost[i * k + j];
      }
    }
  plan.cost = total_cost;
  return plan;
}

Plan solve_entropic(const Cloud& a, const Cloud& b, double reg, int max_iterations) {
  if (!(reg > 0.0)) throw std::invalid_argument("solve_entropic: reg must be positive");
  const std::size_t m = a.size(), k = b.size();
  const std::vector<double> cost = cost_matrix(a, b);
  std::vector<double> la(m), lb(k), f(m, 0.0), g(k, 0.0);
  for (std::size_t i = 0; i < m; ++i) la[i] = std::log(a.weights[i]);
  for (std::size_t j = 0; j < k; ++j) lb[j] = std::log(b.weights[j]);

  auto lse = [](const std::vector<double>& v) {
    double mx = -kInf;
    for (double x : v) mx = std::max(mx, x);
    if (mx == -kInf) return -kInf;
    double s = 0.0;
    for (double x : v) s += std::exp(x - mx);
    return mx + std::log(s);
  };

  std::vector<double> buf(std::max(m, k));
  bool converged = false;
  for (int it = 0; it < max_iterations; ++it) {
    for (std::size_t i = 0; i < m; ++i) {
      buf.resize(k);
      for (std::size_t j = 0; j < k; ++j)
        buf[j] = lb[j] + (g[j] - cost[i * k + j]) / reg;
      f[i] = -reg * lse(buf);
    }
    for (std::size_t j = 0; j < k; ++j) {
      buf.resize(m);
      for (std::size_t i = 0; i < m; ++i)
        buf[i] = la[i] + (f[i] - cost[i * k + j]) / reg;
      g[j] = -reg * lse(buf);
    }
    // Columns are exact after the g sweep; the residual sits in the rows.
    double err = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < k; ++j)
        row += std::exp(la[i] + lb[j] + (f[i] + g[j] - cost[i * k + j]) / reg);
      err += std::abs(row - a.weights[i]);
    }
    if (err <= 5e-10) {
      converged = true;
      break;
    }
  }
  if (!converged) throw std::runtime_error("solve_entropic: iteration cap before convergence");

  Plan plan;
  double total_cost = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double row = 0.0;
    std::vector<double> p(k);
    for (std::size_t j = 0; j < k; ++j) {
      p[j] = std::exp(la[i] + lb[j] + (f[i] + g[j] - cost[i * k + j]) / reg);
      row += p[j];
    }
    const double fix = a.weights[i] / row;  // exact row marginals
    for (std::size_t j = 0; j < k; ++j) {
      const double mass = p[j] * fix;
      if (mass > 0.0) {
        plan.entries.push_back({static_cast<int>(i), static_cast<int>(j), mass});
        total_cost += mass * cost[i * k + j];
      }
    }
  }
  plan.cost = total_cost;
  return plan;
}

double plan_cost(const Plan& p, const std::vector<double>& cost, std::size_t ncols) {
  double s = 0.0;
  for (const PlanEntry& e : p.entries)
    s += e.mass * cost[static_cast<std::size_t>(e.i) * ncols + static_cast<std::size_t>(e.j)];
  return s;
}

void validate_plan(const Plan& p, const Cloud& a, const Cloud& b, double tol) {
  std::vector<double> row(a.size(), 0.0), col(b.size(), 0.0);
  for (const PlanEntry& e : p.entries) {
    if (e.i < 0 || e.j < 0 || static_cast<std::size_t>(e.i) >= a.size() ||
        static_cast<std::size_t>(e.j) >= b.size())
      throw std::invalid_argument("validate_plan: entry index out of range");
    if (!(e.mass > 0.0)) throw std::invalid_argument("validate_plan: nonpositive mass");
    row[static_cast<std::size_t>(e.i)] += e.mass;
    col[static_cast<std::size_t>(e.j)] += e.mass;
  }
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(row[i] - a.weights[i]) > tol)
      throw std::invalid_argument("validate_plan: row marginal off");
  for (std::size_t j = 0; j < b.size(); ++j)
    if (std::abs(col[j] - b.weights[j]) > tol)
      throw std::invalid_argument("validate_plan: column marginal off");
}

double brute_force_cost(const Cloud& a, const Cloud& b) {
  const std::size_t m = a.size();
  if (m != b.size() || m > 9)
    throw std::invalid_argument("brute_force_cost: equal sizes <= 9 only");
  for (std::size_t i = 0; i < m; ++i)
    if (std::abs(a.weights[i] - 1.0 / static_cast<double>(m)) > 1e-12 ||
        std::abs(b.weights[i] - 1.0 / static_cast<double>(m)) > 1e-12)
      throw std::invalid_argument("brute_force_cost: uniform weights only");
  const std::vector<double> cost = cost_matrix(a, b);
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  double best = kInf;
  do {
    double c = 0.0;
    for (std::size_t i = 0; i < m; ++i) c += cost[i * m + perm[i]];
    best = std::min(best, c);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best / static_cast<double>(m);
}

PairGeo pair_geo(const HPoint& x, const HPoint& y, double s) {
  const HPoint g = mul(inv(x), y);
  const LogResult lr = cc_log(g, GroupContext(g.n()));
  PairGeo r;
  r.theta = lr.at_origin ? 0.0 : std::abs(lr.param.theta);
  r.dist = lr.param.chi_norm();
  r.on_center = lr.on_center;
  r.mid = mul(x, gamma(lr.param, s));
  return r;
}

Cloud interpolate(const Plan& p, const Cloud& a, const Cloud& b, double s) {
  if (!(s > 0.0) || !(s < 1.0)) throw std::invalid_argument("interpolate: s must be in (0,1)");
  if (p.entries.empty()) throw std::invalid_argument("interpolate: empty plan");
  const std::size_t ne = p.entries.size();
  std::vector<PairGeo> geo(ne);
  parallel_for(static_cast<std::int64_t>(ne), [&](std::int64_t e) {
    const PlanEntry& pe = p.entries[static_cast<std::size_t>(e)];
    geo[static_cast<std::size_t>(e)] =
        pair_geo(a.points[static_cast<std::size_t>(pe.i)],
                 b.points[static_cast<std::size_t>(pe.j)], s);
  });
  double diameter = 0.0;
  for (const PairGeo& ge : geo) diameter = std::max(diameter, ge.dist);
  const double static_below = 1e-9 * diameter;

  std::vector<HPoint> pts;
  std::vector<double> w;
  pts.reserve(ne);
  w.reserve(ne);
  double total = 0.0;
  for (std::size_t e = 0; e < ne; ++e) {
    const PlanEntry& pe = p.entries[e];
    pts.push_back(geo[e].dist <= static_below
                      ? a.points[static_cast<std::size_t>(pe.i)]
                      : geo[e].mid);
    w.push_back(pe.mass);
    total += pe.mass;
  }
  for (double& x : w) x /= total;
  double sum = 0.0;
  for (std::size_t e = 0; e + 1 < ne; ++e) sum += w[e];
  if (1.0 - sum > 0.0) w[ne - 1] = 1.0 - sum;
  return Cloud(std::move(pts), std::move(w));
}

} // namespace heis
