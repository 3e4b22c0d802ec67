#include "gatelab/theory.hpp"

#include <cmath>

#include "gatelab/errors.hpp"
#include "gatelab/iteration.hpp"

namespace gatelab {

namespace {

double n2(std::size_t n_local) { return static_cast<double>(n_local * n_local); }

// Differences below this are round-off and count as equality.
constexpr double kTieTolerance = 1e-12;

void require_local_dim(std::size_t n_local, const char* op) {
  if (n_local < 2) {
    throw ValidationError(std::string(op) + ": local dimension must be at least 2");
  }
}

}  // namespace

PurityPair recursion_step(PurityPair first, PurityPair current, std::size_t n_local) {
  require_local_dim(n_local, "recursion_step");
  const double d = n2(n_local);
  const double d2 = d * d;
  const double scale = 1.0 / ((d - 1.0) * (d - 1.0));
  const double x1 = first.x, y1 = first.y, xn = current.x, yn = current.y;
  const double base = 2.0 * (d + 1.0);
  const double linear = 2.0 * x1 + 2.0 * y1 + 2.0 * xn + 2.0 * yn;
  const double x_next =
      scale * (base - d * (linear - x1 * yn - y1 * xn) + d2 * (y1 * yn + x1 * xn));
  const double y_next =
      scale * (base - d * (linear - y1 * yn - x1 * xn) + d2 * (x1 * yn + y1 * xn));
  return {x_next, y_next};
}

XiEta xi_eta_step(double xi1, double eta1, std::size_t n) {
  return {std::pow(xi1, static_cast<double>(n)), std::pow(eta1, static_cast<double>(n))};
}

std::vector<PurityPair> iterate_recursion(PurityPair first, std::size_t n_max,
                                          std::size_t n_local) {
  std::vector<PurityPair> out;
  if (n_max == 0) return out;
  out.reserve(n_max);
  out.push_back(first);
  for (std::size_t n = 2; n <= n_max; ++n) {
    out.push_back(recursion_step(first, out.back(), n_local));
  }
  return out;
}

PurityPair purities_at(PurityPair first, std::size_t n, std::size_t n_local) {
  require_local_dim(n_local, "purities_at");
  const XiEta v = xi_eta_from_purities(first, n_local);
  return purities_from_xi_eta(xi_eta_step(v.xi, v.eta, n), n_local);
}

double fixed_point_purity(std::size_t n_local) { return 2.0 / (n2(n_local) + 1.0); }

TheoryCurve theorem1_curves(const GateMetrics& metrics, std::size_t n_max) {
  const std::size_t n_local = metrics.n_local;
  require_local_dim(n_local, "theorem1_curves");
  TheoryCurve curve;
  curve.c_n = c_n(n_local);
  curve.d_n = d_n(n_local);
  curve.mean_ep = haar_mean_ep(n_local);
  curve.fixed_point = fixed_point_purity(n_local);
  const double xi1 = 1.0 - metrics.ep / curve.mean_ep;
  const double eta1 = 1.0 - metrics.gt;
  for (std::size_t n = 1; n <= n_max; ++n) {
    curve.n_values.push_back(n);
    if (n == 1) {
      curve.ep.push_back(metrics.ep);
      curve.gt.push_back(metrics.gt);
      curve.x.push_back(metrics.x1);
      curve.y.push_back(metrics.y1);
      continue;
    }
    const XiEta v = xi_eta_step(xi1, eta1, n);
    curve.ep.push_back(curve.mean_ep * (1.0 - v.xi));
    curve.gt.push_back(1.0 - v.eta);
    const PurityPair p = purities_from_xi_eta(v, n_local);
    curve.x.push_back(p.x);
    curve.y.push_back(p.y);
  }
  return curve;
}

std::string to_csv(const TheoryCurve& curve) {
  std::string out = "n,mean_x,mean_y,mean_ep,mean_gt,se_x,se_y,se_ep,se_gt\n";
  for (std::size_t i = 0; i < curve.n_values.size(); ++i) {
    out += std::to_string(curve.n_values[i]);
    for (double v : {curve.x[i], curve.y[i], curve.ep[i], curve.gt[i]}) {
      out += ',';
      out += format_double(v);
    }
    out += ",0,0,0,0\n";
  }
  return out;
}

PurityPair compose_average(PurityPair u, PurityPair v, std::size_t n_local) {
  require_local_dim(n_local, "compose_average");
  const double d = n2(n_local);
  const double d2 = d * d;
  const double scale = 1.0 / ((d - 1.0) * (d - 1.0));
  const double shared = 2.0 * (d + 1.0) - 2.0 * d * (u.x + u.y + v.x + v.y);
  const double x = scale * (shared + d2 * (u.x * v.x + u.y * v.y) + d * (u.y * v.x + u.x * v.y));
  const double y = scale * (shared + d2 * (u.x * v.y + u.y * v.x) + d * (u.y * v.y + u.x * v.x));
  return {x, y};
}

double product_xi(std::span<const double> xi_values) {
  double p = 1.0;
  for (double v : xi_values) p *= v;
  return p;
}

bool corollary_predicate(const BipartiteGate& u) {
  const double ep_u = entangling_power(u);
  const double ep_u2 = entangling_power(compose(u, u, kIterateTolerance));
  return ep_u2 < ep_u * (2.0 - ep_u / haar_mean_ep(u.n_local())) - kTieTolerance;
}

bool typicality_corollary_predicate(const BipartiteGate& u) {
  const double gt_u = gate_typicality(u);
  const double gt_u2 = gate_typicality(compose(u, u, kIterateTolerance));
  return gt_u2 < gt_u * (2.0 - gt_u) - kTieTolerance;
}

bool corollary_condition(const BipartiteGate& u) {
  return corollary_predicate(principal_sqrt(u));
}

bool typicality_corollary_condition(const BipartiteGate& u) {
  return typicality_corollary_predicate(principal_sqrt(u));
}

DiagonalStats diagonal_stats(std::size_t n_local) {
  require_local_dim(n_local, "diagonal_stats");
  const double n = static_cast<double>(n_local);
  const double n2v = n * n;
  return {(2.0 * n - 1.0) / n2v, 2.0 * (n - 1.0) * (n - 1.0) / (n2v * n2v * n2v), 1.0 / n2v};
}

Asymptotic diagonal_asymptotics(std::size_t n_local, std::size_t n) {
  require_local_dim(n_local, "diagonal_asymptotics");
  if (n < 1) throw ValidationError("diagonal_asymptotics: n must be at least 1");
  const double nl = static_cast<double>(n_local);
  const double nn = static_cast<double>(n);
  Asymptotic a;
  a.dx = std::pow(2.0 / nl, nn);
  a.dy = std::pow(2.0 / nl, nn) * nn / nl;
  a.order = nn / nl;
  a.outside_regime = 4 * n > n_local;
  return a;
}

Asymptotic controlled_asymptotics(std::size_t n_local, std::size_t n) {
  require_local_dim(n_local, "controlled_asymptotics");
  if (n < 1) throw ValidationError("controlled_asymptotics: n must be at least 1");
  const double nl = static_cast<double>(n_local);
  const double nn = static_cast<double>(n);
  Asymptotic a;
  a.dx = std::pow(0.5, nn);
  a.dy = -(nn + 1.0) * std::pow(0.5, nn) / (nl * nl);
  a.order = nn / (nl * nl);
  a.outside_regime = 4 * n > n_local;
  return a;
}

std::size_t purity_crossing_time(PurityPair first, std::size_t n_local, double threshold,
                                 std::size_t n_limit) {
  const double x_inf = fixed_point_purity(n_local);
  PurityPair current = first;
  for (std::size_t n = 1; n <= n_limit; ++n) {
    if (n > 1) current = recursion_step(first, current, n_local);
    if (current.x - x_inf <= threshold) return n;
  }
  return 0;
}

XiEtaRanges ranges(std::size_t n_local) {
  require_local_dim(n_local, "ranges");
  return {-2.0 / (n2(n_local) - 1.0), 1.0, -1.0, 1.0};
}

}  // namespace gatelab
