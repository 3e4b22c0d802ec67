#pragma once

// Closed-form predictions for gates iterated with Haar-random local gates in
// between. With xi = C_N (x + y - 4/(N^2+1)) and eta = D_N (x - y), averaging
// over the local gates maps (xi_n, eta_n) to (xi_1 xi_n, eta_1 eta_n), so
//   <e_p(U^(n))> = ep_bar (1 - xi_1^n),   <g_t(U^(n))> = 1 - eta_1^n.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "gatelab/gate_algebra.hpp"
#include "gatelab/measures.hpp"

namespace gatelab {

/// One step of the affine purity recursion, written term by term:
/// (X_n, Y_n) -> (X_{n+1}, Y_{n+1}) given the single-gate purities (X_1, Y_1).
PurityPair recursion_step(PurityPair first, PurityPair current, std::size_t n_local);

/// (xi_1^n, eta_1^n).
XiEta xi_eta_step(double xi1, double eta1, std::size_t n);

/// (X_n, Y_n) for n = 1..n_max by repeated recursion_step.
std::vector<PurityPair> iterate_recursion(PurityPair first, std::size_t n_max,
                                          std::size_t n_local);

/// (X_n, Y_n) through the decoupled xi/eta powers.
PurityPair purities_at(PurityPair first, std::size_t n, std::size_t n_local);

/// Fixed point 2 / (N^2 + 1) of both purities.
double fixed_point_purity(std::size_t n_local);

struct TheoryCurve {
  std::vector<std::size_t> n_values;
  std::vector<double> ep;
  std::vector<double> gt;
  std::vector<double> x;
  std::vector<double> y;
  double c_n = 0.0;
  double d_n = 0.0;
  double mean_ep = 0.0;
  double fixed_point = 0.0;
};

/// Averaged e_p, g_t, X, Y for n = 1..n_max. Entry n = 1 is the input.
TheoryCurve theorem1_curves(const GateMetrics& metrics, std::size_t n_max);

/// Same schema as the iteration trace CSV, standard-error columns zero.
std::string to_csv(const TheoryCurve& curve);

/// Purities of U (U^A (x) U^B) V averaged over the local pair, from the
/// purities of U and V alone. Symmetric in its two arguments.
PurityPair compose_average(PurityPair u, PurityPair v, std::size_t n_local);

/// xi of a heterogeneous sequence: the product of the single-gate values.
double product_xi(std::span<const double> xi_values);

/// True iff e_p(u^2) < e_p(u) (2 - e_p(u) / ep_bar): then some local pair W
/// gives e_p(u W u) > e_p(u^2). Strict: sides within 1e-12 count as equal,
/// so local gates give false.
bool corollary_predicate(const BipartiteGate& u);

/// The gate-typicality analogue: g_t(u^2) < g_t(u) (2 - g_t(u)).
bool typicality_corollary_predicate(const BipartiteGate& u);

/// Enhancement condition for a gate U: the predicates above applied to its
/// principal square root, i.e. whether some W makes e_p(sqrt(U) W sqrt(U))
/// exceed e_p(U).
bool corollary_condition(const BipartiteGate& u);
bool typicality_corollary_condition(const BipartiteGate& u);

struct DiagonalStats {
  double mean_x1 = 0.0;
  double var_x1 = 0.0;
  double y1 = 0.0;
};

/// Mean and variance of X_1 over random diagonal gates, and the fixed Y_1.
DiagonalStats diagonal_stats(std::size_t n_local);

/// Leading asymptotic values. `order` is the size of the relative correction
/// (n/N or n/N^2); `outside_regime` flags n > N/4, where n << N fails.
struct Asymptotic {
  double dx = 0.0;
  double dy = 0.0;
  double order = 0.0;
  bool outside_regime = false;
};

/// Diagonal family: dx = 2^n / N^n, dy = 2^n n / N^(n+1) (order of |Delta Y_n|).
Asymptotic diagonal_asymptotics(std::size_t n_local, std::size_t n);

/// Controlled family: dx = 2^-n, dy = -(n+1) 2^-n / N^2.
Asymptotic controlled_asymptotics(std::size_t n_local, std::size_t n);

/// First n with X_n - X_inf <= threshold, scanning the exact recursion from
/// `first` up to n_limit. Returns 0 if never reached.
std::size_t purity_crossing_time(PurityPair first, std::size_t n_local, double threshold,
                                 std::size_t n_limit = 1000);

struct XiEtaRanges {
  double xi_min = 0.0;
  double xi_max = 0.0;
  double eta_min = 0.0;
  double eta_max = 0.0;
};

/// xi_1 in [-2/(N^2-1), 1], eta_1 in [-1, 1]. The xi lower bound is not
/// attained for N = 2 (the minimum there is -1/9, at CNOT).
XiEtaRanges ranges(std::size_t n_local);

}  // namespace gatelab
