#pragma once

// Scalar characterizations of a bipartite gate.
//
// Everything here derives from the two purities
//   x = tr rho_R^2,  rho_R = U_R U_R^dagger / N^2
//   y = tr rho_T^2,  rho_T = S U_T U_T^dagger S / N^2
// with E(U) = 1 - x and E(US) = 1 - y.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "gatelab/gate_algebra.hpp"

namespace gatelab {

struct PurityPair {
  double x = 0.0;
  double y = 0.0;
};

struct XiEta {
  double xi = 0.0;
  double eta = 0.0;
};

struct GateMetrics {
  std::size_t n_local = 0;
  double x1 = 0.0;
  double y1 = 0.0;
  double e_op = 0.0;       // E(U)
  double e_op_swap = 0.0;  // E(US)
  double ep = 0.0;         // entangling power
  double gt = 0.0;         // gate-typicality
  double xi1 = 0.0;
  double eta1 = 0.0;
};

/// Normalized operator Schmidt coefficients lambda_i / N^2, descending.
struct SchmidtSpectrum {
  std::vector<double> values;
};

/// C_N = N^2 (N^2 + 1) / (N^2 - 1)^2.
double c_n(std::size_t n_local);
/// D_N = N^2 / (N^2 - 1).
double d_n(std::size_t n_local);
/// Haar average of e_p over U(N^2): (N - 1)^2 / (N^2 + 1).
double haar_mean_ep(std::size_t n_local);
/// E(S) = (N^2 - 1) / N^2.
double swap_operator_entanglement(std::size_t n_local);
/// Upper bound of e_p: (N - 1) / (N + 1).
double max_entangling_power(std::size_t n_local);

ComplexMatrix rho_r(const BipartiteGate& u);
ComplexMatrix rho_t(const BipartiteGate& u);

/// (tr rho_R^2, tr rho_T^2) from Frobenius norms, no eigendecomposition.
PurityPair purities(const BipartiteGate& u);

/// tr rho^2 for a Hermitian rho.
double purity(const ComplexMatrix& rho);

double operator_entanglement(const BipartiteGate& u);
double entangling_power(const BipartiteGate& u);
double gate_typicality(const BipartiteGate& u);
XiEta xi_eta(const BipartiteGate& u);

// Closed-form maps from purities; the gate-level functions above use these.
double entangling_power_from_purities(PurityPair p, std::size_t n_local);
double gate_typicality_from_purities(PurityPair p, std::size_t n_local);
XiEta xi_eta_from_purities(PurityPair p, std::size_t n_local);
PurityPair purities_from_xi_eta(XiEta v, std::size_t n_local);
GateMetrics metrics_from_purities(PurityPair p, std::size_t n_local);

GateMetrics gate_metrics(const BipartiteGate& u);

/// Eigenvalues of rho_R(u). Values in [-1e-12, 0) are clamped to zero; values
/// below -1e-8 raise DiagnosticsError.
SchmidtSpectrum schmidt_spectrum(const BipartiteGate& u);

/// tr rho^k by repeated multiplication. Requires a square matrix and k >= 2.
double moment_k(const ComplexMatrix& rho, int k);

/// 1 - tr rho_A^2 of U |psi_A>|psi_B>.
double product_state_linear_entropy(const BipartiteGate& u, std::span<const Complex> psi_a,
                                    std::span<const Complex> psi_b);

struct Estimate {
  double mean = 0.0;
  double standard_error = 0.0;
};

/// Entangling power as the mean linear entropy over Haar product inputs
/// (first columns of independent Haar unitaries). Independent of the
/// purity route; deterministic for a fixed seed.
Estimate sampled_entangling_power(const BipartiteGate& u, std::size_t samples,
                                  std::uint64_t seed);

}  // namespace gatelab
