#include "gatelab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include <Eigen/Eigenvalues>

#include "eigen_bridge.hpp"
#include "gatelab/ensembles.hpp"
#include "gatelab/errors.hpp"
#include "gatelab/rng.hpp"
#include "gatelab/stats.hpp"

namespace gatelab {

namespace {

double sq(double v) { return v * v; }

double n2(std::size_t n_local) { return static_cast<double>(n_local * n_local); }

// ||M M^dagger||_F^2 / N^4 for an N^2 x N^2 matrix M.
double scaled_gram_purity(const ComplexMatrix& m, std::size_t n_local) {
  const ComplexMatrix gram = matmul(m, dagger(m));
  return frobenius_norm_squared(gram) / sq(n2(n_local));
}

}  // namespace

double c_n(std::size_t n_local) {
  const double d = n2(n_local);
  return d * (d + 1.0) / sq(d - 1.0);
}

double d_n(std::size_t n_local) {
  const double d = n2(n_local);
  return d / (d - 1.0);
}

double haar_mean_ep(std::size_t n_local) {
  if (n_local < 2) throw ValidationError("haar_mean_ep: local dimension must be at least 2");
  const double n = static_cast<double>(n_local);
  return sq(n - 1.0) / (n * n + 1.0);
}

double swap_operator_entanglement(std::size_t n_local) {
  const double d = n2(n_local);
  return (d - 1.0) / d;
}

double max_entangling_power(std::size_t n_local) {
  const double n = static_cast<double>(n_local);
  return (n - 1.0) / (n + 1.0);
}

ComplexMatrix rho_r(const BipartiteGate& u) {
  const ComplexMatrix ur = reshuffle(u);
  return Complex(1.0 / n2(u.n_local())) * matmul(ur, dagger(ur));
}

ComplexMatrix rho_t(const BipartiteGate& u) {
  const ComplexMatrix ut = partial_transpose_a(u);
  const ComplexMatrix s = swap_gate(u.n_local()).matrix();
  return Complex(1.0 / n2(u.n_local())) * matmul(matmul(s, matmul(ut, dagger(ut))), s);
}

PurityPair purities(const BipartiteGate& u) {
  // Conjugation by S leaves tr rho_T^2 unchanged, so it is skipped here.
  return {scaled_gram_purity(reshuffle(u), u.n_local()),
          scaled_gram_purity(partial_transpose_a(u), u.n_local())};
}

double purity(const ComplexMatrix& rho) {
  if (!rho.is_square()) throw ShapeError("purity: matrix is not square");
  return frobenius_norm_squared(rho);
}

double entangling_power_from_purities(PurityPair p, std::size_t n_local) {
  const double d = n2(n_local);
  const double e_u = 1.0 - p.x;
  const double e_us = 1.0 - p.y;
  const double n = static_cast<double>(n_local);
  return d * (e_u + e_us - swap_operator_entanglement(n_local)) / sq(n + 1.0);
}

double gate_typicality_from_purities(PurityPair p, std::size_t n_local) {
  const double d = n2(n_local);
  const double e_u = 1.0 - p.x;
  const double e_us = 1.0 - p.y;
  return d / (d - 1.0) * (e_u - e_us + swap_operator_entanglement(n_local));
}

XiEta xi_eta_from_purities(PurityPair p, std::size_t n_local) {
  const double d = n2(n_local);
  return {c_n(n_local) * (p.x + p.y - 4.0 / (d + 1.0)), d_n(n_local) * (p.x - p.y)};
}

PurityPair purities_from_xi_eta(XiEta v, std::size_t n_local) {
  const double d = n2(n_local);
  const double sum = v.xi / c_n(n_local) + 4.0 / (d + 1.0);
  const double diff = v.eta / d_n(n_local);
  return {(sum + diff) / 2.0, (sum - diff) / 2.0};
}

GateMetrics metrics_from_purities(PurityPair p, std::size_t n_local) {
  GateMetrics m;
  m.n_local = n_local;
  m.x1 = p.x;
  m.y1 = p.y;
  m.e_op = 1.0 - p.x;
  m.e_op_swap = 1.0 - p.y;
  m.ep = entangling_power_from_purities(p, n_local);
  m.gt = gate_typicality_from_purities(p, n_local);
  const XiEta v = xi_eta_from_purities(p, n_local);
  m.xi1 = v.xi;
  m.eta1 = v.eta;
  return m;
}

double operator_entanglement(const BipartiteGate& u) {
  return 1.0 - scaled_gram_purity(reshuffle(u), u.n_local());
}

double entangling_power(const BipartiteGate& u) {
  return entangling_power_from_purities(purities(u), u.n_local());
}

double gate_typicality(const BipartiteGate& u) {
  return gate_typicality_from_purities(purities(u), u.n_local());
}

XiEta xi_eta(const BipartiteGate& u) { return xi_eta_from_purities(purities(u), u.n_local()); }

GateMetrics gate_metrics(const BipartiteGate& u) {
  return metrics_from_purities(purities(u), u.n_local());
}

SchmidtSpectrum schmidt_spectrum(const BipartiteGate& u) {
  const ComplexMatrix rho = rho_r(u);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(Eigen::MatrixXcd(detail::as_eigen(rho)),
                                                          Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw DiagnosticsError("schmidt_spectrum: eigensolver did not converge");
  }
  SchmidtSpectrum out;
  out.values.reserve(static_cast<std::size_t>(solver.eigenvalues().size()));
  for (double v : solver.eigenvalues()) {
    if (v < -1e-8) {
      throw DiagnosticsError("schmidt_spectrum: eigenvalue " + std::to_string(v) +
                             " of rho_R is negative; input is not Hermitian PSD");
    }
    out.values.push_back(v < 0.0 ? 0.0 : v);
  }
  std::sort(out.values.begin(), out.values.end(), std::greater<>());
  return out;
}

double moment_k(const ComplexMatrix& rho, int k) {
  if (!rho.is_square()) throw ShapeError("moment_k: matrix is not square");
  if (k < 2) throw ValidationError("moment_k: k must be at least 2");
  ComplexMatrix power = rho;
  for (int i = 1; i < k; ++i) power = matmul(power, rho);
  return trace(power).real();
}

double product_state_linear_entropy(const BipartiteGate& u, std::span<const Complex> psi_a,
                                    std::span<const Complex> psi_b) {
  const std::size_t n = u.n_local();
  if (psi_a.size() != n || psi_b.size() != n) {
    throw ShapeError("product_state_linear_entropy: state dimension mismatch");
  }
  const ComplexMatrix& m = u.matrix();
  // Output amplitudes arranged as an N x N coefficient matrix c(a, b).
  ComplexMatrix c(n, n);
  for (std::size_t r = 0; r < n * n; ++r) {
    Complex acc{};
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) acc += m(r, i * n + j) * psi_a[i] * psi_b[j];
    }
    c(r / n, r % n) = acc;
  }
  return 1.0 - frobenius_norm_squared(matmul(c, dagger(c)));
}

Estimate sampled_entangling_power(const BipartiteGate& u, std::size_t samples,
                                  std::uint64_t seed) {
  if (samples < 2) throw ValidationError("sampled_entangling_power: need at least 2 samples");
  const std::size_t n = u.n_local();
  Rng rng(seed);
  RunningStats stats;
  std::vector<Complex> psi_a(n);
  std::vector<Complex> psi_b(n);
  for (std::size_t s = 0; s < samples; ++s) {
    const ComplexMatrix ua = haar_unitary(n, rng);
    const ComplexMatrix ub = haar_unitary(n, rng);
    for (std::size_t i = 0; i < n; ++i) {
      psi_a[i] = ua(i, 0);
      psi_b[i] = ub(i, 0);
    }
    stats.add(product_state_linear_entropy(u, psi_a, psi_b));
  }
  return {stats.mean(), stats.standard_error()};
}

}  // namespace gatelab
