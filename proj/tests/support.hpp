#pragma once

// Shared generators and independent oracles for the test binaries.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "gatelab/ensembles.hpp"
#include "gatelab/gate_algebra.hpp"
#include "gatelab/rng.hpp"

namespace testing_support {

using gatelab::BipartiteGate;
using gatelab::Complex;
using gatelab::ComplexMatrix;
using gatelab::Rng;

inline ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  ComplexMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rng.complex_normal();
  return m;
}

inline BipartiteGate haar_gate(std::size_t n, Rng& rng) {
  return BipartiteGate(n, gatelab::haar_unitary(n * n, rng));
}

/// Local dimension drawn from {2, 3, 4}.
inline std::size_t small_dim(Rng& rng) { return 2 + rng.next_u64() % 3; }

/// Mixed-family gate generator for property tests: Haar, diagonal, local,
/// controlled, CNOT-like and SWAP-composed gates at small N.
inline BipartiteGate any_gate(Rng& rng) {
  const std::size_t n = small_dim(rng);
  switch (rng.next_u64() % 6) {
    case 0: return haar_gate(n, rng);
    case 1: return gatelab::diagonal_unitary(n, rng);
    case 2: return gatelab::local_pair(n, rng);
    case 3: return gatelab::controlled_gate(1 + rng.next_u64() % (n - 1),
                                            gatelab::haar_unitary(n, rng));
    case 4: return gatelab::compose(gatelab::swap_gate(n), haar_gate(n, rng));
    default: return gatelab::compose(gatelab::local_pair(n, rng), gatelab::diagonal_unitary(n, rng));
  }
}

/// Linear entropy of the AA' half of (U (x) 1)|Phi>_{AA'}|Phi>_{BB'}, with
/// maximally entangled ancillas. Written from scratch on the state vector,
/// sharing no code with the library's reshuffle route.
inline double ancilla_entanglement(const ComplexMatrix& u, std::size_t n) {
  // psi[a][b][a'][b'] = U(a*N+b, a'*N+b') / N
  const double inv_n = 1.0 / static_cast<double>(n);
  auto psi = [&](std::size_t a, std::size_t b, std::size_t ap, std::size_t bp) {
    return u(a * n + b, ap * n + bp) * inv_n;
  };
  const std::size_t d = n * n;
  std::vector<Complex> rho(d * d);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t ap = 0; ap < n; ++ap)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t cp = 0; cp < n; ++cp) {
          Complex s = 0.0;
          for (std::size_t b = 0; b < n; ++b)
            for (std::size_t bp = 0; bp < n; ++bp) s += psi(a, b, ap, bp) * std::conj(psi(c, b, cp, bp));
          rho[(a * n + ap) * d + (c * n + cp)] = s;
        }
  double tr2 = 0.0;
  for (const Complex& v : rho) tr2 += std::norm(v);
  return 1.0 - tr2;
}

/// Direct sample mean and standard error.
struct Sample {
  double mean = 0.0;
  double se = 0.0;
};

inline Sample summarize(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  const double var = ss / static_cast<double>(v.size() - 1);
  return {m, std::sqrt(var / static_cast<double>(v.size()))};
}

inline bool within_sigma(double value, double expected, double se, double sigma = 3.0) {
  return std::abs(value - expected) <= sigma * se + 1e-12;
}

}  // namespace testing_support
