#pragma once

#include <cstddef>
#include <cstdint>

#include "gatelab/gate_algebra.hpp"
#include "gatelab/measures.hpp"
#include "gatelab/rng.hpp"

namespace gatelab {

/// Indices of the monomial U_{i1 j1} U_{i2 j2} conj(U_{i1p j1p}) conj(U_{i2p j2p}).
struct MomentIndices {
  std::size_t i1 = 0, i2 = 0, i1p = 0, i2p = 0;
  std::size_t j1 = 0, j2 = 0, j1p = 0, j2p = 0;
};

/// Haar average of the degree-2 monomial over U(n):
///   [d(i1,i1')d(i2,i2')d(j1,j1')d(j2,j2') + d(i1,i2')d(i2,i1')d(j1,j2')d(j2,j1')] / (n^2 - 1)
/// - [d(i1,i1')d(i2,i2')d(j1,j2')d(j2,j1') + d(i1,i2')d(i2,i1')d(j1,j1')d(j2,j2')] / (n (n^2 - 1))
/// Requires n >= 2 and all indices < n.
double degree2_moment(const MomentIndices& idx, std::size_t n);

/// Random index tuple in [0, n). Half of the draws copy the unprimed indices
/// into the primed slots (direct pattern), a quarter cross them, the rest are
/// unconstrained, so non-zero moments are well represented.
MomentIndices random_moment_indices(std::size_t n, Rng& rng);

struct MomentEstimate {
  double mean_real = 0.0;
  double se_real = 0.0;
  double mean_imag = 0.0;
  double se_imag = 0.0;
};

/// Monte Carlo estimate of the same monomial over `samples` Haar draws.
MomentEstimate mc_verify_moment(const MomentIndices& idx, std::size_t n, std::size_t samples,
                                std::uint64_t seed);

/// <tr rho_R^2>, <tr rho_T^2> of U (U^A (x) U^B) V, evaluated by expanding
/// both local averages with degree2_moment and summing every index literally
/// (the product of the two four-term moments gives sixteen delta patterns).
/// Cost grows as N^12; intended for N = 2, 3.
PurityPair contracted_compose_average(const BipartiteGate& u, const BipartiteGate& v);

}  // namespace gatelab
