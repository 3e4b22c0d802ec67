#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gatelab/gate_algebra.hpp"
#include "gatelab/measures.hpp"
#include "gatelab/rng.hpp"

namespace gatelab {

/// How local gates are placed between successive applications of u.
///  - fresh_random: U W_{n-1} U ... W_1 U with independent Haar W_j
///  - fixed_random: one W drawn once and reused at every step
///  - none:         the plain power U^n
enum class InterlacePolicy { fresh_random, fixed_random, none };

std::string_view to_string(InterlacePolicy policy);
InterlacePolicy parse_interlace_policy(std::string_view name);

/// Max-norm unitarity drift tolerated on an iterate before it is rejected.
inline constexpr double kIterateTolerance = 1e-8;

struct MetricErrors {
  double x = 0.0;
  double y = 0.0;
  double ep = 0.0;
  double gt = 0.0;
};

struct IterationTrace {
  std::vector<std::size_t> n_values;
  std::vector<GateMetrics> metrics;
  std::vector<MetricErrors> standard_errors;
  InterlacePolicy policy = InterlacePolicy::fresh_random;
  std::size_t realization_count = 0;
};

/// U^(n) under `policy`. Throws NumericalDegradationError when the product
/// drifts beyond kIterateTolerance.
BipartiteGate build_iterate(const BipartiteGate& u, std::size_t n, InterlacePolicy policy,
                            Rng& rng);

/// Metric sequence for a single draw of the interlacing gates, n = 1..n_max.
IterationTrace single_realization_trace(const BipartiteGate& u, std::size_t n_max,
                                        InterlacePolicy policy, Rng& rng);

/// Per-n sample means and standard errors over `samples` realizations.
/// Realization r draws from Rng::substream(seed, r); results are reduced in
/// realization order, so the trace is independent of `workers`.
IterationTrace mc_mean_metrics(const BipartiteGate& u, std::size_t n_max, InterlacePolicy policy,
                               std::size_t samples, std::uint64_t seed, std::size_t workers = 1);

/// Header: n,mean_x,mean_y,mean_ep,mean_gt,se_x,se_y,se_ep,se_gt
std::string to_csv(const IterationTrace& trace);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

}  // namespace gatelab
