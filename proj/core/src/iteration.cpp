#include "gatelab/iteration.hpp"

#include <charconv>
#include <optional>
#include <string>

#include "gatelab/ensembles.hpp"
#include "gatelab/errors.hpp"
#include "gatelab/parallel.hpp"
#include "gatelab/stats.hpp"

namespace gatelab {

std::string_view to_string(InterlacePolicy policy) {
  switch (policy) {
    case InterlacePolicy::fresh_random: return "fresh_random";
    case InterlacePolicy::fixed_random: return "fixed_random";
    case InterlacePolicy::none: return "none";
  }
  return "unknown";
}

InterlacePolicy parse_interlace_policy(std::string_view name) {
  for (InterlacePolicy p :
       {InterlacePolicy::fresh_random, InterlacePolicy::fixed_random, InterlacePolicy::none}) {
    if (to_string(p) == name) return p;
  }
  throw ValidationError("unknown interlace policy '" + std::string(name) + "'");
}

namespace {

// Walks U^(1), U^(2), ... calling visit(n, iterate) at each step.
template <typename Visit>
void walk_iterates(const BipartiteGate& u, std::size_t n_max, InterlacePolicy policy, Rng& rng,
                   Visit&& visit) {
  if (n_max < 1) throw ValidationError("iteration: n must be at least 1");
  const std::size_t n_local = u.n_local();
  ComplexMatrix fixed_step;
  if (policy == InterlacePolicy::fixed_random) {
    fixed_step = matmul(u.matrix(), local_pair(n_local, rng).matrix());
  }
  ComplexMatrix acc = u.matrix();
  visit(std::size_t{1}, u);
  for (std::size_t n = 2; n <= n_max; ++n) {
    switch (policy) {
      case InterlacePolicy::fresh_random:
        acc = matmul(u.matrix(), matmul(local_pair(n_local, rng).matrix(), acc));
        break;
      case InterlacePolicy::fixed_random:
        acc = matmul(fixed_step, acc);
        break;
      case InterlacePolicy::none:
        acc = matmul(u.matrix(), acc);
        break;
    }
    const double drift = unitarity_defect(acc);
    if (!(drift <= kIterateTolerance)) {
      throw NumericalDegradationError("iterate n=" + std::to_string(n) +
                                      " lost unitarity: max|U U^dagger - I| = " +
                                      std::to_string(drift));
    }
    visit(n, BipartiteGate(n_local, acc, kIterateTolerance));
  }
}

}  // namespace

BipartiteGate build_iterate(const BipartiteGate& u, std::size_t n, InterlacePolicy policy,
                            Rng& rng) {
  std::optional<BipartiteGate> last;
  walk_iterates(u, n, policy, rng, [&](std::size_t k, const BipartiteGate& g) {
    if (k == n) last.emplace(g);
  });
  return *last;
}

IterationTrace single_realization_trace(const BipartiteGate& u, std::size_t n_max,
                                        InterlacePolicy policy, Rng& rng) {
  IterationTrace trace;
  trace.policy = policy;
  trace.realization_count = 1;
  walk_iterates(u, n_max, policy, rng, [&](std::size_t n, const BipartiteGate& g) {
    trace.n_values.push_back(n);
    trace.metrics.push_back(gate_metrics(g));
    trace.standard_errors.push_back({});
  });
  return trace;
}

IterationTrace mc_mean_metrics(const BipartiteGate& u, std::size_t n_max, InterlacePolicy policy,
                               std::size_t samples, std::uint64_t seed, std::size_t workers) {
  if (samples < 1) throw ValidationError("mc_mean_metrics: samples must be at least 1");
  if (n_max < 1) throw ValidationError("mc_mean_metrics: n_max must be at least 1");

  const auto realizations = parallel_map(samples, workers, [&](std::size_t r) {
    Rng rng = Rng::substream(seed, r);
    std::vector<PurityPair> per_step;
    per_step.reserve(n_max);
    walk_iterates(u, n_max, policy, rng,
                  [&](std::size_t, const BipartiteGate& g) { per_step.push_back(purities(g)); });
    return per_step;
  });

  const std::size_t n_local = u.n_local();
  IterationTrace trace;
  trace.policy = policy;
  trace.realization_count = samples;
  for (std::size_t step = 0; step < n_max; ++step) {
    RunningStats x, y, ep, gt, e_op, e_op_swap, xi, eta;
    for (const auto& realization : realizations) {
      const GateMetrics m = metrics_from_purities(realization[step], n_local);
      x.add(m.x1);
      y.add(m.y1);
      ep.add(m.ep);
      gt.add(m.gt);
      e_op.add(m.e_op);
      e_op_swap.add(m.e_op_swap);
      xi.add(m.xi1);
      eta.add(m.eta1);
    }
    GateMetrics mean;
    mean.n_local = n_local;
    mean.x1 = x.mean();
    mean.y1 = y.mean();
    mean.e_op = e_op.mean();
    mean.e_op_swap = e_op_swap.mean();
    mean.ep = ep.mean();
    mean.gt = gt.mean();
    mean.xi1 = xi.mean();
    mean.eta1 = eta.mean();
    trace.n_values.push_back(step + 1);
    trace.metrics.push_back(mean);
    trace.standard_errors.push_back(
        {x.standard_error(), y.standard_error(), ep.standard_error(), gt.standard_error()});
  }
  return trace;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string to_csv(const IterationTrace& trace) {
  std::string out = "n,mean_x,mean_y,mean_ep,mean_gt,se_x,se_y,se_ep,se_gt\n";
  for (std::size_t i = 0; i < trace.n_values.size(); ++i) {
    const GateMetrics& m = trace.metrics[i];
    const MetricErrors& e = trace.standard_errors[i];
    out += std::to_string(trace.n_values[i]);
    for (double v : {m.x1, m.y1, m.ep, m.gt, e.x, e.y, e.ep, e.gt}) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

}  // namespace gatelab
