#include <gtest/gtest.h>

#include <cmath>

#include "gatelab/ensembles.hpp"
#include "gatelab/errors.hpp"
#include "gatelab/iteration.hpp"
#include "gatelab/measures.hpp"
#include "gatelab/theory.hpp"
#include "support.hpp"

using namespace gatelab;
using testing_support::within_sigma;

TEST(BuildIterate, FirstIterateIsTheGate) {
  Rng rng(1);
  for (InterlacePolicy p :
       {InterlacePolicy::fresh_random, InterlacePolicy::fixed_random, InterlacePolicy::none}) {
    const BipartiteGate u = testing_support::any_gate(rng);
    EXPECT_EQ(build_iterate(u, 1, p, rng), u);
  }
}

TEST(BuildIterate, PlainPowerOfCnot) {
  Rng rng(2);
  const BipartiteGate c = build_iterate(cnot_gate(), 2, InterlacePolicy::none, rng);
  EXPECT_LE(max_abs_diff(c.matrix(), ComplexMatrix::identity(4)), 1e-15);
  const BipartiteGate c3 = build_iterate(cnot_gate(), 3, InterlacePolicy::none, rng);
  EXPECT_LE(max_abs_diff(c3.matrix(), cnot_gate().matrix()), 1e-15);
}

TEST(BuildIterate, FixedPolicyReusesOneLocalGate) {
  // U^(3) = U W U W U: e_p equals that of (W U)^3 by outer local invariance.
  Rng a(3), b(3);
  const BipartiteGate u = testing_support::haar_gate(3, a);
  testing_support::haar_gate(3, b);
  const BipartiteGate it = build_iterate(u, 3, InterlacePolicy::fixed_random, a);
  const BipartiteGate w = local_pair(3, b);
  const BipartiteGate wu = compose(w, u);
  const BipartiteGate cube = compose(compose(wu, wu), wu);
  EXPECT_NEAR(entangling_power(it), entangling_power(cube), 1e-10);
  EXPECT_NEAR(gate_typicality(it), gate_typicality(cube), 1e-10);
}

TEST(BuildIterate, RejectsZeroSteps) {
  Rng rng(4);
  EXPECT_THROW(build_iterate(cnot_gate(), 0, InterlacePolicy::none, rng), ValidationError);
}

TEST(BuildIterate, IteratesSatisfyMetricInvariants) {
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    const BipartiteGate u = testing_support::any_gate(rng);
    const BipartiteGate it = build_iterate(u, 1 + t % 7, InterlacePolicy::fresh_random, rng);
    EXPECT_LE(unitarity_defect(it.matrix()), 1e-9);
    const GateMetrics m = gate_metrics(it);
    EXPECT_NEAR(m.ep, haar_mean_ep(u.n_local()) * (1.0 - m.xi1), 1e-10);
    EXPECT_GE(m.ep, -1e-12);
    EXPECT_LE(m.gt, 2.0 + 1e-12);
  }
}

TEST(Policy, NamesRoundTrip) {
  for (InterlacePolicy p :
       {InterlacePolicy::fresh_random, InterlacePolicy::fixed_random, InterlacePolicy::none}) {
    EXPECT_EQ(parse_interlace_policy(to_string(p)), p);
  }
  EXPECT_THROW(parse_interlace_policy("sometimes"), ValidationError);
}

TEST(McMeanMetrics, CnotClosedForms) {
  const IterationTrace t =
      mc_mean_metrics(cnot_gate(), 6, InterlacePolicy::fresh_random, 2000, 31, 1);
  ASSERT_EQ(t.n_values.size(), 6u);
  EXPECT_EQ(t.realization_count, 2000u);
  for (std::size_t i = 0; i < 6; ++i) {
    const double n = static_cast<double>(i + 1);
    const double ep = 0.2 * (1.0 - std::pow(-1.0, n) / std::pow(9.0, n));
    const double gt = 1.0 - std::pow(3.0, -n);
    EXPECT_TRUE(within_sigma(t.metrics[i].ep, ep, t.standard_errors[i].ep))
        << "n=" << n << " ep " << t.metrics[i].ep << " se " << t.standard_errors[i].ep;
    EXPECT_TRUE(within_sigma(t.metrics[i].gt, gt, t.standard_errors[i].gt))
        << "n=" << n << " gt " << t.metrics[i].gt << " se " << t.standard_errors[i].gt;
  }
}

TEST(McMeanMetrics, LocalGateStaysLocal) {
  Rng rng(6);
  const BipartiteGate w = local_pair(3, rng);
  const IterationTrace t = mc_mean_metrics(w, 5, InterlacePolicy::fresh_random, 50, 7, 1);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_NEAR(t.metrics[i].ep, 0.0, 1e-12);
    EXPECT_NEAR(t.metrics[i].gt, 0.0, 1e-12);
  }
}

TEST(McMeanMetrics, WorkerCountDoesNotChangeResults) {
  Rng rng(8);
  const BipartiteGate u = testing_support::haar_gate(2, rng);
  const IterationTrace a = mc_mean_metrics(u, 8, InterlacePolicy::fresh_random, 301, 9, 1);
  const IterationTrace b = mc_mean_metrics(u, 8, InterlacePolicy::fresh_random, 301, 9, 4);
  const IterationTrace c = mc_mean_metrics(u, 8, InterlacePolicy::fresh_random, 301, 9, 3);
  EXPECT_EQ(to_csv(a), to_csv(b));
  EXPECT_EQ(to_csv(a), to_csv(c));
}

TEST(McMeanMetrics, RejectsEmptyRuns) {
  EXPECT_THROW(mc_mean_metrics(cnot_gate(), 0, InterlacePolicy::none, 10, 1), ValidationError);
  EXPECT_THROW(mc_mean_metrics(cnot_gate(), 3, InterlacePolicy::none, 0, 1), ValidationError);
}

TEST(Trace, SingleRealizationHasZeroErrors) {
  Rng rng(10);
  const IterationTrace t =
      single_realization_trace(cnot_gate(), 5, InterlacePolicy::fresh_random, rng);
  EXPECT_EQ(t.realization_count, 1u);
  for (const MetricErrors& e : t.standard_errors) {
    EXPECT_EQ(e.x, 0.0);
    EXPECT_EQ(e.ep, 0.0);
  }
  for (std::size_t i = 0; i < t.n_values.size(); ++i) EXPECT_EQ(t.n_values[i], i + 1);
}

TEST(Trace, CsvSchema) {
  Rng rng(11);
  const IterationTrace t = single_realization_trace(cnot_gate(), 3, InterlacePolicy::none, rng);
  const std::string csv = to_csv(t);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "n,mean_x,mean_y,mean_ep,mean_gt,se_x,se_y,se_ep,se_gt");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_NE(csv.find("\n2,1,0.25,0,0,0,0,0,0\n"), std::string::npos) << csv;
}

TEST(Trace, ControlledGateRealizationsTrackTheory) {
  Rng rng(12);
  const std::size_t n = 10;
  const BipartiteGate u = controlled_gate(n / 2, haar_unitary(n, rng));
  const TheoryCurve theory = theorem1_curves(gate_metrics(u), 15);
  for (InterlacePolicy p : {InterlacePolicy::fresh_random, InterlacePolicy::fixed_random}) {
    const IterationTrace t = single_realization_trace(u, 15, p, rng);
    for (std::size_t i = 4; i < 15; ++i) {
      EXPECT_LT(std::abs(t.metrics[i].ep - theory.ep[i]), 0.05) << to_string(p) << " n=" << i + 1;
    }
  }
}

TEST(Trace, DiagonalPowerKeepsEntanglingPower) {
  Rng rng(13);
  const std::size_t n = 16;
  const BipartiteGate u = diagonal_unitary(n, rng);
  const IterationTrace t = single_realization_trace(u, 10, InterlacePolicy::none, rng);
  const double ep1 = t.metrics[0].ep;
  for (const GateMetrics& m : t.metrics) EXPECT_LT(std::abs(m.ep - ep1), 0.1 * ep1);
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(0.0), "0");
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}
