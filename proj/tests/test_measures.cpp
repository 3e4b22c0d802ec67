#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gatelab/ensembles.hpp"
#include "gatelab/measures.hpp"
#include "support.hpp"

using namespace gatelab;
using testing_support::any_gate;
using testing_support::haar_gate;

namespace {

constexpr double kTight = 1e-10;

bool is_hermitian_unit_trace(const ComplexMatrix& rho) {
  if (max_abs_diff(rho, dagger(rho)) > 1e-12) return false;
  return std::abs(trace(rho) - Complex(1.0)) <= 1e-10;
}

}  // namespace

TEST(Constants, ClosedForms) {
  EXPECT_DOUBLE_EQ(haar_mean_ep(2), 0.2);
  EXPECT_DOUBLE_EQ(haar_mean_ep(10), 81.0 / 101.0);
  EXPECT_NEAR(haar_mean_ep(100), 9801.0 / 10001.0, 1e-15);
  EXPECT_NEAR(haar_mean_ep(100), 1.0 - 2.0 / 100, 5e-4);
  EXPECT_DOUBLE_EQ(c_n(2), 4.0 * 5.0 / 9.0);
  EXPECT_DOUBLE_EQ(d_n(3), 9.0 / 8.0);
  for (std::size_t n = 2; n <= 6; ++n) {
    EXPECT_DOUBLE_EQ(swap_operator_entanglement(n), (n * n - 1.0) / (n * n));
    EXPECT_DOUBLE_EQ(max_entangling_power(n), (n - 1.0) / (n + 1.0));
  }
}

TEST(RhoR, Examples) {
  for (std::size_t n = 2; n <= 4; ++n) {
    const double inv = 1.0 / (n * n);
    EXPECT_LE(max_abs_diff(rho_r(swap_gate(n)), Complex(inv) * ComplexMatrix::identity(n * n)),
              1e-15);
    EXPECT_NEAR(purity(rho_r(identity_gate(n))), 1.0, kTight);
  }
  EXPECT_NEAR(purity(rho_r(cnot_gate())), 0.5, kTight);
}

TEST(RhoT, Examples) {
  Rng rng(1);
  for (std::size_t n = 2; n <= 4; ++n) {
    const double inv = 1.0 / (n * n);
    const ComplexMatrix rho = rho_t(diagonal_unitary(n, rng));
    EXPECT_LE(max_abs_diff(rho, Complex(inv) * ComplexMatrix::identity(n * n)), 1e-14);
    EXPECT_NEAR(purity(rho_t(swap_gate(n))), 1.0, kTight);
  }
  EXPECT_NEAR(purity(rho_t(cnot_gate())), 0.25, kTight);
}

TEST(RhoRT, HermitianUnitTraceAndSwapRelation) {
  Rng rng(2);
  for (int t = 0; t < 40; ++t) {
    const BipartiteGate u = any_gate(rng);
    EXPECT_TRUE(is_hermitian_unit_trace(rho_r(u)));
    EXPECT_TRUE(is_hermitian_unit_trace(rho_t(u)));
    const BipartiteGate su = compose(swap_gate(u.n_local()), u);
    EXPECT_LE(max_abs_diff(rho_t(u), rho_r(su)), 1e-12);
  }
}

TEST(Purities, Examples) {
  const PurityPair c = purities(cnot_gate());
  EXPECT_NEAR(c.x, 0.5, kTight);
  EXPECT_NEAR(c.y, 0.25, kTight);
  for (std::size_t n = 2; n <= 5; ++n) {
    const PurityPair i = purities(identity_gate(n));
    EXPECT_NEAR(i.x, 1.0, kTight);
    EXPECT_NEAR(i.y, 1.0 / (n * n), kTight);
    const PurityPair s = purities(swap_gate(n));
    EXPECT_NEAR(s.x, 1.0 / (n * n), kTight);
    EXPECT_NEAR(s.y, 1.0, kTight);
  }
}

TEST(Purities, MatchDensityMatrixRouteAndFloor) {
  Rng rng(3);
  for (int t = 0; t < 60; ++t) {
    const BipartiteGate u = any_gate(rng);
    const PurityPair p = purities(u);
    const double floor = 1.0 / (u.n_local() * u.n_local());
    EXPECT_NEAR(p.x, purity(rho_r(u)), 1e-12);
    EXPECT_NEAR(p.y, purity(rho_t(u)), 1e-12);
    EXPECT_GE(p.x, floor - 1e-12);
    EXPECT_GE(p.y, floor - 1e-12);
    EXPECT_LE(p.x, 1.0 + 1e-12);
    EXPECT_LE(p.y, 1.0 + 1e-12);
  }
}

TEST(OperatorEntanglement, Examples) {
  Rng rng(4);
  for (std::size_t n = 2; n <= 6; ++n) {
    EXPECT_NEAR(operator_entanglement(swap_gate(n)), (n * n - 1.0) / (n * n), kTight);
    EXPECT_NEAR(operator_entanglement(local_pair(n, rng)), 0.0, kTight);
  }
  EXPECT_NEAR(operator_entanglement(cnot_gate()), 0.5, kTight);
}

TEST(OperatorEntanglement, AncillaRouteAgrees) {
  // Two routes to E(U) and E(US): reshuffled purity vs the reduced state of
  // the gate applied to maximally entangled ancillas.
  Rng rng(5);
  for (int t = 0; t < 40; ++t) {
    const BipartiteGate u = any_gate(rng);
    const std::size_t n = u.n_local();
    const GateMetrics m = gate_metrics(u);
    EXPECT_NEAR(m.e_op, testing_support::ancilla_entanglement(u.matrix(), n), 1e-10);
    const ComplexMatrix us = matmul(u.matrix(), swap_gate(n).matrix());
    EXPECT_NEAR(m.e_op_swap, testing_support::ancilla_entanglement(us, n), 1e-10);
    EXPECT_NEAR(m.e_op_swap, 1.0 - purity(rho_r(compose(swap_gate(n), u))), 1e-10);
  }
}

TEST(OperatorEntanglement, MatchesSchmidtSpectrum) {
  Rng rng(6);
  for (int t = 0; t < 30; ++t) {
    const BipartiteGate u = any_gate(rng);
    double s2 = 0.0;
    for (double v : schmidt_spectrum(u).values) s2 += v * v;
    EXPECT_NEAR(operator_entanglement(u), 1.0 - s2, 1e-9);
  }
}

TEST(EntanglingPower, Examples) {
  EXPECT_NEAR(entangling_power(cnot_gate()), 2.0 / 9.0, kTight);
  for (std::size_t n = 2; n <= 5; ++n) EXPECT_NEAR(entangling_power(swap_gate(n)), 0.0, kTight);
}

TEST(EntanglingPower, ControlledWithUnitTraceModulus) {
  // |tr V| = 1 at N = 2: V = diag(1, e^{2 pi i / 3}).
  const Complex v[] = {1.0, std::polar(1.0, 2.0 * std::numbers::pi / 3.0)};
  const ComplexMatrix vm = ComplexMatrix::diagonal(v);
  ASSERT_NEAR(std::norm(trace(vm)), 1.0, 1e-12);
  const BipartiteGate u = controlled_gate(1, vm);
  EXPECT_NEAR(entangling_power(u), 1.0 / 6.0, kTight);
  const Estimate mc = sampled_entangling_power(u, 40000, 77);
  EXPECT_TRUE(testing_support::within_sigma(mc.mean, 1.0 / 6.0, mc.standard_error))
      << mc.mean << " +- " << mc.standard_error;
}

TEST(EntanglingPower, StateAverageOracle) {
  Rng rng(7);
  for (std::size_t n : {2u, 3u}) {
    for (int t = 0; t < 2; ++t) {
      const BipartiteGate u = haar_gate(n, rng);
      const Estimate mc = sampled_entangling_power(u, 100000, 1000 + 10 * n + t);
      EXPECT_TRUE(testing_support::within_sigma(mc.mean, entangling_power(u), mc.standard_error))
          << "N=" << n << " mc " << mc.mean << " +- " << mc.standard_error << " formula "
          << entangling_power(u);
    }
  }
}

TEST(EntanglingPower, ProductStateEntropyOfKnownStates) {
  // CNOT on |+>|0> gives a Bell state.
  const double h = std::sqrt(0.5);
  const Complex plus[] = {h, h};
  const Complex zero[] = {1.0, 0.0};
  EXPECT_NEAR(product_state_linear_entropy(cnot_gate(), plus, zero), 0.5, 1e-14);
  EXPECT_NEAR(product_state_linear_entropy(cnot_gate(), zero, plus), 0.0, 1e-14);
}

TEST(GateTypicality, Examples) {
  Rng rng(8);
  for (std::size_t n = 2; n <= 5; ++n) {
    EXPECT_NEAR(gate_typicality(swap_gate(n)), 2.0, kTight);
    EXPECT_NEAR(gate_typicality(local_pair(n, rng)), 0.0, kTight);
  }
  EXPECT_NEAR(gate_typicality(cnot_gate()), 2.0 / 3.0, kTight);
}

TEST(XiEta, Examples) {
  const XiEta c = xi_eta(cnot_gate());
  EXPECT_NEAR(c.xi, -1.0 / 9.0, kTight);
  EXPECT_NEAR(c.eta, 1.0 / 3.0, kTight);
  for (std::size_t n = 2; n <= 5; ++n) {
    const XiEta i = xi_eta(identity_gate(n));
    EXPECT_NEAR(i.xi, 1.0, kTight);
    EXPECT_NEAR(i.eta, 1.0, kTight);
    const XiEta s = xi_eta(swap_gate(n));
    EXPECT_NEAR(s.xi, 1.0, kTight);
    EXPECT_NEAR(s.eta, -1.0, kTight);
  }
}

TEST(XiEta, InverseMapRoundTrip) {
  Rng rng(9);
  for (int t = 0; t < 50; ++t) {
    const BipartiteGate u = any_gate(rng);
    const std::size_t n = u.n_local();
    const PurityPair p = purities(u);
    const PurityPair back = purities_from_xi_eta(xi_eta_from_purities(p, n), n);
    EXPECT_NEAR(back.x, p.x, 1e-13);
    EXPECT_NEAR(back.y, p.y, 1e-13);
  }
}

TEST(GateMetricsProperties, BoundsAndIdentities) {
  Rng rng(10);
  for (int t = 0; t < 200; ++t) {
    const BipartiteGate u = any_gate(rng);
    const std::size_t n = u.n_local();
    const double nn = static_cast<double>(n);
    const GateMetrics m = gate_metrics(u);
    EXPECT_NEAR(m.e_op, 1.0 - m.x1, 1e-15);
    EXPECT_NEAR(m.e_op_swap, 1.0 - m.y1, 1e-15);
    EXPECT_GE(m.ep, -1e-12);
    EXPECT_LE(m.ep, (nn - 1.0) / (nn + 1.0) + 1e-12);
    EXPECT_GE(m.gt, -1e-12);
    EXPECT_LE(m.gt, 2.0 + 1e-12);
    EXPECT_GE(m.xi1, -2.0 / (nn * nn - 1.0) - 1e-12);
    EXPECT_LE(m.xi1, 1.0 + 1e-12);
    EXPECT_GE(m.eta1, -1.0 - 1e-12);
    EXPECT_LE(m.eta1, 1.0 + 1e-12);
    EXPECT_NEAR(m.ep, haar_mean_ep(n) * (1.0 - m.xi1), 1e-10);
    EXPECT_NEAR(m.gt, 1.0 - m.eta1, 1e-10);
    // Definitions written out independently of the library's closed forms.
    const double es = (nn * nn - 1.0) / (nn * nn);
    EXPECT_NEAR(m.ep, nn * nn * (m.e_op + m.e_op_swap - es) / ((nn + 1.0) * (nn + 1.0)), 1e-12);
    EXPECT_NEAR(m.gt, nn * nn * (m.e_op - m.e_op_swap + es) / (nn * nn - 1.0), 1e-12);
  }
}

TEST(GateMetricsProperties, LocalInvariance) {
  Rng rng(11);
  for (int t = 0; t < 40; ++t) {
    const BipartiteGate u = any_gate(rng);
    const std::size_t n = u.n_local();
    const BipartiteGate w = compose(compose(local_pair(n, rng), u), local_pair(n, rng));
    EXPECT_NEAR(entangling_power(w), entangling_power(u), 1e-9);
    EXPECT_NEAR(gate_typicality(w), gate_typicality(u), 1e-9);
  }
}

TEST(SchmidtSpectrum, Examples) {
  for (std::size_t n = 2; n <= 4; ++n) {
    const auto s = schmidt_spectrum(swap_gate(n)).values;
    ASSERT_EQ(s.size(), n * n);
    for (double v : s) EXPECT_NEAR(v, 1.0 / (n * n), 1e-12);
  }
  Rng rng(12);
  const auto p = schmidt_spectrum(local_pair(3, rng)).values;
  EXPECT_NEAR(p[0], 1.0, 1e-12);
  for (std::size_t i = 1; i < p.size(); ++i) EXPECT_NEAR(p[i], 0.0, 1e-12);
  const auto c = schmidt_spectrum(cnot_gate()).values;
  const double want[] = {0.5, 0.5, 0.0, 0.0};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(c[i], want[i], 1e-12);
}

TEST(SchmidtSpectrum, NormalizedSortedNonnegative) {
  Rng rng(13);
  for (int t = 0; t < 50; ++t) {
    const auto s = schmidt_spectrum(any_gate(rng)).values;
    double sum = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      EXPECT_GE(s[i], 0.0);
      if (i > 0) {
        EXPECT_LE(s[i], s[i - 1]);
      }
      sum += s[i];
    }
    EXPECT_NEAR(sum, 1.0, 1e-10);
  }
}

TEST(MomentK, Examples) {
  for (std::size_t n = 2; n <= 4; ++n) {
    const double d = static_cast<double>(n * n);
    const ComplexMatrix flat = Complex(1.0 / d) * ComplexMatrix::identity(n * n);
    for (int k = 2; k <= 5; ++k) EXPECT_NEAR(moment_k(flat, k), std::pow(d, 1.0 - k), 1e-15);
    const ComplexMatrix proj = rho_r(identity_gate(n));
    for (int k = 2; k <= 5; ++k) EXPECT_NEAR(moment_k(proj, k), 1.0, 1e-12);
  }
  Rng rng(14);
  for (int t = 0; t < 20; ++t) {
    const BipartiteGate u = any_gate(rng);
    EXPECT_NEAR(moment_k(rho_r(u), 2), purities(u).x, 1e-12);
  }
}

TEST(HaarTypicality, MeanOneAndRoughlySymmetric) {
  Rng rng(15);
  std::vector<double> gt;
  for (int t = 0; t < 10000; ++t) gt.push_back(gate_typicality(haar_gate(2, rng)));
  const auto s = testing_support::summarize(gt);
  EXPECT_TRUE(testing_support::within_sigma(s.mean, 1.0, s.se)) << s.mean << " +- " << s.se;
  double m3 = 0.0, m2 = 0.0;
  for (double v : gt) {
    m2 += (v - s.mean) * (v - s.mean);
    m3 += std::pow(v - s.mean, 3);
  }
  m2 /= gt.size();
  m3 /= gt.size();
  const double skew = m3 / std::pow(m2, 1.5);
  // Skewness SE is about sqrt(6 / M); reported loosely since no closed form is claimed.
  EXPECT_LT(std::abs(skew), 5.0 * std::sqrt(6.0 / gt.size())) << "skewness " << skew;
}
