#include <gtest/gtest.h>

#include "gatelab/errors.hpp"
#include "gatelab/measures.hpp"
#include "gatelab/theory.hpp"
#include "gatelab/weingarten.hpp"
#include "support.hpp"

using namespace gatelab;
using testing_support::within_sigma;

namespace {

MomentIndices direct(std::size_t i1, std::size_t i2, std::size_t j1, std::size_t j2) {
  return {i1, i2, i1, i2, j1, j2, j1, j2};
}

}  // namespace

TEST(Degree2Moment, Examples) {
  for (std::size_t n = 2; n <= 5; ++n) {
    const double nn = static_cast<double>(n);
    // No delta pattern fires.
    EXPECT_EQ(degree2_moment({0, 1, 0, 0, 0, 1, 0, 1}, n), 0.0);
    // Crossed rows, direct columns.
    EXPECT_NEAR(degree2_moment({0, 1, 1, 0, 0, 1, 0, 1}, n), -1.0 / (nn * (nn * nn - 1.0)), 1e-15);
    EXPECT_EQ(degree2_moment({0, 0, 1, 1, 0, 0, 0, 0}, n), 0.0);
    // Direct pattern with distinct rows and columns.
    EXPECT_NEAR(degree2_moment(direct(0, 1, 0, 1), n), 1.0 / (nn * nn - 1.0), 1e-15);
    // Fourth moment of one element.
    EXPECT_NEAR(degree2_moment(direct(0, 0, 0, 0), n), 2.0 / (nn * (nn + 1.0)), 1e-15);
  }
}

TEST(Degree2Moment, RejectsBadArguments) {
  EXPECT_THROW(degree2_moment(direct(0, 0, 0, 0), 1), ValidationError);
  EXPECT_THROW(degree2_moment(direct(0, 3, 0, 0), 3), ValidationError);
  EXPECT_THROW(mc_verify_moment(direct(0, 0, 0, 0), 1, 100, 1), ValidationError);
}

TEST(Degree2Moment, ExchangeSymmetry) {
  Rng rng(1);
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 2 + t % 3;
    const MomentIndices a = random_moment_indices(n, rng);
    const MomentIndices b{a.i2, a.i1, a.i2p, a.i1p, a.j2, a.j1, a.j2p, a.j1p};
    EXPECT_EQ(degree2_moment(a, n), degree2_moment(b, n));
    const MomentIndices c{a.i1, a.i2, a.i2p, a.i1p, a.j1, a.j2, a.j2p, a.j1p};
    EXPECT_EQ(degree2_moment(a, n), degree2_moment(c, n));
  }
}

TEST(Degree2Moment, RowSumIdentity) {
  for (std::size_t n = 2; n <= 6; ++n) {
    for (std::size_t i1 = 0; i1 < n; ++i1)
      for (std::size_t i2 = 0; i2 < n; ++i2) {
        if (i1 == i2) continue;
        double s = 0.0;
        for (std::size_t j1 = 0; j1 < n; ++j1)
          for (std::size_t j2 = 0; j2 < n; ++j2) s += degree2_moment(direct(i1, i2, j1, j2), n);
        EXPECT_NEAR(s, 1.0, 1e-12);
      }
  }
}

TEST(Degree2Moment, MonteCarloOracle) {
  Rng rng(2);
  for (int t = 0; t < 6; ++t) {
    const MomentIndices idx = random_moment_indices(3, rng);
    const MomentEstimate e = mc_verify_moment(idx, 3, 40000, 100 + t);
    EXPECT_TRUE(within_sigma(e.mean_real, degree2_moment(idx, 3), e.se_real)) << "tuple " << t;
    EXPECT_TRUE(within_sigma(e.mean_imag, 0.0, e.se_imag)) << "tuple " << t;
  }
  const MomentEstimate fourth = mc_verify_moment(direct(0, 0, 0, 0), 2, 40000, 7);
  EXPECT_TRUE(within_sigma(fourth.mean_real, 1.0 / 3.0, fourth.se_real)) << fourth.mean_real;
  const MomentEstimate zero = mc_verify_moment({0, 1, 0, 0, 0, 1, 0, 1}, 3, 20000, 8);
  EXPECT_TRUE(within_sigma(zero.mean_real, 0.0, zero.se_real));
}

TEST(Degree2Moment, MonteCarloIsSeeded) {
  const MomentIndices idx = direct(0, 1, 1, 0);
  const MomentEstimate a = mc_verify_moment(idx, 3, 1000, 5);
  const MomentEstimate b = mc_verify_moment(idx, 3, 1000, 5);
  EXPECT_EQ(a.mean_real, b.mean_real);
  EXPECT_EQ(a.se_real, b.se_real);
}

TEST(RandomMomentIndices, InRangeAndHitsNonzeroPatterns) {
  Rng rng(3);
  int nonzero = 0;
  for (int t = 0; t < 400; ++t) {
    const MomentIndices idx = random_moment_indices(3, rng);
    for (std::size_t v : {idx.i1, idx.i2, idx.i1p, idx.i2p, idx.j1, idx.j2, idx.j1p, idx.j2p}) {
      ASSERT_LT(v, 3u);
    }
    if (degree2_moment(idx, 3) != 0.0) ++nonzero;
  }
  EXPECT_GT(nonzero, 200);
}

TEST(ContractedComposition, MatchesClosedForm) {
  Rng rng(4);
  for (std::size_t n : {2u, 3u}) {
    for (int t = 0; t < 2; ++t) {
      const BipartiteGate u = testing_support::any_gate(rng);
      if (u.n_local() != n) continue;
      const BipartiteGate v = testing_support::haar_gate(n, rng);
      const PurityPair literal = contracted_compose_average(u, v);
      const PurityPair closed = compose_average(purities(u), purities(v), n);
      EXPECT_NEAR(literal.x, closed.x, 1e-10);
      EXPECT_NEAR(literal.y, closed.y, 1e-10);
    }
    const BipartiteGate u = testing_support::haar_gate(n, rng);
    const BipartiteGate v = testing_support::haar_gate(n, rng);
    const PurityPair literal = contracted_compose_average(u, v);
    const PurityPair closed = compose_average(purities(u), purities(v), n);
    EXPECT_NEAR(literal.x, closed.x, 1e-10);
    EXPECT_NEAR(literal.y, closed.y, 1e-10);
  }
  const PurityPair c = contracted_compose_average(cnot_gate(), cnot_gate());
  EXPECT_NEAR(entangling_power_from_purities(c, 2), 0.2 * (1.0 - 1.0 / 81.0), 1e-12);
  EXPECT_THROW(contracted_compose_average(cnot_gate(), swap_gate(3)), ShapeError);
}
