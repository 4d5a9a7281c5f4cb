#include "dirwave/characteristic.hpp"
#include "dirwave/error.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace dirwave;

namespace {

// Order-by-order solution of u^2 (u + K) = h^2 (E0 + u), K = E0 + 1/E0, which
// is the cubic in u = E - E0 at the singular momentum.
struct SeriesOracle {
  double e1, e2, e3;
  explicit SeriesOracle(double e0, int sign) {
    const double K = e0 + 1.0 / e0;
    e1 = sign * e0 / std::sqrt(e0 * e0 + 1.0);
    e2 = (1.0 - e1 * e1) / (2.0 * K);
    e3 = (e2 - 3.0 * e1 * e1 * e2 - K * e2 * e2) / (2.0 * K * e1);
  }
};

} // namespace

TEST(Characteristic, ZeroAmplitudeRootsAtUnitE0) {
  const auto prob = CharacteristicProblem::singular(0.0, 1.0, 0.05);
  const auto r = solve_characteristic(prob);
  EXPECT_NEAR(r[0].energy, -1.0, 1e-14);
  EXPECT_NEAR(r[1].energy, 1.0, 1e-14);
  EXPECT_NEAR(r[2].energy, 1.0, 1e-14);
}

TEST(Characteristic, ZeroAmplitudeQuadraticFactor) {
  // h = 0: E = E0 plus the roots of E^2 + aE - 1.
  const auto prob = CharacteristicProblem::make(0.0, 1.3, 0.2, 0.05);
  const double a = prob.a();
  const double s = std::sqrt(a * a + 4.0);
  const auto r = solve_characteristic(prob);
  EXPECT_NEAR(r[0].energy, (-a - s) / 2.0, 1e-14);
  EXPECT_NEAR(r[1].energy, (-a + s) / 2.0, 1e-14);
  EXPECT_NEAR(r[2].energy, 1.3, 1e-14);
}

TEST(Characteristic, CompanionAgreesWithResolvent) {
  for (double h : {0.05, 0.3, 1.0}) {
    const auto prob = CharacteristicProblem::make(h, 0.8, 0.1, 0.02);
    const auto r = solve_characteristic(prob);
    const auto t = resolvent_roots(prob);
    for (int i = 0; i < 3; ++i)
      EXPECT_NEAR(r[i].energy, t[i], 1e-10) << "h=" << h << " root " << i;
  }
}

TEST(Characteristic, RootsSatisfyBothForms) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> E0(0.5, 2.0), H(1e-6, 0.05), W(1e-3, 0.1);
  for (int n = 0; n < 200; ++n) {
    const auto prob = CharacteristicProblem::singular(H(rng), E0(rng), W(rng));
    const auto r = solve_characteristic(prob);
    std::array<double, 3> roots{r[0].energy, r[1].energy, r[2].energy};
    EXPECT_LT(vieta_check(prob, roots).max(), 1e-10);
    for (const auto &b : r) {
      EXPECT_TRUE(b.converged);
      EXPECT_LT(std::abs(prob.cleared(b.energy)), 1e-10);
      EXPECT_LT(std::abs(prob.original(b.energy, b.offset)), 1e-8 / std::abs(b.offset) + 1e-8);
      EXPECT_NEAR(b.energy - prob.e0, b.offset, 1e-15 + 1e-15 * std::abs(b.energy));
    }
    EXPECT_LE(roots[0], roots[1]);
    EXPECT_LE(roots[1], roots[2]);
  }
}

TEST(Characteristic, BracketsHoldForPositiveAmplitude) {
  const auto prob = CharacteristicProblem::make(0.01, 1.2, -0.3, 0.04);
  const auto r = solve_characteristic(prob);
  EXPECT_LT(r[0].offset, -prob.e0);
  EXPECT_GT(r[1].offset, -prob.e0);
  EXPECT_LT(r[1].offset, 0.0);
  EXPECT_GT(r[2].offset, 0.0);
}

TEST(Characteristic, NearDoubleRootResolvedAtTinyAmplitude) {
  const double h = 1e-9;
  const auto r = solve_characteristic(CharacteristicProblem::singular(h, 1.0, 1e-3));
  EXPECT_NEAR(r[2].offset / h, 1.0 / std::sqrt(2.0), 1e-6);
  EXPECT_NEAR(r[1].offset / h, -1.0 / std::sqrt(2.0), 1e-6);
}

TEST(Characteristic, SingularPairSlope) {
  for (double e0 : {0.5, 1.0, 2.0}) {
    const double h = 1e-4;
    const auto r = solve_and_classify(CharacteristicProblem::singular(h, e0, 0.01));
    const double slope = (r[2].energy - r[1].energy) / (2.0 * h);
    EXPECT_NEAR(slope / first_order_coefficient(e0), 1.0, 1e-4);
    EXPECT_NEAR(first_order_coefficient(e0), e0 / std::sqrt(e0 * e0 + 1.0), 1e-15);
  }
}

TEST(Characteristic, SeriesMatchesOrderByOrderSolution) {
  for (double e0 : {1.0, 2.0}) {
    const auto s = singular_series(e0, 1e-3, 3);
    for (int k = 0; k < 2; ++k) {
      const SeriesOracle o(e0, s[k].sign);
      ASSERT_EQ(s[k].coefficients.size(), 4u);
      EXPECT_FALSE(s[k].truncated) << s[k].warning;
      EXPECT_DOUBLE_EQ(s[k].coefficients[0], e0);
      EXPECT_NEAR(s[k].coefficients[1], o.e1, 1e-14);
      EXPECT_NEAR(s[k].coefficients[2], o.e2, 1e-8);
      EXPECT_NEAR(s[k].coefficients[3], o.e3, 1e-5);
    }
  }
  EXPECT_NEAR(SeriesOracle(1.0, 1).e2, 0.125, 1e-15);
  EXPECT_NEAR(SeriesOracle(1.0, 1).e3, -0.0331456, 1e-7);
}

TEST(Characteristic, SeriesEvaluationTracksExactRoot) {
  const double h = 0.01;
  const auto s = singular_series(1.0, 1e-3, 2);
  const auto r = solve_and_classify(CharacteristicProblem::singular(h, 1.0, 0.05));
  EXPECT_NEAR(s[0].evaluate(h), r[2].energy, 5e-6);
  EXPECT_NEAR(s[1].evaluate(h), r[1].energy, 5e-6);
}

TEST(Characteristic, SeriesRejectsLargeAmplitude) {
  EXPECT_THROW(singular_series(1.0, 0.5, 2), Error);
  EXPECT_THROW(singular_series(1.0, 0.0, 2), Error);
}

TEST(Characteristic, ClassifiesSingularPair) {
  const auto r = solve_and_classify(CharacteristicProblem::singular(1e-3, 1.0, 0.01));
  EXPECT_EQ(r[0].label, Branch::regular);
  EXPECT_EQ(r[1].label, Branch::singular_minus);
  EXPECT_EQ(r[2].label, Branch::singular_plus);
  for (const auto &b : r)
    EXPECT_DOUBLE_EQ(b.lab_energy, b.energy + b.p);
}

TEST(Characteristic, OffSingularMomentumHasNoSingularLabels) {
  const double p = 1.1 * singular_momentum(0.8, 0.01);
  const auto r = solve_and_classify(CharacteristicProblem::make(1e-3, 0.8, p, 0.01));
  for (const auto &b : r) {
    EXPECT_NE(b.label, Branch::singular_plus);
    EXPECT_NE(b.label, Branch::singular_minus);
  }
}

TEST(Characteristic, ZeroAmplitudePairIsDegenerate) {
  const auto r = solve_and_classify(CharacteristicProblem::singular(0.0, 1.0, 0.01));
  EXPECT_EQ(r[0].label, Branch::regular);
  EXPECT_EQ(r[1].label, Branch::degenerate);
  EXPECT_EQ(r[2].label, Branch::degenerate);
}

TEST(Characteristic, ElectronMomentumAndEnergy) {
  const double g = 2.0 * 1.0011659;
  const double e0 = 2.0 / g;
  const double omega = 8.0877e-10;
  EXPECT_NEAR(std::abs(singular_momentum(e0, omega)), 1.165e-3, 1e-6);
  EXPECT_NEAR(singular_energy(e0, omega) - omega / 2.0, 0.5 * (g / 2.0 + 2.0 / g), 1e-12);
}

TEST(Characteristic, BranchNamesRoundTrip) {
  for (Branch b : {Branch::singular_plus, Branch::singular_minus, Branch::regular,
                   Branch::degenerate, Branch::unclassified})
    EXPECT_EQ(parse_branch(branch_name(b)), b);
  EXPECT_THROW(parse_branch("sideways"), Error);
}

TEST(Characteristic, InvalidInputs) {
  EXPECT_THROW(CharacteristicProblem::make(-1.0, 1.0, 0.0, 0.01), Error);
  EXPECT_THROW(CharacteristicProblem::make(0.1, 0.0, 0.0, 0.01), Error);
  EXPECT_THROW(CharacteristicProblem::make(0.1, 1.0, std::nan(""), 0.01), Error);
}
