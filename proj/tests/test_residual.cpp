#include "dirwave/dirac.hpp"
#include "dirwave/error.hpp"
#include "dirwave/residual.hpp"

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <complex>

using namespace dirwave;

namespace {

WaveState state(Branch b, double e0 = 1.0, double h = 1e-2, double omega = 0.05) {
  return assemble_branch(NormalizedParams::from_e0(e0, h, omega), b);
}

} // namespace

TEST(Dirac, RepresentationAlgebra) {
  using dirac::Matrix;
  const Matrix I = Matrix::Identity();
  for (int i = 0; i < 3; ++i) {
    EXPECT_LT((dirac::alpha(i) * dirac::alpha(i) - I).norm(), 1e-15);
    EXPECT_LT((dirac::alpha(i) * dirac::beta() + dirac::beta() * dirac::alpha(i)).norm(), 1e-15);
    for (int j = i + 1; j < 3; ++j)
      EXPECT_LT((dirac::alpha(i) * dirac::alpha(j) + dirac::alpha(j) * dirac::alpha(i)).norm(),
                1e-15);
  }
  // alpha_1 alpha_2 = i diag(sigma_3, sigma_3)
  const std::complex<double> i1(0.0, 1.0);
  Eigen::Vector4cd diag(i1, -i1, i1, -i1);
  EXPECT_LT((dirac::sigma(2) - Matrix(diag.asDiagonal())).norm(), 1e-15);
  EXPECT_LT((dirac::sigma(0) + dirac::sigma(0).adjoint()).norm(), 1e-15);
}

TEST(Residual, AnalyticResidualVanishesOnEveryBranch) {
  for (Branch b : {Branch::singular_plus, Branch::singular_minus, Branch::regular}) {
    const auto rep = dirac_residual(state(b), {});
    EXPECT_LT(rep.relative_residual, 1e-12) << branch_name(b);
    EXPECT_EQ(rep.points.size(), 225u);
    for (double r : rep.point_relative)
      EXPECT_LT(r, 1e-12);
  }
}

TEST(Residual, PerturbedStateResidualIsLinear) {
  auto base = state(Branch::singular_plus);
  double res[2];
  for (int k = 0; k < 2; ++k) {
    auto s = base;
    s.envelope.d2 *= 1.0 + 1e-4 * (k + 1);
    res[k] = dirac_residual(s, {}).relative_residual;
  }
  EXPECT_GT(res[0], 1e-7);
  EXPECT_NEAR(res[1] / res[0], 2.0, 1e-3);
}

TEST(Residual, WrongEnergyIsDetected) {
  auto s = state(Branch::singular_minus);
  s.branch.lab_energy += 1e-6;
  const double r = dirac_residual(s, {}).relative_residual;
  EXPECT_GT(r, 1e-7);
  EXPECT_LT(r, 1e-5);
}

TEST(Residual, SliceShiftDoesNotChangeResult) {
  const auto s = state(Branch::regular, 1.3, 0.03, 0.02);
  SampleGrid g;
  g.t0 = 123.0;
  g.z0 = -40.0;
  EXPECT_LT(dirac_residual(s, g).relative_residual, 1e-12);
}

TEST(Residual, FiniteDifferenceIsSecondOrder) {
  const auto s = state(Branch::singular_plus);
  ResidualOptions o;
  o.mode = DerivativeMode::finite_difference;
  const auto rep = dirac_residual(s, {}, o);
  ASSERT_TRUE(rep.convergence_ratio.has_value());
  EXPECT_NEAR(*rep.convergence_ratio, 4.0, 0.1);
  EXPECT_GT(rep.step, 0.0);

  const auto c = fd_convergence(s, {}, 2e-3);
  EXPECT_NEAR(c.order, 2.0, 0.05);
  EXPECT_GT(c.coarse, c.fine);
}

TEST(Residual, ConventionIndexRoundTrip) {
  for (int i = 0; i < 16; ++i)
    EXPECT_EQ(ConventionSpec::from_index(i).index(), i);
  EXPECT_EQ(ConventionSpec::printed().label(), "++++");
  EXPECT_EQ(ConventionSpec::printed().negated().label(), "----");
  EXPECT_EQ(ConventionSpec::printed().negated().canonical(), ConventionSpec::printed());
  EXPECT_THROW(ConventionSpec::from_index(16), Error);
}

TEST(Residual, GlobalSignPairsAgree) {
  const auto s = state(Branch::singular_plus);
  for (int i = 0; i < 16; ++i) {
    const auto c = ConventionSpec::from_index(i);
    ResidualOptions a, b;
    a.convention = c;
    b.convention = c.negated();
    EXPECT_NEAR(dirac_residual(s, {}, a).relative_residual,
                dirac_residual(s, {}, b).relative_residual, 1e-14);
  }
}

TEST(Residual, AuditSelectsPrintedConvention) {
  const auto table = convention_audit(state(Branch::singular_plus));
  EXPECT_EQ(table.rows.size(), 16u);
  EXPECT_EQ(table.classes.size(), 8u);
  EXPECT_EQ(table.winner, ConventionSpec::printed());
  EXPECT_EQ(table.passing_classes, 1);
  EXPECT_TRUE(table.unique());
  EXPECT_GT(table.classes[1].residual, 1e-2);
  const auto csv = table.to_csv();
  EXPECT_EQ(csv.rfind("time,space,coupling,mass,residual_norm\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 17);
}

TEST(Residual, CouplingSignFlipFails) {
  ResidualOptions o;
  o.convention.coupling = -1;
  EXPECT_GT(dirac_residual(state(Branch::singular_minus), {}, o).relative_residual, 1e-2);
}

TEST(Residual, ReportSerializes) {
  const auto rep = dirac_residual(state(Branch::regular), {});
  const nlohmann::json j = rep;
  EXPECT_EQ(j.at("mode"), "analytic");
  EXPECT_LT(j.at("relative_residual").get<double>(), 1e-12);
}
