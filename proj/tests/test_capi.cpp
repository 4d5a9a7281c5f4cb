#include "dirwave/dirwave.h"

#include <gtest/gtest.h>

#include <cmath>
#include <string>

namespace {

struct Units {
  dw_units *u = nullptr;
  ~Units() { dw_units_free(u); }
};

struct State {
  dw_state *s = nullptr;
  ~State() { dw_state_free(s); }
};

struct Config {
  dw_sweep_config *c = nullptr;
  ~Config() { dw_sweep_config_free(c); }
};

} // namespace

TEST(CApi, VersionAndBranchNames) {
  EXPECT_STREQ(dw_version(), "1.0.0");
  EXPECT_STREQ(dw_branch_name(DW_BRANCH_SINGULAR_PLUS), "singular-plus");
  EXPECT_STREQ(dw_branch_name(42), "invalid");
}

TEST(CApi, UnitsAndFields) {
  Units u;
  ASSERT_EQ(dw_units_create(0.3, nullptr, &u.u), DW_OK);
  dw_units_info info{};
  ASSERT_EQ(dw_units_info_get(u.u, &info), DW_OK);
  EXPECT_NEAR(info.omega, 8.0877e-10, 1e-13);

  dw_params p{};
  ASSERT_EQ(dw_normalize_fields(u.u, 12500.0, 2.0, &p), DW_OK);
  double hz = 0.0, amp = 0.0;
  ASSERT_EQ(dw_denormalize_fields(u.u, &p, &hz, &amp), DW_OK);
  EXPECT_NEAR(hz, 12500.0, 1e-8);
  EXPECT_NEAR(amp, 2.0, 1e-12);

  EXPECT_EQ(dw_normalize_fields(u.u, -12500.0, 2.0, &p), DW_ERR_NON_LOCALIZABLE);
  EXPECT_NE(std::string(dw_last_error()), "");

  dw_resonance r{};
  ASSERT_EQ(dw_resonance_convert(2.0, 1, u.u, &r), DW_OK);
  EXPECT_DOUBLE_EQ(r.e0, 1.0);
  EXPECT_EQ(r.has_fields, 1);
  EXPECT_GT(r.hz_gauss, 0.0);
}

TEST(CApi, ErrorsOnBadInput) {
  Units u;
  EXPECT_EQ(dw_units_create(-1.0, nullptr, &u.u), DW_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(dw_units_create(0.3, "/nonexistent/table", &u.u), DW_ERR_IO);
  EXPECT_EQ(dw_units_info_get(nullptr, nullptr), DW_ERR_INVALID_ARGUMENT);
  dw_params p{};
  EXPECT_EQ(dw_params_from_e0(-1.0, 0.0, 0.1, &p), DW_ERR_NON_LOCALIZABLE);
  EXPECT_EQ(dw_params_from_e0(1.0, 0.0, 0.0, &p), DW_ERR_INVALID_ARGUMENT);
  // hz inconsistent with e0 * omega
  p = {0.05, 0.01, -1.0, 1.0};
  State s;
  EXPECT_EQ(dw_state_create(&p, DW_BRANCH_SINGULAR_PLUS, &s.s), DW_ERR_INVALID_ARGUMENT);
}

TEST(CApi, SolveAndSeries) {
  double p = 0.0;
  ASSERT_EQ(dw_singular_momentum(1.0, 0.01, &p), DW_OK);
  EXPECT_NEAR(p, 0.005, 1e-15);
  dw_root roots[3];
  ASSERT_EQ(dw_solve(1e-3, 1.0, p, 0.01, roots), DW_OK);
  EXPECT_EQ(roots[2].branch, DW_BRANCH_SINGULAR_PLUS);
  EXPECT_EQ(roots[1].branch, DW_BRANCH_SINGULAR_MINUS);
  EXPECT_EQ(roots[0].branch, DW_BRANCH_REGULAR);

  double plus[4], minus[4];
  size_t n = 0;
  ASSERT_EQ(dw_singular_series(1.0, 1e-3, 3, plus, minus, 4, &n), DW_OK);
  EXPECT_EQ(n, 4u);
  EXPECT_NEAR(plus[1], 1.0 / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(minus[1], -1.0 / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(plus[2], 0.125, 1e-8);
}

TEST(CApi, StateResidualObserve) {
  dw_params p{};
  ASSERT_EQ(dw_params_from_e0(1.0, 1e-3, 1e-3, &p), DW_OK);
  State s;
  ASSERT_EQ(dw_state_create(&p, DW_BRANCH_SINGULAR_PLUS, &s.s), DW_OK);

  dw_state_info info{};
  ASSERT_EQ(dw_state_info_get(s.s, &info), DW_OK);
  EXPECT_NEAR(info.d, 5e-4, 1e-18);
  EXPECT_NEAR(info.d2, 0.70698, 1e-5);

  double buf[40];
  EXPECT_EQ(dw_state_evaluate(s.s, 0, 0, 1400, 0, 1, buf, 8), DW_ERR_INVALID_ARGUMENT);
  ASSERT_EQ(dw_state_evaluate(s.s, 0, 0, 1400, 0, 1, buf, 40), DW_OK);

  dw_residual_result rr{};
  char *json = nullptr;
  ASSERT_EQ(dw_residual(s.s, nullptr, 0, 0.0, &rr, &json), DW_OK);
  EXPECT_LT(rr.relative_residual, 1e-12);
  EXPECT_EQ(rr.points, 225u);
  ASSERT_NE(json, nullptr);
  EXPECT_NE(std::string(json).find("relative_residual"), std::string::npos);
  dw_string_free(json);

  const int bad[4] = {1, 1, 0, 1};
  EXPECT_EQ(dw_residual(s.s, bad, 0, 0.0, &rr, nullptr), DW_ERR_INVALID_ARGUMENT);

  int unique = 0;
  char *csv = nullptr;
  ASSERT_EQ(dw_convention_audit(s.s, &unique, nullptr, &csv), DW_OK);
  EXPECT_EQ(unique, 1);
  dw_string_free(csv);

  dw_observables ob{};
  ASSERT_EQ(dw_observe(s.s, 0.3, 0, &ob, nullptr), DW_OK);
  EXPECT_NEAR(ob.norm, 1.0, 1e-10);
  EXPECT_NEAR(ob.energy_time, 2.0, 0.02);
  EXPECT_NEAR(ob.momentum_canonical[2], 1.0, 0.02);
}

TEST(CApi, SuppressionAtPhysicalScale) {
  Units u;
  ASSERT_EQ(dw_units_create(0.3, nullptr, &u.u), DW_OK);
  dw_units_info info{};
  dw_units_info_get(u.u, &info);
  dw_params p{};
  ASSERT_EQ(dw_params_from_e0(1.0, 1e-6, info.omega, &p), DW_OK);
  State s;
  ASSERT_EQ(dw_state_create(&p, DW_BRANCH_SINGULAR_PLUS, &s.s), DW_OK);
  double direct = 0.0, closed = 0.0;
  ASSERT_EQ(dw_suppression_exponent(s.s, u.u, &direct, &closed), DW_OK);
  EXPECT_NEAR(closed, 2.47e9, 0.01e9);
  EXPECT_NEAR(direct / closed, 1.0, 1e-5);
}

TEST(CApi, SweepAndExtract) {
  Config c;
  ASSERT_EQ(dw_sweep_config_create(&c.c), DW_OK);
  ASSERT_EQ(dw_sweep_config_set(c.c, "e0_min", "0.985"), DW_OK);
  ASSERT_EQ(dw_sweep_config_set(c.c, "e0_max", "0.99975"), DW_OK);
  ASSERT_EQ(dw_sweep_config_set(c.c, "points", "61"), DW_OK);
  ASSERT_EQ(dw_sweep_config_set(c.c, "branch", "singular-plus"), DW_OK);
  EXPECT_EQ(dw_sweep_config_set(c.c, "bogus", "1"), DW_ERR_INVALID_ARGUMENT);

  dw_params p{};
  int branch = -1;
  double phase = -1.0;
  int order = 0;
  ASSERT_EQ(dw_sweep_config_point(c.c, 0, &p, &branch, &phase, &order), DW_OK);
  EXPECT_DOUBLE_EQ(p.e0, 0.985);
  EXPECT_EQ(branch, DW_BRANCH_SINGULAR_PLUS);
  EXPECT_EQ(order, 48);
  EXPECT_EQ(dw_sweep_config_point(c.c, 61, &p, nullptr, nullptr, nullptr),
            DW_ERR_INVALID_ARGUMENT);

  char *csv = nullptr, *json = nullptr;
  int failures = -1;
  ASSERT_EQ(dw_sweep_run(c.c, &csv, &json, &failures), DW_OK);
  EXPECT_EQ(failures, 0);
  dw_g_estimate est{};
  ASSERT_EQ(dw_extract_g(csv, "pz_closed", 1.001, nullptr, &est), DW_OK);
  EXPECT_NEAR(est.g, 2.002, 1e-10);
  EXPECT_EQ(dw_extract_g(csv, "pz_closed", 3.0, nullptr, &est), DW_ERR_OUT_OF_RANGE);
  dw_string_free(csv);
  dw_string_free(json);
}
