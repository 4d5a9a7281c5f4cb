#include "dirwave/error.hpp"
#include "dirwave/numeric.hpp"
#include "dirwave/sweep.hpp"

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <vector>

using namespace dirwave;

namespace {

SweepConfig range(double lo, double hi, int points) {
  SweepConfig c;
  c.set("e0_min", std::to_string(lo));
  c.set("e0_max", std::to_string(hi));
  c.set("points", std::to_string(points));
  return c;
}

double energy_form(double g) { return g / 2.0 + 2.0 / g; }

} // namespace

TEST(Numeric, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(2.0), "2");
  EXPECT_EQ(format_double(std::nan("")), "nan");
  EXPECT_EQ(format_double(-INFINITY), "-inf");
  for (double v : {1.0 / 3.0, 6.02214076e23, 4.9e-324, -2.5e-300})
    EXPECT_EQ(std::strtod(format_double(v).c_str(), nullptr), v);
}

TEST(Numeric, PairwiseSum) {
  std::vector<double> v;
  for (int i = 1; i <= 1000; ++i)
    v.push_back(i);
  EXPECT_DOUBLE_EQ(pairwise_sum(v), 500500.0);
  EXPECT_DOUBLE_EQ(pairwise_sum({}), 0.0);
}

TEST(MonotoneCubic, ReproducesLinearDataAndDoesNotOvershoot) {
  const MonotoneCubic lin({0, 1, 2, 3}, {1, 3, 5, 7});
  EXPECT_NEAR(lin(1.5), 4.0, 1e-15);
  EXPECT_NEAR(lin.invert_in_segment(2, 6.0), 2.5, 1e-12);

  const MonotoneCubic step({0, 1, 2, 3, 4}, {0, 0, 1, 1, 1});
  for (double x = 0.0; x <= 4.0; x += 0.05) {
    EXPECT_GE(step(x), -1e-15);
    EXPECT_LE(step(x), 1.0 + 1e-15);
  }
}

TEST(SweepConfig, ParsesFlatFile) {
  std::istringstream in("# comment\n"
                        "g_values = 2.0, 2.002\n"
                        "h = 1e-4\n"
                        "branch = singular-plus, regular\n"
                        "phases = 0, 0.5\n"
                        "threads = 3\n");
  SweepConfig c;
  c.read(in);
  c.finalize();
  ASSERT_EQ(c.e0_grid.size(), 2u);
  EXPECT_DOUBLE_EQ(c.e0_grid[1], 2.0 / 2.002);
  EXPECT_DOUBLE_EQ(c.h, 1e-4);
  EXPECT_EQ(c.branches.size(), 2u);
  EXPECT_EQ(c.phases.size(), 2u);
  EXPECT_EQ(c.threads, 3);

  SweepConfig bad;
  EXPECT_THROW(bad.set("colour", "blue"), Error);
  EXPECT_THROW(bad.set("h", "small"), Error);
  EXPECT_THROW(bad.finalize(), Error); // empty grid
  SweepConfig unsorted;
  unsorted.set("e0_values", "1.0, 0.9, 1.1");
  EXPECT_THROW(unsorted.finalize(), Error);
}

TEST(Sweep, ElevenPointGrid) {
  auto c = range(0.9, 1.1, 11);
  const auto res = run_sweep(c);
  EXPECT_EQ(res.failures, 0);
  ASSERT_EQ(res.rows.size(), 33u);
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    const auto &r = res.rows[i];
    EXPECT_NEAR(r.e0, 0.9 + 0.02 * static_cast<double>(i / 3), 1e-12);
    EXPECT_DOUBLE_EQ(r.g, 2.0 / r.e0);
    EXPECT_EQ(r.source, "closed-form");
    EXPECT_LT(r.residual, 1e-10);
    EXPECT_LE(r.roots[0], r.roots[1]);
    EXPECT_LE(r.roots[1], r.roots[2]);
  }
  EXPECT_GT(res.rows.front().g, res.rows.back().g);
  const auto header = res.csv().substr(0, res.csv().find('\n'));
  EXPECT_EQ(header, sweep_csv_header());
  const auto j = nlohmann::json::parse(res.summary_json(c));
  EXPECT_EQ(j.at("schema_version"), 1);
  EXPECT_EQ(j.at("rows"), 33);
}

TEST(Sweep, DeskScaleUsesQuadrature) {
  SweepConfig c;
  c.set("e0_values", "1");
  c.set("desk_scale", "1");
  c.set("h", "1e-3");
  c.set("omega", "1e-3");
  c.set("branch", "singular-plus");
  const auto res = run_sweep(c);
  ASSERT_EQ(res.rows.size(), 1u);
  const auto &r = res.rows[0];
  EXPECT_EQ(r.source, "quadrature");
  EXPECT_NEAR(r.energy, 2.0, 0.02);
  EXPECT_NEAR(r.pz, 1.0, 0.02);
  EXPECT_NEAR(r.transverse_momentum, 0.70711, 0.02);
  EXPECT_NEAR(r.spin_amplitude, 0.35355, 0.02);
  EXPECT_NEAR(r.ratio, 0.5, 0.02);
  EXPECT_NEAR(r.diameter, r.diameter_closed, 0.02 * r.diameter_closed);
}

TEST(Sweep, ByteDeterministicAndThreadInvariant) {
  auto c = range(0.95, 1.05, 9);
  c.set("desk_scale", "1");
  c.set("omega", "0.01");
  c.set("h", "0.005");
  c.set("phases", "0, 1");
  const auto a = run_sweep(c).csv();
  const auto b = run_sweep(c).csv();
  c.set("threads", "4");
  const auto t = run_sweep(c).csv();
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, t);
}

TEST(Sweep, PointFailuresAreRecorded) {
  SweepConfig c;
  c.set("e0_values", "1");
  c.set("h", "0");
  const auto res = run_sweep(c);
  EXPECT_GT(res.failures, 0);
  bool saw = false;
  for (const auto &r : res.rows)
    if (r.error_code != 0) {
      saw = true;
      EXPECT_FALSE(r.error.empty());
    }
  EXPECT_TRUE(saw);
}

TEST(ExtractG, RecoversSyntheticValue) {
  auto c = range(0.985, 0.99975, 301);
  c.set("branch", "singular-plus");
  const auto csv = run_sweep(c).csv();
  const double gstar = 2.002;
  for (const char *col : {"energy_closed", "pz_closed", "diameter_closed"}) {
    const double y = col == std::string("pz_closed") ? gstar / 2.0
                     : col == std::string("energy_closed")
                         ? energy_form(gstar)
                         : std::sqrt(1.0 + gstar * gstar / 4.0) / std::numbers::pi;
    const auto est = extract_g(csv, col, y);
    EXPECT_NEAR(est.g, gstar, 1e-8) << col;
    EXPECT_LE(est.lower_g, gstar);
    EXPECT_GE(est.upper_g, gstar);
  }
}

TEST(ExtractG, RefusesToExtrapolate) {
  auto c = range(0.985, 0.99975, 31);
  const auto csv = run_sweep(c).csv();
  try {
    extract_g(csv, "pz_closed", 1.5);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::out_of_range);
  }
  EXPECT_THROW(extract_g(csv, "no_such_column", 1.0), Error);
  EXPECT_THROW(extract_g(csv, "pz_closed", 1.0, "sideways"), Error);
}

TEST(ExtractG, NonMonotoneColumnIsRejected) {
  // Energy has its minimum at g = 2; a grid straddling it cannot be inverted.
  const auto csv = run_sweep(range(0.9, 1.1, 21)).csv();
  try {
    extract_g(csv, "energy_closed", 2.001);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::non_monotone);
  }
}

TEST(ExtractG, DiameterAtResonance) {
  const auto csv = run_sweep(range(0.8, 1.0, 201)).csv();
  const auto est = extract_g(csv, "diameter_closed", 0.45016);
  EXPECT_NEAR(est.g, 2.0, 1e-4);
}
