#pragma once

#include "dirwave/characteristic.hpp"
#include "dirwave/units.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace dirwave {

// Flat key = value config; keys mirror the fields below.
struct SweepConfig {
  std::vector<double> e0_grid;
  double h = 1e-3;
  double wavelength = 0.3; // cm
  double omega = 1e-3;     // normalized, used with desk_scale
  bool desk_scale = false;
  std::vector<Branch> branches{Branch::singular_plus, Branch::singular_minus, Branch::regular};
  std::vector<double> phases{0.0};
  int quad_order = 48;
  int threads = 1;
  std::string constants_path;
  std::string csv_path;
  std::string json_path;

  // Applies one key. Grid keys: e0_values, g_values (comma lists) or
  // e0_min/e0_max/points (linear in E0).
  void set(const std::string &key, const std::string &value);
  void read(std::istream &in);
  void load(const std::string &path);
  // Materializes e0_min/e0_max/points into e0_grid and checks invariants.
  void finalize();
  double effective_omega(const UnitsContext &ctx) const;

private:
  double e0_min_ = 0.0, e0_max_ = 0.0;
  int points_ = 0;
};

struct SweepRow {
  double e0 = 0.0, g = 0.0;
  std::array<double, 3> roots{};
  Branch branch = Branch::unclassified;
  double phase = 0.0;
  double p = 0.0, lab_energy = 0.0;
  double d = 0.0, d2 = 0.0;
  double residual = 0.0;
  // Measured (quadrature) or, without desk scale, closed-form values.
  double diameter = 0.0; // units of lambda
  double energy = 0.0;
  double pz = 0.0;
  double transverse_momentum = 0.0;
  double spin_amplitude = 0.0;
  double ratio = 0.0;
  std::string source; // "quadrature" | "closed-form"
  // Closed forms for the same g.
  double diameter_closed = 0.0, energy_closed = 0.0, pz_closed = 0.0,
         momentum_closed = 0.0, spin_closed = 0.0, ratio_closed = 0.0;
  int error_code = 0;
  std::string error;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  int failures = 0;
  std::string csv() const;
  std::string summary_json(const SweepConfig &cfg) const;
};

std::string sweep_csv_header();

SweepResult run_sweep(const SweepConfig &cfg);

struct GEstimate {
  double g = 0.0;
  std::size_t lower_row = 0, upper_row = 0; // data rows (0-based, header excluded)
  double lower_g = 0.0, upper_g = 0.0;
  std::string note;
};

// Monotone-cubic inverse interpolation of `column` (as a function of g) over
// rows with the given branch label.
GEstimate extract_g(const std::string &csv, const std::string &column, double observed,
                    const std::string &branch = "singular-plus");

// Fritsch-Carlson monotone cubic through strictly increasing x.
class MonotoneCubic {
public:
  MonotoneCubic(std::vector<double> x, std::vector<double> y);
  double operator()(double x) const;
  // x with f(x) = y inside segment k (y must lie between its endpoints).
  double invert_in_segment(std::size_t k, double y) const;
  const std::vector<double> &x() const { return x_; }
  const std::vector<double> &y() const { return y_; }

private:
  double eval(std::size_t k, double x) const;
  std::vector<double> x_, y_, m_;
};

} // namespace dirwave
