#pragma once

#include "dirwave/wavefunction.hpp"

#include <nlohmann/json_fwd.hpp>

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace dirwave {

// Signs in front of each term of
//   time (-i d/dt) + space (-i alpha . grad) + coupling (-alpha . A) + mass beta.
// All +1 is the operator as printed; (+,+,+,+) and (-,-,-,-) annihilate the
// same states.
struct ConventionSpec {
  int time = 1;
  int space = 1;
  int coupling = 1;
  int mass = 1;

  static ConventionSpec printed() { return {}; }
  ConventionSpec negated() const { return {-time, -space, -coupling, -mass}; }
  // Representative of the global-sign class (time sign forced to +1).
  ConventionSpec canonical() const { return time > 0 ? *this : negated(); }
  // 0..15
  int index() const;
  static ConventionSpec from_index(int i);
  std::string label() const;

  friend bool operator==(const ConventionSpec &, const ConventionSpec &) = default;
};

enum class DerivativeMode { analytic, finite_difference };

// Sample lattice: rotated-frame (x~, y~) around the envelope center in units
// of the width 1/sqrt(2d), then nt phases over one wave period and nz slices
// over one wavelength.
struct SampleGrid {
  int nx = 5, ny = 5, nt = 3, nz = 3;
  double span = 2.0; // half-extent in widths
  double t0 = 0.0, z0 = 0.0;

  std::vector<FieldPoint> points(const WaveState &state) const;
};

struct ResidualOptions {
  ConventionSpec convention = ConventionSpec::printed();
  DerivativeMode mode = DerivativeMode::analytic;
  // Finite-difference step in envelope widths.
  double fd_step = 1e-3;
};

struct ResidualReport {
  std::vector<FieldPoint> points;
  std::vector<dirac::Spinor> residuals;
  std::vector<double> point_relative; // |Op Psi| / |Psi| per point
  double relative_residual = 0.0;     // over the whole grid
  DerivativeMode mode = DerivativeMode::analytic;
  double step = 0.0; // absolute FD step, 0 in analytic mode
  ConventionSpec convention;
  std::optional<double> convergence_ratio;
  std::vector<std::string> warnings;
};

ResidualReport dirac_residual(const WaveState &state, const SampleGrid &grid,
                              const ResidualOptions &opts = {});

// Op Psi at one point with the analytic gradient.
dirac::Spinor apply_operator(const WaveState &state, const FieldPoint &pt,
                             const ConventionSpec &conv);

struct FdConvergence {
  double coarse;  // FD residual at step
  double fine;    // FD residual at step / 2
  double ratio;   // coarse / fine, ~4 for a second-order scheme
  double order;   // log2(ratio)
};

// Richardson test on the discretization part of the FD residual.
FdConvergence fd_convergence(const WaveState &state, const SampleGrid &grid,
                             double step, const ConventionSpec &conv = ConventionSpec::printed());

struct AuditRow {
  ConventionSpec convention;
  double residual;
};

struct AuditTable {
  std::vector<AuditRow> rows;    // 16, ascending residual
  std::vector<AuditRow> classes; // 8 global-sign classes, ascending residual
  ConventionSpec winner;
  int passing_classes = 0;
  double pass_threshold = 1e-8;
  double fail_threshold = 1e-2;
  // One class below pass_threshold and every other above fail_threshold.
  bool unique() const;
  std::string to_csv() const;
};

AuditTable convention_audit(const WaveState &state, const SampleGrid &grid = {});

void to_json(nlohmann::json &j, const ResidualReport &r);
void to_json(nlohmann::json &j, const AuditTable &t);

} // namespace dirwave
