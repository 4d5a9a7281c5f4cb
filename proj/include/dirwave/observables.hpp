#pragma once

#include "dirwave/wavefunction.hpp"

#include <nlohmann/json_fwd.hpp>

#include <array>
#include <optional>
#include <string>

namespace dirwave {

struct QuadratureSpec {
  int order = 48;
  // Repeat at 2*order and flag changes above this relative tolerance.
  bool check_convergence = true;
  double convergence_tol = 1e-8;
};

// Closed-form averages for the singular pair, in normalized units
// (lengths in lambdabar, energies in mc^2, momenta in mc, spin in hbar).
struct ClosedFormTargets {
  double g;
  double diameter_wavelengths; // (1/pi) sqrt(1 + (g/2)^2), in units of lambda
  double energy;               // g/2 + 2/g
  double transverse_momentum;  // sqrt(4 + g^2) / (2g)
  double longitudinal_momentum; // g/2
  double spin_amplitude;       // g / (2 sqrt(4 + g^2))
  double spin_z;               // 0
  double ratio;                // g^2 / (4 + g^2), in lambdabar

  static ClosedFormTargets for_g(double g);
};

struct LocalizationReport {
  double norm = 0.0;
  std::array<double, 2> center_rotated{};   // <x~>, <y~>
  std::array<double, 2> variance_rotated{}; // Var x~, Var y~
  std::array<double, 2> center_lab{};
  std::array<double, 2> variance_lab{};
  double mean_r2 = 0.0;
  double diameter = 0.0;             // 2 sqrt(<r^2>), lambdabar
  double diameter_wavelengths = 0.0; // same in units of lambda = 2 pi / Omega
  std::array<double, 2> uncertainty{}; // sigma_x sigma_px, sigma_y sigma_py (canonical)
  bool converged = true;
  double convergence_delta = 0.0;
};

struct DynamicalReport {
  double phase = 0.0;
  double energy_time = 0.0;        // <i d/dt>
  double energy_hamiltonian = 0.0; // <alpha.(-i grad - A) + beta>
  std::array<double, 3> momentum_canonical{}; // <-i grad>
  std::array<double, 3> momentum_kinetic{};   // <-i grad - A>
  std::array<double, 3> spin{};               // -(i/2) <sigma_n>
  bool converged = true;
  double convergence_delta = 0.0;

  double transverse_canonical() const;
  double transverse_kinetic() const;
  double spin_amplitude() const;
};

enum class OperatorMatch { none, first, second, both };

struct ExpectationReport {
  Branch branch = Branch::unclassified;
  double g = 0.0;
  double h = 0.0;
  double omega = 0.0;
  LocalizationReport localization;
  DynamicalReport dynamics;
  ClosedFormTargets targets{};
  double tolerance = 0.0; // 10 (h + Omega)
  bool targets_apply = false; // singular branches only
  // first = time derivative / canonical, second = Hamiltonian / kinetic
  OperatorMatch energy_match = OperatorMatch::none;
  OperatorMatch momentum_match = OperatorMatch::none;
  bool spin_match = false;
  bool diameter_match = false;
  std::vector<std::string> discrepancies;
};

LocalizationReport localization_report(const WaveState &state, const QuadratureSpec &q = {});
DynamicalReport dynamical_expectations(const WaveState &state, double phase,
                                       const QuadratureSpec &q = {});
ExpectationReport expectation_report(const WaveState &state, double phase,
                                     const QuadratureSpec &q = {});

struct SpinMomentumRatio {
  std::optional<double> ratio_x; // s1 / p_x, absent at a node of cos
  std::optional<double> ratio_y;
  double target = 0.0;           // g^2 / (4 + g^2)
  double value = 0.0;            // the ratio used (x if present, else y)
  double component_disagreement = 0.0; // |rx - ry| / |rx|, 0 if one is skipped
  double relative_error = 0.0;   // vs target
};

// Uses canonical momentum.
SpinMomentumRatio spin_momentum_ratio(const DynamicalReport &dyn, double g);

struct SuppressionExponent {
  double direct;      // 2 d2^2 / d
  double closed_form; // (E0^2 + 1)/E0 * lambda / (2 pi lambdabar)
};

SuppressionExponent suppression_exponent(const GaussianEnvelope &env,
                                         const UnitsContext &ctx);

std::string_view operator_match_name(OperatorMatch m);

void to_json(nlohmann::json &j, const ClosedFormTargets &t);
void to_json(nlohmann::json &j, const ExpectationReport &r);

// Flat CSV row (fixed column order, see csv_header()).
std::string expectation_csv_header();
std::string expectation_csv_row(const ExpectationReport &r);

} // namespace dirwave
