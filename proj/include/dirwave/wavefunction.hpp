#pragma once

#include "dirwave/characteristic.hpp"
#include "dirwave/dirac.hpp"
#include "dirwave/units.hpp"

#include <nlohmann/json_fwd.hpp>

#include <array>

namespace dirwave {

// exp(-d r^2 / 2 - i d2 x~ + d2 y~) with normalization constant N = exp(log_norm).
struct GaussianEnvelope {
  double d = 0.0;
  double d2 = 0.0;
  double log_norm = 0.0;

  double norm() const;
  // Width of |Psi|^2 along each transverse axis: 1/sqrt(2d).
  double width() const;
  // Center of |Psi|^2 in the rotated frame: (0, d2/d).
  double center() const { return d2 / d; }
};

// d = -Hz/2 and d2 = E0 h / (2 (E - E0)); N left at zero.
GaussianEnvelope envelope_params(const NormalizedParams &params,
                                 const SolutionBranch &branch);

// log N from 2 N^2 [h^2 E^2 + (E^2+1)(E-E0)^2] (pi/d) exp(d2^2/d) = 1, i.e.
// unit norm of Psi over the transverse plane. The spinor's squared length is
// twice the bracket, hence the factor 2.
double log_normalization_constant(double h, double energy, double offset,
                                  double d, double d2);
// exp of the above; throws ErrorCode::overflow when N underflows.
double normalization_constant(double h, double energy, double offset, double d,
                              double d2);

// N (h E, -(E+1)(E-E0), h E, -(E-1)(E-E0)); `offset` is E - E0.
Eigen::Vector4d ground_spinor(double h, double energy, double offset, double norm);

struct WaveState {
  NormalizedParams params;
  SolutionBranch branch;
  GaussianEnvelope envelope;
  // Spinor with N stripped; the physical spinor is norm() * direction.
  Eigen::Vector4d direction;

  Eigen::Vector4d spinor() const { return envelope.norm() * direction; }
};

WaveState assemble_state(const NormalizedParams &params, const SolutionBranch &branch);

// Solves, classifies and assembles the root carrying `label`.
WaveState assemble_branch(const NormalizedParams &params, Branch label);

struct FieldPoint {
  double t = 0.0, x = 0.0, y = 0.0, z = 0.0;

  // Omega t - Omega z
  double phase(double omega) const { return omega * (t - z); }
  // Coordinates rotated with the wave: x~ = r cos(phi - theta), y~ = r sin(phi - theta).
  std::array<double, 2> rotated(double omega) const;
};

// Lab point whose rotated coordinates are (xr, yr) at slice (t, z).
FieldPoint from_rotated(double xr, double yr, double t, double z, double omega);

struct PsiValue {
  dirac::Spinor value;
  // d/dt, d/dx, d/dy, d/dz; filled only when requested.
  std::array<dirac::Spinor, 4> gradient;
};

PsiValue evaluate_psi(const WaveState &state, const FieldPoint &pt,
                      bool derivatives = false);

// Vector potential (Ax, Ay, Az) in normalized units.
std::array<double, 3> vector_potential(const NormalizedParams &params,
                                       const FieldPoint &pt);

void to_json(nlohmann::json &j, const WaveState &s);
void to_json(nlohmann::json &j, const SolutionBranch &b);

} // namespace dirwave
