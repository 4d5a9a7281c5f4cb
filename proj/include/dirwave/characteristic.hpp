#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace dirwave {

// E (E + 2p - Omega) - 1 - E h^2 / (E - E0) = 0 and its cleared cubic
//   E^3 + (a - E0) E^2 - (1 + a E0 + h^2) E + E0 = 0,   a = 2p - Omega.
struct CharacteristicProblem {
  double h = 0.0;
  double e0 = 1.0;
  double p = 0.0;
  double omega = 0.0;

  static CharacteristicProblem make(double h, double e0, double p, double omega);
  // p fixed by singular_momentum(e0, omega).
  static CharacteristicProblem singular(double h, double e0, double omega);

  double a() const { return 2.0 * p - omega; }
  // Monic cubic, coefficients of E^2, E^1, E^0.
  std::array<double, 3> coefficients() const;
  // Monic cubic in u = E - E0. Evaluating here keeps the near-E0 pair
  // resolvable down to tiny h.
  std::array<double, 3> shifted_coefficients() const;

  double cleared(double energy) const;
  // Original (uncleared) form; `offset` is E - E0.
  double original(double energy, double offset) const;
};

enum class Branch { unclassified, singular_plus, singular_minus, regular, degenerate };

std::string_view branch_name(Branch b);
Branch parse_branch(std::string_view s);

struct SolutionBranch {
  double energy = 0.0; // root of the characteristic equation
  double offset = 0.0; // energy - E0, carried separately for precision
  Branch label = Branch::unclassified;
  double p = 0.0;
  double lab_energy = 0.0; // E = energy + p
  double residual = 0.0;   // cleared cubic at `energy`
  bool converged = true;
  std::string diagnostic;
};

// Three roots in ascending order, unlabeled. Companion-matrix eigenvalues in
// the shifted variable, polished by safeguarded Newton inside the brackets
// (-inf, -E0), (-E0, 0), (0, inf) that hold for every h > 0.
std::array<SolutionBranch, 3> solve_characteristic(const CharacteristicProblem &prob);

// Trigonometric resolvent; cross-check only, unstable at near-double roots.
std::array<double, 3> resolvent_roots(const CharacteristicProblem &prob);

struct VietaCheck {
  double sum_error;     // relative
  double pairwise_error;
  double product_error;
  double max() const;
};

VietaCheck vieta_check(const CharacteristicProblem &prob,
                       const std::array<double, 3> &roots);

// p = (1/E0 - E0)/2 + Omega/2
double singular_momentum(double e0, double omega);
// E = E0 + p
double singular_energy(double e0, double omega);

struct SeriesExpansion {
  int sign = +1;
  // coefficients[k] multiplies h^k; coefficients[0] = E0.
  std::vector<double> coefficients;
  bool truncated = false;
  std::string warning;

  double evaluate(double h) const;
};

// E1 = +-E0/sqrt(E0^2+1) exactly; higher orders by Richardson extrapolation
// over exact roots at h, h/2, h/4, ...
std::array<SeriesExpansion, 2> singular_series(double e0, double h, int order);

double first_order_coefficient(double e0);

std::array<SolutionBranch, 3> classify_roots(std::array<SolutionBranch, 3> roots,
                                             const CharacteristicProblem &prob);

// solve + classify
std::array<SolutionBranch, 3> solve_and_classify(const CharacteristicProblem &prob);

} // namespace dirwave
