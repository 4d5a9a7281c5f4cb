#pragma once

#include <iosfwd>
#include <optional>
#include <string>

namespace dirwave {

// Gaussian (CGS) constants. `charge` is |e| in statcoulomb.
struct PhysicalConstants {
  double hbar;   // erg s
  double c;      // cm / s
  double mass;   // g
  double charge; // statC
  std::string table;
};

// CODATA 2018 with the electron mass.
PhysicalConstants codata2018_electron();

// Reads `key = value` lines (keys: hbar, c, mass; '#' starts a comment) on
// top of `base`. Unknown keys and non-positive values are rejected.
PhysicalConstants read_constants(std::istream &in,
                                 const PhysicalConstants &base);
PhysicalConstants load_constants(const std::string &path,
                                 const PhysicalConstants &base);

// Constants plus the wave's wavelength. The wavelength is the only stored
// length; frequency is always derived as c / lambda.
class UnitsContext {
public:
  static UnitsContext from_wavelength(double wavelength_cm,
                                      const PhysicalConstants &k = codata2018_electron());
  static UnitsContext from_frequency(double frequency_hz,
                                     const PhysicalConstants &k = codata2018_electron());

  const PhysicalConstants &constants() const { return k_; }
  double wavelength() const { return wavelength_; }
  double frequency() const { return k_.c / wavelength_; }
  double angular_frequency() const;
  double compton_wavelength() const { return compton_; }
  double bohr_magneton() const { return magneton_; }
  // 2 pi lambdabar / lambda
  double omega() const;
  // Field unit: normalized H = field_scale() * |e|-signed physical H.
  double field_scale() const;

  // Recomputes lambdabar and mu from (hbar, c, m) and compares.
  bool consistent(double rel_tol = 1e-12) const;

private:
  UnitsContext(const PhysicalConstants &k, double wavelength);
  PhysicalConstants k_;
  double wavelength_;
  double compton_;
  double magneton_;
};

// Dimensionless field set for one configuration. Hz already carries the
// e = -|e| sign, so localizable configurations have Hz < 0.
struct NormalizedParams {
  double omega = 0.0;
  double h = 0.0;
  double hz = 0.0;
  double e0 = 0.0;

  double d() const { return -0.5 * hz; }

  // Validated construction from (E0, h, Omega); Hz = -E0 * Omega.
  static NormalizedParams from_e0(double e0, double h, double omega);
};

struct PhysicalFields {
  double hz;        // gauss, along +z
  double amplitude; // gauss, |H| of the rotating component
};

NormalizedParams normalize_fields(double hz_gauss, double amplitude_gauss,
                                  const UnitsContext &ctx);
PhysicalFields denormalize_fields(const NormalizedParams &p,
                                  const UnitsContext &ctx);

// E0 = 2 mu Hz / (hbar Omega) straight from physical units.
double e0_from_physical(double hz_gauss, const UnitsContext &ctx);

inline double g_from_e0(double e0) { return 2.0 / e0; }
inline double e0_from_g(double g) { return 2.0 / g; }

enum class ResonanceInput { g_factor, e0 };

struct Resonance {
  double g;
  double e0;
  // Filled when a context is supplied: the wave's angular frequency and the
  // constant field satisfying hbar Omega = g mu Hz.
  std::optional<double> angular_frequency;
  std::optional<double> hz_gauss;
};

Resonance resonance_convert(double value, ResonanceInput input,
                            const UnitsContext *ctx = nullptr);

} // namespace dirwave
