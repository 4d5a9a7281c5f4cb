#include "dirwave/units.hpp"

#include "dirwave/error.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace dirwave {

namespace {

void require_positive(double v, const char *field) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw Error(ErrorCode::invalid_argument,
                std::string(field) + " must be positive and finite");
}

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

} // namespace

PhysicalConstants codata2018_electron() {
  // |e| in esu is e[C] * c[cm/s] / 10.
  return {1.054571817e-27, 2.99792458e10, 9.1093837015e-28,
          1.602176634e-19 * 2.99792458e9, "CODATA-2018/cgs"};
}

PhysicalConstants read_constants(std::istream &in,
                                 const PhysicalConstants &base) {
  PhysicalConstants k = base;
  bool changed = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::invalid_argument,
                  "constants line " + std::to_string(lineno) + ": expected key = value");
    const auto key = trim(line.substr(0, eq));
    const auto val = trim(line.substr(eq + 1));
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(val, &used);
      if (used != val.size())
        throw std::invalid_argument(val);
    } catch (const std::exception &) {
      throw Error(ErrorCode::invalid_argument,
                  "constants key '" + key + "': not a number");
    }
    if (key == "hbar") {
      require_positive(v, "hbar");
      k.hbar = v;
    } else if (key == "c") {
      require_positive(v, "c");
      k.c = v;
    } else if (key == "mass") {
      require_positive(v, "mass");
      k.mass = v;
    } else {
      throw Error(ErrorCode::invalid_argument,
                  "constants: unknown key '" + key + "'");
    }
    changed = true;
  }
  if (changed)
    k.table = base.table + "+override";
  return k;
}

PhysicalConstants load_constants(const std::string &path,
                                 const PhysicalConstants &base) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::io, "cannot open constants file " + path);
  return read_constants(in, base);
}

UnitsContext::UnitsContext(const PhysicalConstants &k, double wavelength)
    : k_(k), wavelength_(wavelength), compton_(k.hbar / (k.mass * k.c)),
      magneton_(k.charge * k.hbar / (2.0 * k.mass * k.c)) {}

UnitsContext UnitsContext::from_wavelength(double wavelength_cm,
                                           const PhysicalConstants &k) {
  require_positive(wavelength_cm, "wavelength");
  require_positive(k.hbar, "hbar");
  require_positive(k.c, "c");
  require_positive(k.mass, "mass");
  return UnitsContext(k, wavelength_cm);
}

UnitsContext UnitsContext::from_frequency(double frequency_hz,
                                          const PhysicalConstants &k) {
  require_positive(frequency_hz, "frequency");
  require_positive(k.c, "c");
  return from_wavelength(k.c / frequency_hz, k);
}

double UnitsContext::angular_frequency() const {
  return 2.0 * std::numbers::pi * frequency();
}

double UnitsContext::omega() const {
  return 2.0 * std::numbers::pi * compton_ / wavelength_;
}

double UnitsContext::field_scale() const {
  return k_.charge * compton_ * compton_ / (k_.c * k_.hbar);
}

bool UnitsContext::consistent(double rel_tol) const {
  const double lb = k_.hbar / (k_.mass * k_.c);
  const double mu = k_.charge * k_.hbar / (2.0 * k_.mass * k_.c);
  return std::abs(lb - compton_) <= rel_tol * std::abs(lb) &&
         std::abs(mu - magneton_) <= rel_tol * std::abs(mu);
}

NormalizedParams NormalizedParams::from_e0(double e0, double h, double omega) {
  if (!(omega > 0.0) || !std::isfinite(omega))
    throw Error(ErrorCode::invalid_argument, "omega must be positive");
  if (!(h >= 0.0) || !std::isfinite(h))
    throw Error(ErrorCode::invalid_argument, "h must be non-negative");
  if (!(e0 > 0.0) || !std::isfinite(e0))
    throw Error(ErrorCode::non_localizable,
                "non-localizable configuration: E0 must be positive (d = -Hz/2 > 0 with e = -|e|)");
  return {omega, h, -e0 * omega, e0};
}

NormalizedParams normalize_fields(double hz_gauss, double amplitude_gauss,
                                  const UnitsContext &ctx) {
  if (!std::isfinite(hz_gauss) || !std::isfinite(amplitude_gauss))
    throw Error(ErrorCode::invalid_argument, "fields must be finite");
  const double scale = ctx.field_scale();
  NormalizedParams p;
  p.omega = ctx.omega();
  // e = -|e| folded into the constant field.
  p.hz = -scale * hz_gauss;
  p.h = scale * std::abs(amplitude_gauss) / p.omega;
  if (!(p.d() > 0.0))
    throw Error(ErrorCode::non_localizable,
                "non-localizable configuration: d = -Hz/2 must be positive; with "
                "e = -|e| this needs the constant field along +z (Hz > 0 gauss)");
  p.e0 = -p.hz / p.omega;
  return p;
}

PhysicalFields denormalize_fields(const NormalizedParams &p,
                                  const UnitsContext &ctx) {
  const double scale = ctx.field_scale();
  return {-p.hz / scale, p.h * p.omega / scale};
}

double e0_from_physical(double hz_gauss, const UnitsContext &ctx) {
  const auto &k = ctx.constants();
  return 2.0 * ctx.bohr_magneton() * hz_gauss /
         (k.hbar * ctx.angular_frequency());
}

Resonance resonance_convert(double value, ResonanceInput input,
                            const UnitsContext *ctx) {
  require_positive(value, input == ResonanceInput::g_factor ? "g" : "E0");
  Resonance r{};
  if (input == ResonanceInput::g_factor) {
    r.g = value;
    r.e0 = e0_from_g(value);
  } else {
    r.e0 = value;
    r.g = g_from_e0(value);
  }
  if (ctx) {
    r.angular_frequency = ctx->angular_frequency();
    r.hz_gauss = ctx->constants().hbar * *r.angular_frequency /
                 (r.g * ctx->bohr_magneton());
  }
  return r;
}

} // namespace dirwave
