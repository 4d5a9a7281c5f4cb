#include "dirwave/error.hpp"
#include "dirwave/units.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace dirwave;

namespace {

// Published CODATA 2018 values (CGS), independent of the derivation in units.cpp.
constexpr double kReducedCompton = 3.8615926796e-11; // cm
constexpr double kBohrMagneton = 9.2740100783e-21;   // erg / G

} // namespace

TEST(Units, DerivedConstantsMatchPublishedValues) {
  const auto ctx = UnitsContext::from_wavelength(0.3);
  EXPECT_NEAR(ctx.compton_wavelength() / kReducedCompton, 1.0, 1e-9);
  EXPECT_NEAR(ctx.bohr_magneton() / kBohrMagneton, 1.0, 1e-9);
  EXPECT_TRUE(ctx.consistent());
}

TEST(Units, MillimetreWaveScales) {
  const auto ctx = UnitsContext::from_wavelength(0.3);
  EXPECT_NEAR(0.3 / ctx.compton_wavelength(), 7.7688e9, 1e5);
  EXPECT_NEAR(ctx.omega(), 2.0 * std::numbers::pi * kReducedCompton / 0.3,
              1e-9 * ctx.omega());
  EXPECT_NEAR(ctx.omega(), 8.0877e-10, 1e-13);
}

TEST(Units, FrequencyIsDerivedFromWavelength) {
  const auto ctx = UnitsContext::from_frequency(1e11);
  EXPECT_NEAR(ctx.wavelength(), 0.299792458, 1e-15);
  EXPECT_NEAR(ctx.frequency(), 1e11, 1e-3);
  EXPECT_NEAR(ctx.angular_frequency(), 2.0 * std::numbers::pi * 1e11, 1e-2);
}

TEST(Units, FieldRoundTripAndLinearity) {
  const auto ctx = UnitsContext::from_wavelength(0.3);
  const auto p = normalize_fields(12500.0, 3.0, ctx);
  const auto back = denormalize_fields(p, ctx);
  EXPECT_NEAR(back.hz, 12500.0, 1e-9);
  EXPECT_NEAR(back.amplitude, 3.0, 1e-12);

  const auto p2 = normalize_fields(25000.0, 6.0, ctx);
  EXPECT_NEAR(p2.hz / p.hz, 2.0, 1e-14);
  EXPECT_NEAR(p2.h / p.h, 2.0, 1e-14);
  EXPECT_GT(p.d(), 0.0);
}

TEST(Units, ResonanceFieldTwoRoutesAgree) {
  const auto ctx = UnitsContext::from_wavelength(0.3);
  // g = 2 resonance at 100 GHz-ish: hbar Omega = 2 mu Hz.
  const double hz = ctx.constants().hbar * ctx.angular_frequency() / (2.0 * kBohrMagneton);
  EXPECT_NEAR(e0_from_physical(hz, ctx), 1.0, 1e-8);
  EXPECT_NEAR(normalize_fields(hz, 1.0, ctx).e0, e0_from_physical(hz, ctx), 1e-12);
}

TEST(Units, ResonanceConversion) {
  const auto r = resonance_convert(2.00233, ResonanceInput::g_factor);
  EXPECT_NEAR(r.e0, 0.998836, 1e-6);
  EXPECT_FALSE(r.hz_gauss.has_value());

  const auto ctx = UnitsContext::from_wavelength(0.3);
  const auto rf = resonance_convert(r.e0, ResonanceInput::e0, &ctx);
  EXPECT_NEAR(rf.g, 2.00233, 1e-12);
  ASSERT_TRUE(rf.hz_gauss.has_value());
  EXPECT_NEAR(e0_from_physical(*rf.hz_gauss, ctx), r.e0, 1e-10);
  EXPECT_NEAR(g_from_e0(e0_from_g(2.5)), 2.5, 1e-15);
}

TEST(Units, OppositeFieldIsNotLocalizable) {
  const auto ctx = UnitsContext::from_wavelength(0.3);
  try {
    normalize_fields(-12500.0, 1.0, ctx);
    FAIL() << "expected non-localizable";
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::non_localizable);
  }
}

TEST(Units, ParamValidation) {
  EXPECT_THROW(NormalizedParams::from_e0(0.0, 1e-3, 1e-3), Error);
  EXPECT_THROW(NormalizedParams::from_e0(1.0, -1e-3, 1e-3), Error);
  EXPECT_THROW(NormalizedParams::from_e0(1.0, 1e-3, 0.0), Error);
  const auto p = NormalizedParams::from_e0(1.5, 1e-3, 0.02);
  EXPECT_DOUBLE_EQ(p.hz, -0.03);
  EXPECT_DOUBLE_EQ(p.d(), 0.015);
}

TEST(Units, ConstantsOverride) {
  std::istringstream in("# test table\nhbar = 2.0e-27\n\nc=3e10  # rounded\n");
  const auto k = read_constants(in, codata2018_electron());
  EXPECT_DOUBLE_EQ(k.hbar, 2.0e-27);
  EXPECT_DOUBLE_EQ(k.c, 3e10);
  EXPECT_DOUBLE_EQ(k.mass, codata2018_electron().mass);
  const auto ctx = UnitsContext::from_wavelength(0.3, k);
  EXPECT_NEAR(ctx.compton_wavelength(), 2.0e-27 / (k.mass * 3e10), 1e-22);

  std::istringstream bad("planck = 1\n");
  EXPECT_THROW(read_constants(bad, codata2018_electron()), Error);
  std::istringstream neg("mass = -1\n");
  EXPECT_THROW(read_constants(neg, codata2018_electron()), Error);
  EXPECT_THROW(load_constants("/nonexistent/constants.txt", codata2018_electron()), Error);
}
