#include "polpair/fixtures.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "polpair/constants.hpp"

namespace polpair {

namespace {

constexpr double kPumpWavelengthNm = 1554.9;
constexpr double kWindowLoNm = 1400.0;
constexpr double kWindowHiNm = 1700.0;

// TM anchor values, common to every member of the family.
constexpr double kTmPhaseIndex = 2.90;
constexpr double kTmGroupIndex = 3.45;
constexpr double kTmK2 = 2.69e-24;   // s^2/m
constexpr double kTmK3 = 5.0e-39;    // s^3/m

// TE departures from TM, all functions of width.
constexpr double kDgiAt700 = 0.0955;
constexpr double kDgiAt1200 = 0.016;
constexpr double kDgiShapeExponent = 1.0;

constexpr double kBirefringenceAt700 = 4.5e-3;
constexpr double kBirefringenceDecayNm = 400.0;

constexpr double kTeK3 = 8.0e-39;
constexpr double kTeZdwAt700Nm = 1550.0;
constexpr double kTeK2DecayNm = 360.0;

double group_index_difference_at(double width_nm) {
  const double t = (width_nm - fixture_width_min_nm) /
                   (fixture_width_max_nm - fixture_width_min_nm);
  const double shaped = std::pow(t, kDgiShapeExponent);
  return kDgiAt700 * std::pow(kDgiAt1200 / kDgiAt700, shaped);
}

double birefringence_at(double width_nm) {
  return kBirefringenceAt700 *
         std::exp(-(width_nm - fixture_width_min_nm) / kBirefringenceDecayNm);
}

double te_k2_at(double width_nm, double omega0) {
  const double omega_zdw = omega_from_wavelength_nm(kTeZdwAt700Nm);
  const double k2_at_700 = -kTeK3 * (omega_zdw - omega0);
  return kTmK2 + (k2_at_700 - kTmK2) *
                     std::exp(-(width_nm - fixture_width_min_nm) / kTeK2DecayNm);
}

std::string width_label(double width_nm) {
  char buf[32];
  if (width_nm == std::floor(width_nm)) {
    std::snprintf(buf, sizeof(buf), "%.0fnm", width_nm);
  } else {
    std::snprintf(buf, sizeof(buf), "%gnm", width_nm);
  }
  return buf;
}

}  // namespace

WaveguideSpec reference_waveguide(double width_nm,
                                  const FixtureOptions& options) {
  if (width_nm < fixture_width_min_nm || width_nm > fixture_width_max_nm) {
    throw std::domain_error("fixture width " + std::to_string(width_nm) +
                            " nm outside [700, 1200] nm");
  }

  const double omega0 = omega_from_wavelength_nm(kPumpWavelengthNm);
  const double omega_min = omega_from_wavelength_nm(kWindowHiNm);
  const double omega_max = omega_from_wavelength_nm(kWindowLoNm);

  ModeDispersion::TaylorCoefficients tm_coeffs;
  tm_coeffs.omega0 = omega0;
  tm_coeffs.k0 = kTmPhaseIndex * omega0 / speed_of_light;
  tm_coeffs.k1 = kTmGroupIndex / speed_of_light;
  tm_coeffs.k2 = kTmK2;
  tm_coeffs.k3 = kTmK3;

  const double dgi = options.dgi_scale * group_index_difference_at(width_nm);
  const double dn = birefringence_at(width_nm);

  ModeDispersion::TaylorCoefficients te_coeffs;
  te_coeffs.omega0 = omega0;
  te_coeffs.k0 = (kTmPhaseIndex + dn) * omega0 / speed_of_light;
  te_coeffs.k1 = (kTmGroupIndex + dgi) / speed_of_light;
  te_coeffs.k2 = te_k2_at(width_nm, omega0);
  te_coeffs.k3 = kTeK3;

  WaveguideSpec spec;
  spec.width_label = width_label(width_nm);
  spec.te = ModeDispersion::taylor(ModePolarization::TE, te_coeffs, omega_min,
                                   omega_max);
  spec.tm = ModeDispersion::taylor(ModePolarization::TM, tm_coeffs, omega_min,
                                   omega_max);
  return spec;
}

WaveguideSpec symmetric_waveguide() {
  const double omega0 = omega_from_wavelength_nm(kPumpWavelengthNm);
  const double omega_min = omega_from_wavelength_nm(kWindowHiNm);
  const double omega_max = omega_from_wavelength_nm(kWindowLoNm);

  ModeDispersion::TaylorCoefficients shared;
  shared.omega0 = omega0;
  shared.k0 = kTmPhaseIndex * omega0 / speed_of_light;
  shared.k1 = kTmGroupIndex / speed_of_light;
  shared.k2 = kTmK2;
  shared.k3 = kTmK3;

  WaveguideSpec spec;
  spec.width_label = "symmetric";
  spec.te =
      ModeDispersion::taylor(ModePolarization::TE, shared, omega_min, omega_max);
  spec.tm =
      ModeDispersion::taylor(ModePolarization::TM, shared, omega_min, omega_max);
  return spec;
}

}  // namespace polpair
