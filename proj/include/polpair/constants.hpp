#pragma once

namespace polpair {

// Speed of light in vacuum, m/s (exact by SI definition).
inline constexpr double speed_of_light = 299792458.0;

inline constexpr double pi = 3.14159265358979323846;

// Convert a vacuum wavelength in nm to angular frequency in rad/s.
double omega_from_wavelength_nm(double lambda_nm);

// Convert an angular frequency in rad/s to vacuum wavelength in nm.
double wavelength_nm_from_omega(double omega);

}  // namespace polpair
