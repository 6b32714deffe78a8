#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "polpair/polarization.hpp"

namespace polpair {

// Natural cubic spline through strictly increasing abscissae.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

  double operator()(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;

  double x_min() const { return x_(0); }
  double x_max() const { return x_(x_.size() - 1); }

 private:
  int segment(double x) const;
  Eigen::VectorXd x_, y_, m_;  // m_ holds the knot second derivatives
};

enum class ModePolarization { TE, TM };

// Frequency-dependent propagation constant of one guided mode. Either a
// tabulated effective index n_eff(lambda) interpolated with a natural cubic
// spline, or a cubic Taylor expansion of k(omega) about omega0:
//   k = k0 + k1 d + k2 d^2/2 + k3 d^3/6,  d = omega - omega0.
class ModeDispersion {
 public:
  struct TaylorCoefficients {
    double omega0 = 0.0;  // rad/s
    double k0 = 0.0;      // rad/m
    double k1 = 0.0;      // s/m
    double k2 = 0.0;      // s^2/m
    double k3 = 0.0;      // s^3/m
  };

  // Tabulated model; wavelengths in nm must be strictly increasing with at
  // least 50 samples, and every n_eff must exceed 1.
  static ModeDispersion tabulated(ModePolarization pol,
                                  const Eigen::VectorXd& wavelength_nm,
                                  const Eigen::VectorXd& n_eff);

  // Taylor model valid on [omega_min, omega_max].
  static ModeDispersion taylor(ModePolarization pol,
                               const TaylorCoefficients& coeffs,
                               double omega_min, double omega_max);

  ModePolarization polarization() const { return pol_; }
  bool is_taylor() const { return is_taylor_; }
  const TaylorCoefficients& taylor_coefficients() const { return coeffs_; }

  double omega_min() const { return omega_min_; }
  double omega_max() const { return omega_max_; }

  // k(omega) in rad/m. Throws std::domain_error outside the validity window.
  double propagation_constant(double omega) const;

  // Group index c dk/domega (dimensionless).
  double group_index(double omega) const;

  // Group-velocity dispersion d^2k/domega^2 in s^2/m.
  double gvd(double omega) const;

 private:
  ModePolarization pol_ = ModePolarization::TE;
  bool is_taylor_ = false;
  TaylorCoefficients coeffs_;
  CubicSpline n_eff_;       // over wavelength in nm
  double omega_min_ = 0.0;  // validity window in omega
  double omega_max_ = 0.0;
  void check_window(double omega) const;
};

// Two-mode waveguide description.
struct WaveguideSpec {
  std::string width_label;
  double length = 4.5e-3;  // m
  ModeDispersion te;
  ModeDispersion tm;

  const ModeDispersion& mode(ModePolarization pol) const {
    return pol == ModePolarization::TE ? te : tm;
  }
  // H photons travel in the TE mode, V photons in the TM mode.
  const ModeDispersion& mode_for(char polarization_letter) const;
};

// |n_g,TE - n_g,TM| at omega.
double group_index_difference(const WaveguideSpec& spec, double omega);

// Wavelength (nm) where the GVD of the mode crosses zero, located by
// bisection on [lambda_lo_nm, lambda_hi_nm] to within tol_nm. Throws
// std::domain_error if the GVD does not change sign over the bracket.
double zero_dispersion_wavelength(const ModeDispersion& mode,
                                  double lambda_lo_nm, double lambda_hi_nm,
                                  double tol_nm = 0.01);

// Four-letter process code: signal, idler, pump1, pump2 polarizations,
// each 'H' or 'V'. Mismatch k_s(w1) + k_t(w2) - k_u(w3) - k_v(w4).
double phase_mismatch(const WaveguideSpec& spec, const std::string& process,
                      double omega1, double omega2, double omega3,
                      double omega4);

// Reads "wavelength_nm,n_eff_te,n_eff_tm" CSV text into a pair of tabulated
// modes. Parse failures report the offending row number.
std::pair<ModeDispersion, ModeDispersion> parse_dispersion_csv(
    const std::string& csv_text);
std::pair<ModeDispersion, ModeDispersion> load_dispersion_csv(
    const std::string& path);

}  // namespace polpair
