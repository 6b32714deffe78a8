#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <string>

#include "polpair/dispersion.hpp"
#include "polpair/polarization.hpp"
#include "polpair/serialization.hpp"

namespace polpair {

// One polarization assignment (signal, idler, pump, pump) of the SFWM
// interaction. Only assignments conserving the number of photons per mode
// pair are physical: both pumps co-polarized with a co-polarized pair, or
// crossed pumps with a crossed pair. That makes eight codes:
//   HHHH HHVV VVVV VVHH HVHV HVVH VHHV VHVH
struct SfwmProcess {
  char signal = 'H';
  char idler = 'H';
  char pump1 = 'H';
  char pump2 = 'H';

  static SfwmProcess from_code(const std::string& code);
  std::string code() const;
  // Two letters naming the signal-idler polarization sector, e.g. "HV".
  std::string sector() const;
};

const std::array<SfwmProcess, 8>& all_sfwm_processes();

// Rectangular pump line: amplitude 1/sqrt(W) over a band of full width W
// (angular), zero outside, so the spectral profile is norm-1.
struct PumpSpectrum {
  double center_nm = 1554.90;
  double bandwidth_hz = 100e9;  // full width, ordinary frequency

  double center_omega() const;
  double half_width_omega() const;
};

// Separable two-dimensional rectangular passband over (signal, idler).
struct FilterFunction {
  double signal_center_nm = 1533.47;
  double idler_center_nm = 1577.01;
  double bandwidth_hz = 100e9;  // full width per axis

  bool passes(double omega1, double omega2) const;
};

struct GridSpec {
  // Samples per filter passband along each axis. The grid is laid out at
  // midpoint-rule cell centers so integrals over the passband converge
  // cleanly at second order.
  int points_per_passband = 96;
  // Quadrature points for the pump convolution integral.
  int pump_quadrature_points = 256;
  // Grid extent in units of the passband width; 1 covers exactly the
  // passband, larger values add margin for plotting.
  double span = 1.0;
};

struct FrequencyGrid {
  Eigen::VectorXd signal;  // omega1 samples, uniform, ascending
  Eigen::VectorXd idler;   // omega2 samples
  double signal_step = 0.0;
  double idler_step = 0.0;
};

FrequencyGrid make_frequency_grid(const FilterFunction& filter,
                                  const GridSpec& grid);

// Joint spectral amplitude phi(omega1, omega2) sampled on a frequency grid.
// amplitude(i, j) corresponds to (signal(i), idler(j)).
struct BiphotonAmplitude {
  Eigen::VectorXd signal;
  Eigen::VectorXd idler;
  double signal_step = 0.0;
  double idler_step = 0.0;
  Eigen::MatrixXcd amplitude;

  double squared_norm() const;
};

// Integral of conj(a) * b over the grid; grids must match.
std::complex<double> overlap(const BiphotonAmplitude& a,
                             const BiphotonAmplitude& b);

// Biphoton amplitude of a single process:
//   phi(w1, w2) = integral over w3 of
//     pump(w3) pump(w4) sinc(dk L/2) sqrt(w1 w2 w3 w4)/wp^2
//     exp(i (k_s(w1) + k_t(w2) + k_u(w3) + k_v(w4)) L/2)
// with w4 = w1 + w2 - w3 fixed by energy conservation and dk the
// phase mismatch of the process. The quadrature runs over the exact support
// of the pump product, so the rectangular edges cost no resolution.
BiphotonAmplitude compute_process_bpw(const WaveguideSpec& spec,
                                      const SfwmProcess& process,
                                      const PumpSpectrum& pump,
                                      const FrequencyGrid& grid,
                                      int pump_quadrature_points = 256);

struct PumpAmplitudes {
  double alpha_h = 1.0;
  double alpha_v = 1.0;
};

struct SectorAmplitudes {
  BiphotonAmplitude hh, vh, hv, vv;
  const BiphotonAmplitude& sector(const std::string& st) const;
};

// Pump-weighted, filtered sector amplitudes:
//   phi_HH = aH^2 phi_HHHH + aV^2 phi_HHVV
//   phi_VV = aV^2 phi_VVVV + aH^2 phi_VVHH
//   phi_HV = aH aV (phi_HVHV + phi_HVVH)
//   phi_VH = aH aV (phi_VHHV + phi_VHVH)
SectorAmplitudes effective_sector_amplitudes(const WaveguideSpec& spec,
                                             const PumpAmplitudes& pumps,
                                             const PumpSpectrum& pump,
                                             const FilterFunction& filter,
                                             const GridSpec& grid);

// Pump ratio r = alpha_V / alpha_H equalizing the HH and VV sector powers
// over the filter window, found by bisection.
double balance_ratio(const WaveguideSpec& spec, const PumpSpectrum& pump,
                     const FilterFunction& filter, const GridSpec& grid);

// Reduction to the 4x4 polarization density matrix: spectral degrees of
// freedom traced out, rho[(st),(s't')] = integral of phi_st conj(phi_s't'),
// normalized to unit trace.
TwoQubitDensityMatrix predicted_polarization_state(
    const SectorAmplitudes& sectors);

struct Prediction {
  double ratio = 1.0;  // balanced alpha_V / alpha_H
  SectorAmplitudes sectors;
  TwoQubitDensityMatrix rho;
};

// Balance the pumps, assemble the sectors, reduce to the predicted state.
// Computes each process amplitude once.
Prediction predict_polarization_state(const WaveguideSpec& spec,
                                      const PumpSpectrum& pump,
                                      const FilterFunction& filter,
                                      const GridSpec& grid);

// Plot-ready exports: long-format CSV "i,j,re,im" of one amplitude grid and
// a JSON description of the grids and band settings shared by all sectors.
std::string amplitude_grid_csv(const BiphotonAmplitude& amp);
json amplitude_grid_metadata(const SectorAmplitudes& sectors,
                             const PumpSpectrum& pump,
                             const FilterFunction& filter);

}  // namespace polpair
