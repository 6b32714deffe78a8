#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "polpair/bpw.hpp"
#include "polpair/dispersion.hpp"
#include "polpair/mle.hpp"
#include "polpair/tomography.hpp"

namespace polpair {

// Uhlmann fidelity F(rho, sigma) = (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
// Symmetric in its arguments, 1 exactly when the states coincide, and equal
// to <psi|rho|psi> whenever sigma is the pure state |psi><psi|.
double fidelity(const TwoQubitDensityMatrix& rho,
                const TwoQubitDensityMatrix& sigma);

// Overlap with the Bell states (|HH> +- |VV>)/sqrt(2).
struct BellFidelities {
  double f_plus = 0.0;
  double f_minus = 0.0;
};

BellFidelities bell_fidelities(const TwoQubitDensityMatrix& rho);

// Pure HH/VV superposition carrying the populations and coherence phase of
// a state: amplitudes from the renormalized HH and VV populations, phase
// from the VV-HH coherence. Serves as the reference component when
// decomposing reconstructed states. Throws std::domain_error when the state
// has no weight in the HH/VV sector.
TwoQubitPureState hh_vv_model_state(const TwoQubitDensityMatrix& rho);

// Best fit of an observed state by the three-component mixture
//   p0 * model + p1 |HH><HH| + p2 |VV><VV|
// in the sense of maximal Uhlmann fidelity over the probability simplex.
struct MixtureDecomposition {
  std::array<double, 3> probabilities{1.0, 0.0, 0.0};
  double fidelity = 0.0;
  TwoQubitDensityMatrix model = TwoQubitDensityMatrix::maximally_mixed();
};

// Seeds from a 0.05-resolution sweep of the simplex, then refines locally.
MixtureDecomposition mixture_decompose(const TwoQubitDensityMatrix& observed,
                                       const TwoQubitDensityMatrix& model);

// Waveguide model as a function of the nominal width in nm.
using WaveguideFamily = std::function<WaveguideSpec(double width_nm)>;

struct SweepOptions {
  PumpSpectrum pump;
  FilterFunction filter;
  GridSpec grid;
  ExperimentParams experiment;
  MleOptions mle;
  // Simulate-and-reconstruct runs averaged per width.
  int replicas = 25;
};

struct SweepRecord {
  double width_nm = 0.0;
  double dgi = 0.0;     // TE-TM group-index difference at the pump
  double r = 1.0;       // balanced pump amplitude ratio alpha_V / alpha_H
  double c_pure = 0.0;  // concurrence of the predicted state
  double c_raw_mean = 0.0;
  double c_raw_std = 0.0;
  double c_acs_mean = 0.0;  // with accidentals subtracted before the fit
  double c_acs_std = 0.0;
  double s_mean = 0.0;  // CHSH bound of the subtracted reconstruction
  double s_std = 0.0;
  double purity_mean = 0.0;
  double theta_rad = 0.0;  // relative phase of the predicted state
  double f_phi_plus = 0.0;
  double f_phi_minus = 0.0;
};

struct SweepResult {
  std::vector<SweepRecord> records;
};

// Per width: predict the polarization state, then run the full
// simulate-reconstruct pipeline `replicas` times and aggregate. Replica
// seeds are derived from (rng_seed, width, replica index), so any parallel
// evaluation order reproduces the same records; aggregation is by width,
// then replica. Widths must be strictly increasing. Errors from the
// underlying modules are rethrown annotated with the offending width.
SweepResult width_sweep(const WaveguideFamily& family,
                        const std::vector<double>& widths_nm,
                        const SweepOptions& options, std::uint64_t rng_seed);

std::string sweep_to_csv(const SweepResult& result);

}  // namespace polpair
