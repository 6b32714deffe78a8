#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "polpair/polarization.hpp"

namespace polpair {

// Rates and efficiencies of the synthesized coincidence experiment.
// Efficiencies are stored in dB (<= 0) and cover everything between the chip
// and the detector output, including detector efficiency.
struct ExperimentParams {
  double repetition_rate_hz = 10e6;
  double pairs_per_pulse = 16.4e-3;
  double signal_efficiency_db = -20.0;
  double idler_efficiency_db = -18.0;
  double integration_time_s = 180.0;
  double dark_count_rate_hz = 0.0;
  // When false the simulation produces pure pair statistics with no
  // uncorrelated-pulse background.
  bool model_accidentals = true;

  double signal_efficiency() const;  // linear, from dB
  double idler_efficiency() const;

  // Throws std::invalid_argument when a rate is negative, an efficiency is
  // above 0 dB, or a time is negative.
  void validate() const;
};

struct MeasurementSetting {
  PolarizationLabel signal = PolarizationLabel::H;
  PolarizationLabel idler = PolarizationLabel::H;
};

// The over-complete 6x6 analyzer grid in canonical order: the signal label
// cycles H,V,D,A,R,L in the outer loop, the idler label in the inner one.
const std::array<MeasurementSetting, 36>& tomography_settings();

struct CountRecord {
  MeasurementSetting setting;
  long long coincidences = 0;
  long long accidentals = 0;
  long long singles_signal = 0;
  long long singles_idler = 0;
};

struct TomographyDataset {
  std::array<CountRecord, 36> records;
  ExperimentParams params;
};

// Expected true-pair coincidence counts over one integration window:
//   R_rep T p_pair eta_s eta_i Tr[rho (Pi_a x Pi_b)].
double expected_coincidences(const TwoQubitDensityMatrix& rho,
                             const MeasurementSetting& setting,
                             const ExperimentParams& params);

// Detected singles rates in Hz at one analyzer, dark counts included.
double expected_signal_singles_rate(const TwoQubitDensityMatrix& rho,
                                    PolarizationLabel label,
                                    const ExperimentParams& params);
double expected_idler_singles_rate(const TwoQubitDensityMatrix& rho,
                                   PolarizationLabel label,
                                   const ExperimentParams& params);

// Next-pulse accidental model: two independent singles streams coincide on
// uncorrelated pulses at rate S_a S_b / R_rep, giving S_a S_b T / R_rep
// expected counts over the integration window.
double accidental_expectation(const ExperimentParams& params,
                              double signal_rate_hz, double idler_rate_hz);

// Poisson-samples all 36 settings: coincidences around true + accidental
// expectation, accidentals around the accidental expectation alone (the
// next-pulse measurement), singles around rate x time. Bit-identical for a
// fixed seed.
TomographyDataset simulate_dataset(const TwoQubitDensityMatrix& rho,
                                   const ExperimentParams& params,
                                   std::uint64_t rng_seed);

// CSV round trip. The writer emits canonical setting order; the parser
// accepts any order but demands all 36 settings exactly once and
// non-negative counts. The params are not stored in the CSV and must be
// supplied on read.
std::string dataset_to_csv(const TomographyDataset& dataset);
TomographyDataset dataset_from_csv(const std::string& csv_text,
                                   const ExperimentParams& params);
TomographyDataset load_dataset_csv(const std::string& path,
                                   const ExperimentParams& params);

}  // namespace polpair
