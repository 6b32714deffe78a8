#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "polpair/analysis.hpp"
#include "polpair/bpw.hpp"
#include "polpair/dispersion.hpp"
#include "polpair/mle.hpp"
#include "polpair/serialization.hpp"
#include "polpair/tomography.hpp"

namespace polpair {

// Bad or missing configuration, including unreadable referenced files.
// Distinguished from numerical failures so the command line can exit 1
// instead of 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class DispersionSource { Fixture, Symmetric, Csv, Taylor };

// Cubic k(omega) models for both modes of one waveguide width.
struct TaylorModelConfig {
  ModeDispersion::TaylorCoefficients te;
  ModeDispersion::TaylorCoefficients tm;
  double omega_min_rad_s = 0.0;
  double omega_max_rad_s = 0.0;
};

// Parsed run configuration. Defaults reproduce the reference experiment:
// pump 1554.90 nm, filters 1533.47 / 1577.01 nm, 100 GHz bands, 4.5 mm
// waveguide, 10 MHz repetition, 16.4e-3 pairs per pulse, -20 / -18 dB
// collection, 180 s integration.
struct RunConfig {
  DispersionSource dispersion_source = DispersionSource::Fixture;
  double fixture_dgi_scale = 1.0;
  double waveguide_length_m = 4.5e-3;
  // Width label (as printed by format_double) -> n_eff CSV path.
  std::map<std::string, std::string> dispersion_csv_paths;
  std::map<std::string, TaylorModelConfig> taylor_models;

  PumpSpectrum pump;
  FilterFunction filter;
  GridSpec grid;
  ExperimentParams experiment;
  MleOptions mle;
  int monte_carlo_instances = 1000;

  std::vector<double> sweep_widths_nm = {700.0, 800.0,  900.0,
                                         1000.0, 1100.0, 1200.0};
  int sweep_replicas = 25;

  std::uint64_t seed = 1;
  std::string output_dir = ".";

  // Builds the two-mode waveguide for one width from the configured source.
  // Throws ConfigError when the width has no entry or a referenced file
  // cannot be read.
  WaveguideSpec waveguide_for(double width_nm) const;
  WaveguideFamily waveguide_family() const;
};

// Strict parse: every key must be known, every value well typed, and the
// result self-consistent. Messages name the offending key or file.
RunConfig parse_run_config(const json& config);
RunConfig load_run_config(const std::string& path);

}  // namespace polpair
