#pragma once

#include <array>
#include <cstdint>

#include "polpair/polarization.hpp"
#include "polpair/serialization.hpp"
#include "polpair/tomography.hpp"

namespace polpair {

struct MleOptions {
  int max_iterations = 10000;
  // Stop once the log-likelihood improves by less than this between
  // optimizer iterations.
  double tolerance = 1e-9;
};

struct MleResult {
  TwoQubitDensityMatrix rho;
  double log_likelihood = 0.0;
  double scale = 0.0;  // fitted overall detected flux per unit probability
  int iterations = 0;
  bool converged = false;
};

// Counts used for fitting: raw coincidences, or coincidences minus recorded
// accidentals clamped at zero.
std::array<double, 36> effective_counts(const TomographyDataset& dataset,
                                        bool subtract_accidentals);

// Direct least-squares tomography over a Hermitian operator basis, with the
// flux fixed to sum(counts)/9 because the 36 analyzer projectors add up to
// nine times the identity. The estimate is projected onto the physical set
// by eigenvalue clipping. Used as the optimizer start.
TwoQubitDensityMatrix linear_inversion(const std::array<double, 36>& counts);

// Maximum-likelihood reconstruction: rho = T^dag T / Tr(T^dag T) with T
// lower-triangular (16 real parameters) plus a fitted log-flux, maximizing
// the Poisson likelihood of the counts under the canonical setting order.
// Nelder-Mead from the linear-inversion start; non-convergence within
// max_iterations returns the best point found with converged = false.
MleResult mle_fit(const std::array<double, 36>& counts,
                  const MleOptions& options = {});

MleResult mle_reconstruct(const TomographyDataset& dataset,
                          bool subtract_accidentals,
                          const MleOptions& options = {});

struct SummaryStat {
  double mean = 0.0;
  double std = 0.0;
  int count = 0;  // instances in which the metric was defined
};

struct MonteCarloOptions {
  int n_instances = 1000;
  // When false the observed counts are reused unchanged in every instance,
  // which isolates reconstruction determinism from counting noise.
  bool resample = true;
  bool subtract_accidentals = true;
  MleOptions mle;
};

struct MonteCarloSummary {
  SummaryStat concurrence, chsh, purity, theta, f_phi_plus, f_phi_minus;
  int instances = 0;
  int skipped = 0;
};

// Error estimation by parametric resampling: each instance redraws every
// coincidence and accidental count as Poisson(observed), reconstructs, and
// evaluates the metrics; means and sample standard deviations are reported.
// The relative phase is summarized over the instances where it is defined.
// Instances whose reconstruction throws are skipped; more than 5% skips is
// an error. Instance streams are derived from the seed and the instance
// index, so any execution order gives identical results.
MonteCarloSummary monte_carlo_errors(const TomographyDataset& dataset,
                                     std::uint64_t rng_seed,
                                     const MonteCarloOptions& options = {});

// Full reconstruction report for file output.
json reconstruction_report(const MleResult& fit, const MonteCarloSummary& mc,
                           std::uint64_t seed, bool subtracted);

}  // namespace polpair
