#pragma once

#include "polpair/polarization.hpp"

namespace polpair {

// Wootters concurrence of a two-qubit density matrix, in [0, 1].
double concurrence(const TwoQubitDensityMatrix& rho);

// Tr[rho^2], in [1/4, 1] for a valid two-qubit state.
double purity(const TwoQubitDensityMatrix& rho);

// Overlap <psi|rho|psi>, in [0, 1].
double fidelity_to_pure(const TwoQubitDensityMatrix& rho,
                        const TwoQubitPureState& psi);

// Phase of the <VV|rho|HH> coherence, returned in (-pi, pi]. Throws a
// std::domain_error mentioning "phase undefined" when the coherence magnitude
// is below the threshold.
double relative_phase(const TwoQubitDensityMatrix& rho,
                      double threshold = 1e-6);

// Trace distance (1/2) ||rho - sigma||_1, in [0, 1].
double trace_distance(const TwoQubitDensityMatrix& rho,
                      const TwoQubitDensityMatrix& sigma);

}  // namespace polpair
