#pragma once

#include <array>

#include "polpair/polarization.hpp"

namespace polpair {

// Correlation E(a, b) = Tr[rho (2 Pi_a - I) (x) (2 Pi_b - I)] of the +/-1
// observables built from the projectors, in [-1, 1].
double chsh_correlation(const TwoQubitDensityMatrix& rho,
                        const Eigen::Matrix2cd& projector_a,
                        const Eigen::Matrix2cd& projector_b);

// 3x3 real correlation matrix T_ij = Tr[rho sigma_i (x) sigma_j] with the
// first Pauli index acting on the signal qubit.
Eigen::Matrix3d correlation_matrix(const TwoQubitDensityMatrix& rho);

// Closed-form maximum of |E(a,b)+E(a',b)+E(a,b')-E(a',b')| over projective
// settings: 2 sqrt(u1 + u2) with u1, u2 the two largest eigenvalues of T^T T.
double chsh_horodecki_bound(const TwoQubitDensityMatrix& rho);

struct ChshSearchConfig {
  // Coarse scan resolution per Bloch direction (polar x azimuthal).
  int coarse_theta = 12;
  int coarse_phi = 12;
  // Rounds of cyclic per-direction grid updates before local refinement.
  int sweeps = 4;
  // Independent restarts of the coarse stage from distinct initial settings.
  int multistarts = 3;
  double refine_initial_step = 0.13;
  double refine_min_step = 1e-7;
};

struct ChshResult {
  double s = 0.0;
  // Bloch directions of the four analyzer settings (a, a', b, b').
  std::array<Eigen::Vector3d, 4> directions;
  // The corresponding projectors.
  std::array<Eigen::Matrix2cd, 4> projectors;
};

// Numerical maximization of the CHSH combination over the four analyzer
// settings, parameterized by Bloch angles. Coarse grid scans per direction
// seed a derivative-free local refinement. The returned value is the search
// optimum itself.
ChshResult chsh_maximize(const TwoQubitDensityMatrix& rho,
                         const ChshSearchConfig& config = {});

}  // namespace polpair
