#pragma once

// Shared helpers for the test suites: seeded random states and independent
// reference computations used to cross-check the library implementations.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>

#include "polpair/polarization.hpp"

namespace testsupport {

using polpair::complexd;

inline std::mt19937_64 make_rng(uint64_t seed) { return std::mt19937_64(seed); }

// Random density matrix from the Ginibre ensemble: G G^dag / Tr.
inline polpair::TwoQubitDensityMatrix random_density_matrix(
    std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::Matrix4cd g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) = complexd(gauss(rng), gauss(rng));
  Eigen::Matrix4cd rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint());
  return polpair::TwoQubitDensityMatrix(rho);
}

// Random a|HH> + b e^{i theta}|VV> state.
inline polpair::TwoQubitPureState random_hh_vv_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double chi = std::asin(std::sqrt(u01(rng)));
  const double theta = 2.0 * M_PI * u01(rng) - M_PI;
  return polpair::superposition_hh_vv(std::cos(chi), std::sin(chi), theta);
}

// Haar-ish random single-qubit unitary.
inline Eigen::Matrix2cd random_unitary_2(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double a = 2.0 * M_PI * u01(rng);
  const double b = 2.0 * M_PI * u01(rng);
  const double g = 2.0 * M_PI * u01(rng);
  const double c = std::acos(std::sqrt(u01(rng)));
  Eigen::Matrix2cd u;
  u << std::polar(std::cos(c), a), std::polar(std::sin(c), b),
      -std::polar(std::sin(c), -b), std::polar(std::cos(c), -a);
  return std::polar(1.0, g) * u;
}

// Reference concurrence via the original square-root-matrix route:
// eigenvalues of sqrt(sqrt(rho) rho_tilde sqrt(rho)). Algebraically distinct
// from the product-eigenvalue route used by the library.
inline double concurrence_sqrt_route(const Eigen::Matrix4cd& rho) {
  Eigen::Matrix4cd f = Eigen::Matrix4cd::Zero();
  f(0, 3) = -1.0;
  f(1, 2) = 1.0;
  f(2, 1) = 1.0;
  f(3, 0) = -1.0;
  const Eigen::Matrix4cd rho_tilde = f * rho.conjugate() * f;

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es_rho(rho);
  Eigen::Vector4d ev = es_rho.eigenvalues().cwiseMax(0.0);
  const Eigen::Matrix4cd sqrt_rho = es_rho.eigenvectors() *
                                    ev.cwiseSqrt().asDiagonal() *
                                    es_rho.eigenvectors().adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es_m(
      sqrt_rho * rho_tilde * sqrt_rho);
  Eigen::Vector4d lam = es_m.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  std::sort(lam.data(), lam.data() + 4, std::greater<double>());
  return std::max(0.0, lam(0) - lam(1) - lam(2) - lam(3));
}

}  // namespace testsupport
