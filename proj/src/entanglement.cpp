#include "polpair/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "polpair/constants.hpp"

namespace polpair {

namespace {

// sigma_y (x) sigma_y in the (HH, VH, HV, VV) basis; the matrix is invariant
// under swapping the two qubit slots.
Eigen::Matrix4cd spin_flip_matrix() {
  Eigen::Matrix4cd f = Eigen::Matrix4cd::Zero();
  f(0, 3) = -1.0;
  f(1, 2) = 1.0;
  f(2, 1) = 1.0;
  f(3, 0) = -1.0;
  return f;
}

}  // namespace

double concurrence(const TwoQubitDensityMatrix& rho) {
  const Eigen::Matrix4cd& r = rho.matrix();
  const Eigen::Matrix4cd f = spin_flip_matrix();
  const Eigen::Matrix4cd rho_tilde = f * r.conjugate() * f;
  // Eigenvalues of R = rho * rho_tilde are real and non-negative up to
  // rounding; the concurrence uses their square roots in decreasing order.
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(r * rho_tilde, false);
  std::array<double, 4> lam;
  for (int i = 0; i < 4; ++i) {
    lam[i] = std::sqrt(std::max(0.0, es.eigenvalues()(i).real()));
  }
  std::sort(lam.begin(), lam.end(), std::greater<double>());
  return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

double purity(const TwoQubitDensityMatrix& rho) {
  return (rho.matrix() * rho.matrix()).trace().real();
}

double fidelity_to_pure(const TwoQubitDensityMatrix& rho,
                        const TwoQubitPureState& psi) {
  const Eigen::Vector4cd& v = psi.amplitudes();
  return std::real(v.dot(rho.matrix() * v));
}

double relative_phase(const TwoQubitDensityMatrix& rho, double threshold) {
  const complexd coherence = rho.matrix()(3, 0);  // <VV|rho|HH>
  if (std::abs(coherence) < threshold) {
    throw std::domain_error(
        "phase undefined: |<VV|rho|HH>| below threshold");
  }
  double phase = std::arg(coherence);
  if (phase <= -pi) phase += 2.0 * pi;
  return phase;
}

double trace_distance(const TwoQubitDensityMatrix& rho,
                      const TwoQubitDensityMatrix& sigma) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho.matrix() -
                                                     sigma.matrix());
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace polpair
