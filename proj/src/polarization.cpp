#include "polpair/polarization.hpp"

#include <cmath>
#include <stdexcept>

#include "polpair/constants.hpp"

namespace polpair {

double omega_from_wavelength_nm(double lambda_nm) {
  if (!(lambda_nm > 0.0)) {
    throw std::invalid_argument("wavelength must be positive");
  }
  return 2.0 * pi * speed_of_light / (lambda_nm * 1e-9);
}

double wavelength_nm_from_omega(double omega) {
  if (!(omega > 0.0)) {
    throw std::invalid_argument("angular frequency must be positive");
  }
  return 2.0 * pi * speed_of_light / omega * 1e9;
}

std::string to_string(PolarizationLabel label) {
  switch (label) {
    case PolarizationLabel::H: return "H";
    case PolarizationLabel::V: return "V";
    case PolarizationLabel::D: return "D";
    case PolarizationLabel::A: return "A";
    case PolarizationLabel::R: return "R";
    case PolarizationLabel::L: return "L";
  }
  throw std::invalid_argument("unknown polarization label");
}

PolarizationLabel polarization_label_from_string(const std::string& s) {
  if (s == "H") return PolarizationLabel::H;
  if (s == "V") return PolarizationLabel::V;
  if (s == "D") return PolarizationLabel::D;
  if (s == "A") return PolarizationLabel::A;
  if (s == "R") return PolarizationLabel::R;
  if (s == "L") return PolarizationLabel::L;
  throw std::invalid_argument("unknown polarization label: " + s);
}

Eigen::Vector2cd jones_vector(PolarizationLabel label) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const complexd i(0.0, 1.0);
  Eigen::Vector2cd v;
  switch (label) {
    case PolarizationLabel::H: v << 1.0, 0.0; break;
    case PolarizationLabel::V: v << 0.0, 1.0; break;
    // D is the -45 degree state, A the +45 degree state.
    case PolarizationLabel::D: v << inv_sqrt2, -inv_sqrt2; break;
    case PolarizationLabel::A: v << inv_sqrt2, inv_sqrt2; break;
    case PolarizationLabel::R: v << inv_sqrt2, -i * inv_sqrt2; break;
    case PolarizationLabel::L: v << inv_sqrt2, i * inv_sqrt2; break;
  }
  return v;
}

Eigen::Matrix2cd projector(PolarizationLabel label) {
  const Eigen::Vector2cd v = jones_vector(label);
  return v * v.adjoint();
}

Eigen::Matrix2cd projector_from_bloch(const Eigen::Vector3d& n) {
  if (std::abs(n.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("Bloch direction must be a unit vector");
  }
  const complexd i(0.0, 1.0);
  Eigen::Matrix2cd m;
  m << 1.0 + n.z(), n.x() - i * n.y(),
       n.x() + i * n.y(), 1.0 - n.z();
  return 0.5 * m;
}

int two_qubit_index(int signal, int idler) { return 2 * idler + signal; }

Eigen::Matrix4cd two_qubit_operator(const Eigen::Matrix2cd& signal_op,
                                    const Eigen::Matrix2cd& idler_op) {
  Eigen::Matrix4cd out;
  for (int b = 0; b < 2; ++b)
    for (int a = 0; a < 2; ++a)
      for (int bp = 0; bp < 2; ++bp)
        for (int ap = 0; ap < 2; ++ap)
          out(two_qubit_index(a, b), two_qubit_index(ap, bp)) =
              signal_op(a, ap) * idler_op(b, bp);
  return out;
}

TwoQubitPureState::TwoQubitPureState(const Eigen::Vector4cd& amps)
    : amps_(amps) {
  if (std::abs(amps.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("two-qubit pure state must have unit norm");
  }
}

TwoQubitPureState superposition_hh_vv(double a, double b, double theta) {
  Eigen::Vector4cd amps = Eigen::Vector4cd::Zero();
  amps(0) = a;
  amps(3) = b * std::polar(1.0, theta);
  return TwoQubitPureState(amps);
}

TwoQubitPureState bell_phi_plus() {
  return superposition_hh_vv(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0.0);
}

TwoQubitPureState bell_phi_minus() {
  return superposition_hh_vv(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), pi);
}

TwoQubitDensityMatrix::TwoQubitDensityMatrix(const Eigen::Matrix4cd& rho)
    : rho_(rho) {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > hermiticity_tolerance) {
    throw std::invalid_argument("density matrix must be Hermitian");
  }
  if (std::abs(rho.trace().real() - 1.0) > trace_tolerance ||
      std::abs(rho.trace().imag()) > trace_tolerance) {
    throw std::invalid_argument("density matrix must have unit trace");
  }
  // Symmetrize exactly, then check the spectrum.
  rho_ = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho_);
  const Eigen::Vector4d evals = es.eigenvalues();
  if (evals.minCoeff() < eigenvalue_floor) {
    throw std::invalid_argument(
        "density matrix is not positive semidefinite (eigenvalue " +
        std::to_string(evals.minCoeff()) + ")");
  }
  if (evals.minCoeff() < 0.0) {
    // Rounding-level negativity: clip to the physical cone and renormalize.
    Eigen::Vector4d clipped = evals.cwiseMax(0.0);
    rho_ = es.eigenvectors() * clipped.asDiagonal() *
           es.eigenvectors().adjoint();
    rho_ /= rho_.trace().real();
    rho_ = 0.5 * (rho_ + rho_.adjoint());
  }
}

TwoQubitDensityMatrix TwoQubitDensityMatrix::from_pure(
    const TwoQubitPureState& psi) {
  return TwoQubitDensityMatrix(psi.density_matrix());
}

TwoQubitDensityMatrix TwoQubitDensityMatrix::maximally_mixed() {
  return TwoQubitDensityMatrix(0.25 * Eigen::Matrix4cd::Identity());
}

TwoQubitDensityMatrix TwoQubitDensityMatrix::werner(double p) {
  if (p < 0.0 || p > 1.0) {
    throw std::invalid_argument("Werner parameter must lie in [0, 1]");
  }
  const Eigen::Matrix4cd rho = p * bell_phi_plus().density_matrix() +
                               (1.0 - p) * 0.25 * Eigen::Matrix4cd::Identity();
  return TwoQubitDensityMatrix(rho);
}

}  // namespace polpair
