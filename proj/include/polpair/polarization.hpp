#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <string>

namespace polpair {

using complexd = std::complex<double>;

// Measurement/analysis polarizations: horizontal, vertical, diagonal (-45 deg),
// anti-diagonal (+45 deg), right and left circular.
enum class PolarizationLabel { H, V, D, A, R, L };

inline constexpr std::array<PolarizationLabel, 6> all_polarization_labels = {
    PolarizationLabel::H, PolarizationLabel::V, PolarizationLabel::D,
    PolarizationLabel::A, PolarizationLabel::R, PolarizationLabel::L};

std::string to_string(PolarizationLabel label);
PolarizationLabel polarization_label_from_string(const std::string& s);

// Unit Jones vector of a polarization label in the {H, V} basis.
Eigen::Vector2cd jones_vector(PolarizationLabel label);

// Rank-one projector |x><x| onto a polarization label. Hermitian, idempotent,
// unit trace.
Eigen::Matrix2cd projector(PolarizationLabel label);

// Projector (I + n.sigma)/2 onto the +1 eigenstate of the Bloch direction n.
// n must be a unit vector.
Eigen::Matrix2cd projector_from_bloch(const Eigen::Vector3d& n);

// Two-qubit basis order is (HH, VH, HV, VV): the signal letter varies fastest.
// index = 2 * idler + signal with H=0, V=1.
inline constexpr std::array<const char*, 4> two_qubit_basis_labels = {
    "HH", "VH", "HV", "VV"};

int two_qubit_index(int signal, int idler);

// Embed single-qubit operators acting on the signal and idler slots into the
// (HH, VH, HV, VV) product basis.
Eigen::Matrix4cd two_qubit_operator(const Eigen::Matrix2cd& signal_op,
                                    const Eigen::Matrix2cd& idler_op);

// Normalized two-photon polarization ket in the (HH, VH, HV, VV) basis.
class TwoQubitPureState {
 public:
  // amps must have unit norm within 1e-12.
  explicit TwoQubitPureState(const Eigen::Vector4cd& amps);

  const Eigen::Vector4cd& amplitudes() const { return amps_; }
  Eigen::Matrix4cd density_matrix() const { return amps_ * amps_.adjoint(); }

 private:
  Eigen::Vector4cd amps_;
};

// a|HH> + b e^{i theta}|VV> with real non-negative a, b, a^2 + b^2 = 1.
TwoQubitPureState superposition_hh_vv(double a, double b, double theta);

TwoQubitPureState bell_phi_plus();   // (|HH> + |VV>)/sqrt(2)
TwoQubitPureState bell_phi_minus();  // (|HH> - |VV>)/sqrt(2)

// Validated 4x4 polarization density matrix in the (HH, VH, HV, VV) basis.
//
// Construction enforces hermiticity and unit trace within 1e-12 and positive
// semidefiniteness: eigenvalues in [-1e-10, 0) are treated as rounding noise
// and clipped to zero, anything more negative is rejected.
class TwoQubitDensityMatrix {
 public:
  explicit TwoQubitDensityMatrix(const Eigen::Matrix4cd& rho);

  const Eigen::Matrix4cd& matrix() const { return rho_; }

  static TwoQubitDensityMatrix from_pure(const TwoQubitPureState& psi);

  // Maximally mixed I/4.
  static TwoQubitDensityMatrix maximally_mixed();

  // p |Phi+><Phi+| + (1-p) I/4 for p in [0, 1].
  static TwoQubitDensityMatrix werner(double p);

  static constexpr double hermiticity_tolerance = 1e-12;
  static constexpr double trace_tolerance = 1e-12;
  static constexpr double eigenvalue_floor = -1e-10;

 private:
  Eigen::Matrix4cd rho_;
};

}  // namespace polpair
