#include "polpair/chsh.hpp"

#include <cmath>

#include "polpair/constants.hpp"
#include "polpair/optim.hpp"

namespace polpair {

namespace {

Eigen::Matrix2cd pauli(int i) {
  const complexd im(0.0, 1.0);
  Eigen::Matrix2cd m;
  switch (i) {
    case 0: m << 0, 1, 1, 0; break;
    case 1: m << 0, -im, im, 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

Eigen::Vector3d direction_from_angles(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
          std::cos(theta)};
}

// CHSH combination for settings given as Bloch directions, using the
// precomputed correlation matrix: E(a, b) = a . (T b).
double chsh_value(const Eigen::Matrix3d& t,
                  const std::array<Eigen::Vector3d, 4>& n) {
  const Eigen::Vector3d tb = t * n[2];
  const Eigen::Vector3d tbp = t * n[3];
  return std::abs(n[0].dot(tb) + n[1].dot(tb) + n[0].dot(tbp) -
                  n[1].dot(tbp));
}

std::array<Eigen::Vector3d, 4> directions_from_angles(
    const Eigen::VectorXd& angles) {
  std::array<Eigen::Vector3d, 4> n;
  for (int d = 0; d < 4; ++d) {
    n[d] = direction_from_angles(angles(2 * d), angles(2 * d + 1));
  }
  return n;
}

}  // namespace

double chsh_correlation(const TwoQubitDensityMatrix& rho,
                        const Eigen::Matrix2cd& projector_a,
                        const Eigen::Matrix2cd& projector_b) {
  const Eigen::Matrix2cd obs_a =
      2.0 * projector_a - Eigen::Matrix2cd::Identity();
  const Eigen::Matrix2cd obs_b =
      2.0 * projector_b - Eigen::Matrix2cd::Identity();
  return (rho.matrix() * two_qubit_operator(obs_a, obs_b)).trace().real();
}

Eigen::Matrix3d correlation_matrix(const TwoQubitDensityMatrix& rho) {
  Eigen::Matrix3d t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      t(i, j) =
          (rho.matrix() * two_qubit_operator(pauli(i), pauli(j))).trace().real();
  return t;
}

double chsh_horodecki_bound(const TwoQubitDensityMatrix& rho) {
  const Eigen::Matrix3d t = correlation_matrix(rho);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(t.transpose() * t);
  const Eigen::Vector3d u = es.eigenvalues();  // ascending
  return 2.0 * std::sqrt(u(2) + u(1));
}

ChshResult chsh_maximize(const TwoQubitDensityMatrix& rho,
                         const ChshSearchConfig& config) {
  const Eigen::Matrix3d t = correlation_matrix(rho);

  // Starting settings for the multistarts: the textbook X-Z plane choice and
  // fixed rotations of it, so restarts probe distinct basins.
  std::vector<Eigen::VectorXd> starts;
  {
    Eigen::VectorXd canonical(8);
    canonical << 0.0, 0.0, pi / 2, 0.0, pi / 4, 0.0, 3 * pi / 4, 0.0;
    starts.push_back(canonical);
    for (int k = 1; k < config.multistarts; ++k) {
      Eigen::VectorXd s = canonical;
      for (int d = 0; d < 4; ++d) {
        s(2 * d) += 0.4 * k;
        s(2 * d + 1) += (pi / 2) * k + 0.3 * d;
      }
      starts.push_back(s);
    }
  }

  Eigen::VectorXd best_angles;
  double best = -1.0;
  for (const Eigen::VectorXd& start : starts) {
    Eigen::VectorXd angles = start;
    auto n = directions_from_angles(angles);

    // Cyclic coarse stage: scan each direction over its angular grid while
    // holding the other three fixed.
    for (int sweep = 0; sweep < config.sweeps; ++sweep) {
      for (int d = 0; d < 4; ++d) {
        double local_best = chsh_value(t, n);
        double th_best = angles(2 * d), ph_best = angles(2 * d + 1);
        for (int i = 0; i < config.coarse_theta; ++i) {
          const double th = (i + 0.5) * pi / config.coarse_theta;
          for (int j = 0; j < config.coarse_phi; ++j) {
            const double ph = j * 2.0 * pi / config.coarse_phi;
            n[d] = direction_from_angles(th, ph);
            const double v = chsh_value(t, n);
            if (v > local_best) {
              local_best = v;
              th_best = th;
              ph_best = ph;
            }
          }
        }
        angles(2 * d) = th_best;
        angles(2 * d + 1) = ph_best;
        n[d] = direction_from_angles(th_best, ph_best);
      }
    }

    // Local refinement of all eight angles at once.
    const auto objective = [&](const Eigen::VectorXd& a) {
      return -chsh_value(t, directions_from_angles(a));
    };
    CompassOptions copts;
    copts.initial_step = config.refine_initial_step;
    copts.min_step = config.refine_min_step;
    const NelderMeadResult refined = compass_search(objective, angles, copts);
    if (-refined.value > best) {
      best = -refined.value;
      best_angles = refined.x;
    }
  }

  ChshResult result;
  result.s = best;
  result.directions = directions_from_angles(best_angles);
  for (int d = 0; d < 4; ++d) {
    result.projectors[d] = projector_from_bloch(result.directions[d]);
  }
  return result;
}

}  // namespace polpair
