#include "polpair/analysis.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "polpair/chsh.hpp"
#include "polpair/entanglement.hpp"
#include "polpair/optim.hpp"
#include "polpair/rng.hpp"
#include "polpair/serialization.hpp"

namespace polpair {

namespace {

Eigen::Matrix4cd matrix_sqrt(const Eigen::Matrix4cd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(m);
  Eigen::Vector4d roots = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * roots.asDiagonal() *
         es.eigenvectors().adjoint();
}

struct Accumulator {
  double sum = 0.0;
  double sum_sq = 0.0;
  int n = 0;

  void add(double x) {
    sum += x;
    sum_sq += x * x;
    ++n;
  }
  double mean() const { return n > 0 ? sum / n : 0.0; }
  double std() const {
    if (n < 2) return 0.0;
    const double m = mean();
    const double var = (sum_sq - n * m * m) / (n - 1);
    return var > 0.0 ? std::sqrt(var) : 0.0;
  }
};

}  // namespace

double fidelity(const TwoQubitDensityMatrix& rho,
                const TwoQubitDensityMatrix& sigma) {
  const Eigen::Matrix4cd root = matrix_sqrt(rho.matrix());
  const Eigen::Matrix4cd inner = root * sigma.matrix() * root;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(
      (inner + inner.adjoint()) / 2.0);
  const double trace_root =
      es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return std::min(1.0, trace_root * trace_root);
}

BellFidelities bell_fidelities(const TwoQubitDensityMatrix& rho) {
  return BellFidelities{fidelity_to_pure(rho, bell_phi_plus()),
                        fidelity_to_pure(rho, bell_phi_minus())};
}

TwoQubitPureState hh_vv_model_state(const TwoQubitDensityMatrix& rho) {
  const double hh = rho.matrix()(0, 0).real();
  const double vv = rho.matrix()(3, 3).real();
  const double weight = hh + vv;
  if (weight <= 1e-12) {
    throw std::domain_error(
        "model state undefined: no population in the HH/VV sector");
  }
  const double theta = std::arg(rho.matrix()(3, 0));
  return superposition_hh_vv(std::sqrt(std::max(0.0, hh) / weight),
                             std::sqrt(std::max(0.0, vv) / weight), theta);
}

MixtureDecomposition mixture_decompose(const TwoQubitDensityMatrix& observed,
                                       const TwoQubitDensityMatrix& model) {
  Eigen::Matrix4cd hh = Eigen::Matrix4cd::Zero();
  hh(0, 0) = 1.0;
  Eigen::Matrix4cd vv = Eigen::Matrix4cd::Zero();
  vv(3, 3) = 1.0;
  const std::array<Eigen::Matrix4cd, 3> components = {model.matrix(), hh,
                                                      vv};

  const auto mixture_fidelity = [&](double p0, double p1,
                                    double p2) -> double {
    const Eigen::Matrix4cd mix =
        p0 * components[0] + p1 * components[1] + p2 * components[2];
    return fidelity(observed, TwoQubitDensityMatrix(mix));
  };

  std::array<double, 3> best = {1.0, 0.0, 0.0};
  double best_value = -1.0;
  for (int i = 0; i <= 20; ++i) {
    for (int j = 0; i + j <= 20; ++j) {
      const double p0 = 0.05 * i;
      const double p1 = 0.05 * j;
      const double p2 = std::max(0.0, 1.0 - p0 - p1);
      const double value = mixture_fidelity(p0, p1, p2);
      if (value > best_value) {
        best_value = value;
        best = {p0, p1, p2};
      }
    }
  }

  // Refine in square-root coordinates y with p_i = y_i^2 / |y|^2, which
  // keeps the simplex boundary exactly representable and the map smooth.
  Eigen::VectorXd y0(3);
  y0 << std::sqrt(best[0]), std::sqrt(best[1]), std::sqrt(best[2]);
  const auto objective = [&](const Eigen::VectorXd& y) -> double {
    const double norm = y.squaredNorm();
    if (!(norm > 1e-12)) return 1.0;
    return -mixture_fidelity(y(0) * y(0) / norm, y(1) * y(1) / norm,
                             y(2) * y(2) / norm);
  };
  NelderMeadOptions options;
  options.initial_step = 0.05;
  options.tolerance = 1e-12;
  options.max_iterations = 4000;
  const NelderMeadResult refined = nelder_mead(objective, y0, options);

  MixtureDecomposition result;
  result.model = model;
  if (-refined.value > best_value && refined.x.squaredNorm() > 1e-12) {
    const double norm = refined.x.squaredNorm();
    for (int i = 0; i < 3; ++i) {
      result.probabilities[i] = refined.x(i) * refined.x(i) / norm;
    }
    result.fidelity = -refined.value;
  } else {
    result.probabilities = best;
    result.fidelity = best_value;
  }
  const double total = result.probabilities[0] + result.probabilities[1] +
                       result.probabilities[2];
  for (double& p : result.probabilities) p /= total;
  return result;
}

SweepResult width_sweep(const WaveguideFamily& family,
                        const std::vector<double>& widths_nm,
                        const SweepOptions& options, std::uint64_t rng_seed) {
  if (!family) {
    throw std::invalid_argument("width sweep needs a waveguide family");
  }
  if (widths_nm.empty()) {
    throw std::invalid_argument("width sweep needs at least one width");
  }
  for (std::size_t i = 1; i < widths_nm.size(); ++i) {
    if (!(widths_nm[i] > widths_nm[i - 1])) {
      throw std::invalid_argument(
          "sweep widths must be strictly increasing");
    }
  }
  if (options.replicas < 1) {
    throw std::invalid_argument("sweep needs at least one replica per width");
  }
  options.experiment.validate();

  SweepResult result;
  result.records.reserve(widths_nm.size());
  for (double width : widths_nm) {
    try {
      const WaveguideSpec spec = family(width);
      const Prediction prediction = predict_polarization_state(
          spec, options.pump, options.filter, options.grid);

      SweepRecord record;
      record.width_nm = width;
      record.dgi =
          group_index_difference(spec, options.pump.center_omega());
      record.r = prediction.ratio;
      record.c_pure = concurrence(prediction.rho);
      try {
        record.theta_rad = relative_phase(prediction.rho);
      } catch (const std::domain_error&) {
        record.theta_rad = std::numeric_limits<double>::quiet_NaN();
      }
      const BellFidelities bf = bell_fidelities(prediction.rho);
      record.f_phi_plus = bf.f_plus;
      record.f_phi_minus = bf.f_minus;

      Accumulator c_raw, c_acs, s, pur;
      for (int replica = 0; replica < options.replicas; ++replica) {
        const std::uint64_t seed = derive_seed(
            rng_seed, "sweep-replica", stream_key(width), replica);
        const TomographyDataset dataset =
            simulate_dataset(prediction.rho, options.experiment, seed);
        const MleResult raw =
            mle_reconstruct(dataset, false, options.mle);
        const MleResult acs = mle_reconstruct(dataset, true, options.mle);
        c_raw.add(concurrence(raw.rho));
        c_acs.add(concurrence(acs.rho));
        s.add(chsh_horodecki_bound(acs.rho));
        pur.add(purity(acs.rho));
      }
      record.c_raw_mean = c_raw.mean();
      record.c_raw_std = c_raw.std();
      record.c_acs_mean = c_acs.mean();
      record.c_acs_std = c_acs.std();
      record.s_mean = s.mean();
      record.s_std = s.std();
      record.purity_mean = pur.mean();
      result.records.push_back(record);
    } catch (const std::exception& error) {
      throw std::runtime_error("width " + format_double(width) +
                               " nm: " + error.what());
    }
  }
  return result;
}

std::string sweep_to_csv(const SweepResult& result) {
  std::string csv =
      "width_nm,dgi,r,c_pure,c_raw_mean,c_raw_std,c_acs_mean,c_acs_std,"
      "s_mean,s_std,purity_mean,theta_rad,f_phi_plus,f_phi_minus\n";
  for (const SweepRecord& rec : result.records) {
    const double columns[] = {rec.width_nm,    rec.dgi,
                              rec.r,           rec.c_pure,
                              rec.c_raw_mean,  rec.c_raw_std,
                              rec.c_acs_mean,  rec.c_acs_std,
                              rec.s_mean,      rec.s_std,
                              rec.purity_mean, rec.theta_rad,
                              rec.f_phi_plus,  rec.f_phi_minus};
    for (int i = 0; i < 14; ++i) {
      if (i > 0) csv += ',';
      csv += format_double(columns[i]);
    }
    csv += '\n';
  }
  return csv;
}

}  // namespace polpair
