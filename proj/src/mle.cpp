#include "polpair/mle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "polpair/chsh.hpp"
#include "polpair/entanglement.hpp"
#include "polpair/optim.hpp"
#include "polpair/rng.hpp"

namespace polpair {

namespace {

const std::array<Eigen::Matrix4cd, 36>& setting_operators() {
  static const std::array<Eigen::Matrix4cd, 36> ops = [] {
    std::array<Eigen::Matrix4cd, 36> list;
    const auto& settings = tomography_settings();
    for (std::size_t k = 0; k < settings.size(); ++k) {
      list[k] = two_qubit_operator(projector(settings[k].signal),
                                   projector(settings[k].idler));
    }
    return list;
  }();
  return ops;
}

// Real span of the Hermitian 4x4 matrices: the four diagonal units, then
// the symmetric and antisymmetric combinations of each off-diagonal pair.
const std::array<Eigen::Matrix4cd, 16>& hermitian_basis() {
  static const std::array<Eigen::Matrix4cd, 16> basis = [] {
    std::array<Eigen::Matrix4cd, 16> list;
    int k = 0;
    for (int i = 0; i < 4; ++i) {
      list[k].setZero();
      list[k](i, i) = 1.0;
      ++k;
    }
    const complexd im(0.0, 1.0);
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) {
        list[k].setZero();
        list[k](i, j) = 1.0;
        list[k](j, i) = 1.0;
        ++k;
        list[k].setZero();
        list[k](i, j) = -im;
        list[k](j, i) = im;
        ++k;
      }
    }
    return list;
  }();
  return basis;
}

// Lower-triangular T from 16 real parameters: diagonal first, then the
// off-diagonal entries row by row as (re, im) pairs.
Eigen::Matrix4cd t_matrix(const Eigen::VectorXd& t) {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  for (int i = 0; i < 4; ++i) m(i, i) = t(i);
  int k = 4;
  for (int i = 1; i < 4; ++i) {
    for (int j = 0; j < i; ++j) {
      m(i, j) = complexd(t(k), t(k + 1));
      k += 2;
    }
  }
  return m;
}

// Inverse of t_matrix for a PSD matrix: reverse the basis order, take the
// Cholesky factor, and reverse back, which turns rho = L L^dag into
// rho = T^dag T with T lower-triangular.
Eigen::VectorXd t_parameters(const Eigen::Matrix4cd& rho) {
  Eigen::Matrix4cd reversed = rho.reverse();
  Eigen::LLT<Eigen::Matrix4cd> llt(reversed);
  if (llt.info() != Eigen::Success) {
    llt.compute(reversed + 1e-12 * Eigen::Matrix4cd::Identity());
    if (llt.info() != Eigen::Success) {
      throw std::runtime_error("maximum-likelihood start is not positive");
    }
  }
  const Eigen::Matrix4cd t =
      Eigen::Matrix4cd(llt.matrixL()).adjoint().reverse();

  Eigen::VectorXd params(16);
  for (int i = 0; i < 4; ++i) params(i) = t(i, i).real();
  int k = 4;
  for (int i = 1; i < 4; ++i) {
    for (int j = 0; j < i; ++j) {
      params(k) = t(i, j).real();
      params(k + 1) = t(i, j).imag();
      k += 2;
    }
  }
  return params;
}

// Poisson deviance against the saturated model. A constant shift of the
// log-likelihood, so the same minimizer, but valued near zero at the
// optimum where absolute 1e-9 improvements remain resolvable in doubles.
double deviance(const Eigen::VectorXd& x,
                const std::array<double, 36>& counts) {
  const Eigen::Matrix4cd t = t_matrix(x.head(16));
  const Eigen::Matrix4cd rho = t.adjoint() * t;
  const double trace = rho.trace().real();
  if (!(trace > 0.0) || !std::isfinite(trace)) return 1e300;
  const double scale = std::exp(x(16));
  if (!std::isfinite(scale)) return 1e300;

  const auto& ops = setting_operators();
  double total = 0.0;
  for (int k = 0; k < 36; ++k) {
    const double p =
        std::max((rho.cwiseProduct(ops[k].transpose())).sum().real() / trace,
                 1e-15);
    const double m = scale * p;
    total += m - counts[k];
    if (counts[k] > 0.0) total += counts[k] * std::log(counts[k] / m);
  }
  return total;
}

double log_likelihood_of(const TwoQubitDensityMatrix& rho, double scale,
                         const std::array<double, 36>& counts) {
  const auto& ops = setting_operators();
  double total = 0.0;
  for (int k = 0; k < 36; ++k) {
    const double p = std::max(
        (rho.matrix().cwiseProduct(ops[k].transpose())).sum().real(), 1e-15);
    const double m = scale * p;
    total += counts[k] * std::log(m) - m;
  }
  return total;
}

Eigen::Matrix4cd clip_to_physical(const Eigen::Matrix4cd& x, double floor) {
  Eigen::Matrix4cd h = 0.5 * (x + x.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(h);
  Eigen::Vector4d ev = es.eigenvalues().cwiseMax(floor);
  Eigen::Matrix4cd out = es.eigenvectors() * ev.asDiagonal() *
                         es.eigenvectors().adjoint();
  return out / out.trace().real();
}

}  // namespace

std::array<double, 36> effective_counts(const TomographyDataset& dataset,
                                        bool subtract_accidentals) {
  std::array<double, 36> counts;
  for (int k = 0; k < 36; ++k) {
    const CountRecord& rec = dataset.records[k];
    counts[k] = subtract_accidentals
                    ? static_cast<double>(
                          std::max(0ll, rec.coincidences - rec.accidentals))
                    : static_cast<double>(rec.coincidences);
  }
  return counts;
}

TwoQubitDensityMatrix linear_inversion(const std::array<double, 36>& counts) {
  double total = 0.0;
  for (double n : counts) total += n;
  if (!(total > 0.0)) {
    throw std::invalid_argument(
        "insufficient counts: tomographic inversion needs nonzero data");
  }
  const double scale = total / 9.0;

  const auto& basis = hermitian_basis();
  const auto& ops = setting_operators();
  Eigen::MatrixXd a(36, 16);
  Eigen::VectorXd y(36);
  for (int k = 0; k < 36; ++k) {
    for (int i = 0; i < 16; ++i) {
      a(k, i) = (basis[i].cwiseProduct(ops[k].transpose())).sum().real();
    }
    y(k) = counts[k] / scale;
  }
  const Eigen::VectorXd c = a.colPivHouseholderQr().solve(y);

  Eigen::Matrix4cd x = Eigen::Matrix4cd::Zero();
  for (int i = 0; i < 16; ++i) x += c(i) * basis[i];
  return TwoQubitDensityMatrix(clip_to_physical(x, 0.0));
}

MleResult mle_fit(const std::array<double, 36>& counts,
                  const MleOptions& options) {
  double total = 0.0;
  for (double n : counts) {
    if (n < 0.0 || !std::isfinite(n)) {
      throw std::invalid_argument("counts must be finite and non-negative");
    }
    total += n;
  }
  if (!(total > 0.0)) {
    throw std::invalid_argument(
        "insufficient counts: maximum-likelihood reconstruction needs a "
        "nonzero total");
  }

  // Start from the linear inversion, pushed strictly inside the physical
  // set so the Cholesky factorization is well defined.
  const TwoQubitDensityMatrix start = linear_inversion(counts);
  Eigen::Matrix4cd rho0 = clip_to_physical(start.matrix(), 1e-6);
  Eigen::VectorXd x0(17);
  Eigen::VectorXd t0 = t_parameters(rho0);
  x0.head(16) = t0 / t0.norm();
  x0(16) = std::log(total / 9.0);

  NelderMeadOptions nm;
  nm.max_iterations = options.max_iterations;
  nm.tolerance = options.tolerance;
  nm.initial_step = 0.02;
  const NelderMeadResult opt = nelder_mead(
      [&counts](const Eigen::VectorXd& x) { return deviance(x, counts); },
      x0, nm);

  const Eigen::Matrix4cd t = t_matrix(opt.x.head(16));
  Eigen::Matrix4cd rho = t.adjoint() * t;
  rho = 0.5 * (rho + rho.adjoint());
  rho /= rho.trace().real();

  MleResult result{TwoQubitDensityMatrix(rho), 0.0, std::exp(opt.x(16)),
                   opt.iterations, opt.converged};
  result.log_likelihood = log_likelihood_of(result.rho, result.scale, counts);
  return result;
}

MleResult mle_reconstruct(const TomographyDataset& dataset,
                          bool subtract_accidentals,
                          const MleOptions& options) {
  return mle_fit(effective_counts(dataset, subtract_accidentals), options);
}

namespace {

struct Accumulator {
  std::vector<double> values;

  void add(double v) {
    if (std::isfinite(v)) values.push_back(v);
  }

  SummaryStat stat() const {
    SummaryStat s;
    s.count = static_cast<int>(values.size());
    if (values.empty()) return s;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / s.count;
    if (s.count > 1) {
      double ss = 0.0;
      for (double v : values) ss += (v - s.mean) * (v - s.mean);
      s.std = std::sqrt(ss / (s.count - 1));
    }
    return s;
  }
};

}  // namespace

MonteCarloSummary monte_carlo_errors(const TomographyDataset& dataset,
                                     std::uint64_t rng_seed,
                                     const MonteCarloOptions& options) {
  if (options.n_instances < 1) {
    throw std::invalid_argument("Monte Carlo needs at least one instance");
  }

  Accumulator conc, chsh, pur, theta, fplus, fminus;
  const TwoQubitPureState phi_plus = bell_phi_plus();
  const TwoQubitPureState phi_minus = bell_phi_minus();
  int skipped = 0;

  for (int instance = 0; instance < options.n_instances; ++instance) {
    RandomStream stream(
        derive_seed(rng_seed, "mc-instance", 0, instance));
    std::array<double, 36> counts;
    for (int k = 0; k < 36; ++k) {
      const CountRecord& rec = dataset.records[k];
      long long n = rec.coincidences;
      long long acc = rec.accidentals;
      if (options.resample) {
        n = stream.poisson(static_cast<double>(rec.coincidences));
        acc = stream.poisson(static_cast<double>(rec.accidentals));
      }
      counts[k] = options.subtract_accidentals
                      ? static_cast<double>(std::max(0ll, n - acc))
                      : static_cast<double>(n);
    }

    try {
      const MleResult fit = mle_fit(counts, options.mle);
      conc.add(concurrence(fit.rho));
      chsh.add(chsh_horodecki_bound(fit.rho));
      pur.add(purity(fit.rho));
      fplus.add(fidelity_to_pure(fit.rho, phi_plus));
      fminus.add(fidelity_to_pure(fit.rho, phi_minus));
      try {
        theta.add(relative_phase(fit.rho));
      } catch (const std::domain_error&) {
        // Phase undefined for this instance; summarized over the rest.
      }
    } catch (const std::exception&) {
      ++skipped;
    }
  }

  if (20 * skipped > options.n_instances) {
    throw std::runtime_error("Monte Carlo error estimation skipped " +
                             std::to_string(skipped) + " of " +
                             std::to_string(options.n_instances) +
                             " instances");
  }

  MonteCarloSummary summary;
  summary.concurrence = conc.stat();
  summary.chsh = chsh.stat();
  summary.purity = pur.stat();
  summary.theta = theta.stat();
  summary.f_phi_plus = fplus.stat();
  summary.f_phi_minus = fminus.stat();
  summary.instances = options.n_instances;
  summary.skipped = skipped;
  return summary;
}

namespace {

json stat_json(const SummaryStat& s) {
  if (s.count == 0) return nullptr;
  return json{{"mean", s.mean}, {"std", s.std}, {"count", s.count}};
}

}  // namespace

json reconstruction_report(const MleResult& fit, const MonteCarloSummary& mc,
                           std::uint64_t seed, bool subtracted) {
  json metrics;
  metrics["concurrence"] = concurrence(fit.rho);
  metrics["chsh"] = chsh_horodecki_bound(fit.rho);
  metrics["purity"] = purity(fit.rho);
  try {
    metrics["relative_phase_rad"] = relative_phase(fit.rho);
  } catch (const std::domain_error&) {
    metrics["relative_phase_rad"] = nullptr;
  }
  metrics["f_phi_plus"] = fidelity_to_pure(fit.rho, bell_phi_plus());
  metrics["f_phi_minus"] = fidelity_to_pure(fit.rho, bell_phi_minus());

  json report;
  report["seed"] = seed;
  report["accidental_subtraction"] = subtracted;
  report["density_matrix"] = density_matrix_to_json(fit.rho);
  report["metrics"] = metrics;
  report["fit"] = {{"log_likelihood", fit.log_likelihood},
                   {"scale", fit.scale},
                   {"iterations", fit.iterations},
                   {"converged", fit.converged}};
  report["monte_carlo"] = {{"instances", mc.instances},
                           {"skipped", mc.skipped},
                           {"concurrence", stat_json(mc.concurrence)},
                           {"chsh", stat_json(mc.chsh)},
                           {"purity", stat_json(mc.purity)},
                           {"relative_phase_rad", stat_json(mc.theta)},
                           {"f_phi_plus", stat_json(mc.f_phi_plus)},
                           {"f_phi_minus", stat_json(mc.f_phi_minus)}};
  return report;
}

}  // namespace polpair
