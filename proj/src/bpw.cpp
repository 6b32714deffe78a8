#include "polpair/bpw.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "polpair/constants.hpp"

namespace polpair {

namespace {

constexpr std::array<const char*, 8> kProcessCodes = {
    "HHHH", "HHVV", "VVVV", "VVHH", "HVHV", "HVVH", "VHHV", "VHVH"};

double sinc(double x) {
  if (std::abs(x) < 1e-6) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

int sector_index(const std::string& st) {
  auto bit = [](char c) {
    if (c == 'H') return 0;
    if (c == 'V') return 1;
    throw std::invalid_argument("sector letters must be 'H' or 'V'");
  };
  if (st.size() != 2) throw std::invalid_argument("sector needs two letters");
  return two_qubit_index(bit(st[0]), bit(st[1]));
}

void check_same_grid(const BiphotonAmplitude& a, const BiphotonAmplitude& b) {
  if (a.signal.size() != b.signal.size() || a.idler.size() != b.idler.size() ||
      a.signal_step != b.signal_step || a.idler_step != b.idler_step ||
      (a.signal.size() > 0 && a.signal(0) != b.signal(0)) ||
      (a.idler.size() > 0 && a.idler(0) != b.idler(0))) {
    throw std::invalid_argument("amplitude grids do not match");
  }
}

}  // namespace

SfwmProcess SfwmProcess::from_code(const std::string& code) {
  for (const char* candidate : kProcessCodes) {
    if (code == candidate) {
      return SfwmProcess{code[0], code[1], code[2], code[3]};
    }
  }
  throw std::invalid_argument("unknown SFWM process code '" + code + "'");
}

std::string SfwmProcess::code() const {
  return std::string{signal, idler, pump1, pump2};
}

std::string SfwmProcess::sector() const { return std::string{signal, idler}; }

const std::array<SfwmProcess, 8>& all_sfwm_processes() {
  static const std::array<SfwmProcess, 8> processes = [] {
    std::array<SfwmProcess, 8> list{};
    for (std::size_t i = 0; i < kProcessCodes.size(); ++i) {
      list[i] = SfwmProcess::from_code(kProcessCodes[i]);
    }
    return list;
  }();
  return processes;
}

double PumpSpectrum::center_omega() const {
  return omega_from_wavelength_nm(center_nm);
}

double PumpSpectrum::half_width_omega() const { return pi * bandwidth_hz; }

bool FilterFunction::passes(double omega1, double omega2) const {
  const double hw = pi * bandwidth_hz;
  return std::abs(omega1 - omega_from_wavelength_nm(signal_center_nm)) <= hw &&
         std::abs(omega2 - omega_from_wavelength_nm(idler_center_nm)) <= hw;
}

FrequencyGrid make_frequency_grid(const FilterFunction& filter,
                                  const GridSpec& grid) {
  if (grid.points_per_passband < 2) {
    throw std::invalid_argument("grid needs at least 2 points per passband");
  }
  if (!(grid.span > 0.0)) {
    throw std::invalid_argument("grid span must be positive");
  }
  const double hw = pi * filter.bandwidth_hz;
  const int n = std::max(
      2, static_cast<int>(std::lround(grid.points_per_passband * grid.span)));

  auto axis = [&](double center_nm, Eigen::VectorXd& out, double& step) {
    const double center = omega_from_wavelength_nm(center_nm);
    const double lo = center - grid.span * hw;
    step = 2.0 * grid.span * hw / n;
    out.resize(n);
    for (int i = 0; i < n; ++i) out(i) = lo + (i + 0.5) * step;
  };

  FrequencyGrid g;
  axis(filter.signal_center_nm, g.signal, g.signal_step);
  axis(filter.idler_center_nm, g.idler, g.idler_step);
  return g;
}

double BiphotonAmplitude::squared_norm() const {
  return amplitude.squaredNorm() * signal_step * idler_step;
}

std::complex<double> overlap(const BiphotonAmplitude& a,
                             const BiphotonAmplitude& b) {
  check_same_grid(a, b);
  return (a.amplitude.conjugate().cwiseProduct(b.amplitude)).sum() *
         a.signal_step * a.idler_step;
}

BiphotonAmplitude compute_process_bpw(const WaveguideSpec& spec,
                                      const SfwmProcess& process,
                                      const PumpSpectrum& pump,
                                      const FrequencyGrid& grid,
                                      int pump_quadrature_points) {
  if (pump_quadrature_points < 8) {
    throw std::invalid_argument("pump quadrature needs at least 8 points");
  }
  const ModeDispersion& mode_s = spec.mode_for(process.signal);
  const ModeDispersion& mode_t = spec.mode_for(process.idler);
  const ModeDispersion& mode_u = spec.mode_for(process.pump1);
  const ModeDispersion& mode_v = spec.mode_for(process.pump2);

  const double wp = pump.center_omega();
  const double hw = pump.half_width_omega();
  const double full_width = 2.0 * hw;
  const double half_length = spec.length / 2.0;

  const int n1 = static_cast<int>(grid.signal.size());
  const int n2 = static_cast<int>(grid.idler.size());

  Eigen::VectorXd k_signal(n1), root_signal(n1);
  for (int i = 0; i < n1; ++i) {
    k_signal(i) = mode_s.propagation_constant(grid.signal(i));
    root_signal(i) = std::sqrt(grid.signal(i)) / wp;
  }
  Eigen::VectorXd k_idler(n2), root_idler(n2);
  for (int j = 0; j < n2; ++j) {
    k_idler(j) = mode_t.propagation_constant(grid.idler(j));
    root_idler(j) = std::sqrt(grid.idler(j)) / wp;
  }

  BiphotonAmplitude out;
  out.signal = grid.signal;
  out.idler = grid.idler;
  out.signal_step = grid.signal_step;
  out.idler_step = grid.idler_step;
  out.amplitude.setZero(n1, n2);

  for (int i = 0; i < n1; ++i) {
    const double w1 = grid.signal(i);
    for (int j = 0; j < n2; ++j) {
      const double w2 = grid.idler(j);
      const double total = w1 + w2;
      // Support of pump(w3) * pump(total - w3).
      const double lo = std::max(wp - hw, total - wp - hw);
      const double hi = std::min(wp + hw, total - wp + hw);
      if (hi <= lo) continue;

      const double step = (hi - lo) / pump_quadrature_points;
      const double k_pair = k_signal(i) + k_idler(j);
      std::complex<double> acc(0.0, 0.0);
      for (int q = 0; q < pump_quadrature_points; ++q) {
        const double w3 = lo + (q + 0.5) * step;
        const double w4 = total - w3;
        const double ku = mode_u.propagation_constant(w3);
        const double kv = mode_v.propagation_constant(w4);
        const double mismatch = k_pair - ku - kv;
        const double kernel =
            sinc(mismatch * half_length) * std::sqrt(w3 * w4) / wp;
        acc += kernel * std::polar(1.0, (ku + kv) * half_length);
      }
      out.amplitude(i, j) = acc * std::polar(1.0, k_pair * half_length) *
                            (root_signal(i) * root_idler(j) * step /
                             full_width);
    }
  }
  return out;
}

const BiphotonAmplitude& SectorAmplitudes::sector(const std::string& st) const {
  switch (sector_index(st)) {
    case 0: return hh;
    case 1: return vh;
    case 2: return hv;
    default: return vv;
  }
}

namespace {

struct ProcessSet {
  FrequencyGrid grid;
  // Filtered amplitudes, indexed as in kProcessCodes.
  std::array<BiphotonAmplitude, 8> amp;

  const BiphotonAmplitude& by_code(const std::string& code) const {
    for (std::size_t i = 0; i < kProcessCodes.size(); ++i) {
      if (code == kProcessCodes[i]) return amp[i];
    }
    throw std::invalid_argument("unknown SFWM process code '" + code + "'");
  }
};

ProcessSet compute_filtered_processes(const WaveguideSpec& spec,
                                      const PumpSpectrum& pump,
                                      const FilterFunction& filter,
                                      const GridSpec& grid_spec) {
  ProcessSet set;
  set.grid = make_frequency_grid(filter, grid_spec);

  const int n1 = static_cast<int>(set.grid.signal.size());
  const int n2 = static_cast<int>(set.grid.idler.size());
  Eigen::VectorXd pass1(n1), pass2(n2);
  const double hw = pi * filter.bandwidth_hz;
  const double c1 = omega_from_wavelength_nm(filter.signal_center_nm);
  const double c2 = omega_from_wavelength_nm(filter.idler_center_nm);
  for (int i = 0; i < n1; ++i) {
    pass1(i) = std::abs(set.grid.signal(i) - c1) <= hw ? 1.0 : 0.0;
  }
  for (int j = 0; j < n2; ++j) {
    pass2(j) = std::abs(set.grid.idler(j) - c2) <= hw ? 1.0 : 0.0;
  }

  const auto& processes = all_sfwm_processes();
  for (std::size_t p = 0; p < processes.size(); ++p) {
    set.amp[p] = compute_process_bpw(spec, processes[p], pump, set.grid,
                                     grid_spec.pump_quadrature_points);
    set.amp[p].amplitude =
        pass1.asDiagonal() * set.amp[p].amplitude * pass2.asDiagonal();
  }
  return set;
}

SectorAmplitudes combine_sectors(const ProcessSet& set,
                                 const PumpAmplitudes& pumps) {
  const double ah2 = pumps.alpha_h * pumps.alpha_h;
  const double av2 = pumps.alpha_v * pumps.alpha_v;
  const double cross = pumps.alpha_h * pumps.alpha_v;

  auto weighted = [&](const std::string& a, double wa, const std::string& b,
                      double wb) {
    const BiphotonAmplitude& pa = set.by_code(a);
    const BiphotonAmplitude& pb = set.by_code(b);
    BiphotonAmplitude out = pa;
    out.amplitude = wa * pa.amplitude + wb * pb.amplitude;
    return out;
  };

  SectorAmplitudes sectors;
  sectors.hh = weighted("HHHH", ah2, "HHVV", av2);
  sectors.vv = weighted("VVVV", av2, "VVHH", ah2);
  sectors.hv = weighted("HVHV", cross, "HVVH", cross);
  sectors.vh = weighted("VHHV", cross, "VHVH", cross);
  return sectors;
}

// ||phi_VV||^2 - ||phi_HH||^2 as a function of u = r^2, expanded over the
// cached process amplitudes. Quadratic in u with a single positive root.
struct BalancePolynomial {
  double a = 0.0, b = 0.0, c = 0.0;
  double scale = 0.0;

  explicit BalancePolynomial(const ProcessSet& set) {
    const auto& vvvv = set.by_code("VVVV");
    const auto& vvhh = set.by_code("VVHH");
    const auto& hhhh = set.by_code("HHHH");
    const auto& hhvv = set.by_code("HHVV");
    const double n_vvvv = vvvv.squared_norm();
    const double n_vvhh = vvhh.squared_norm();
    const double n_hhhh = hhhh.squared_norm();
    const double n_hhvv = hhvv.squared_norm();
    if (n_vvvv + n_vvhh == 0.0 || n_hhhh + n_hhvv == 0.0) {
      throw std::runtime_error(
          "pump balancing impossible: a signal-idler sector is identically "
          "zero on the filter window");
    }
    a = n_vvvv - n_hhvv;
    b = 2.0 * (std::real(overlap(vvhh, vvvv)) -
               std::real(overlap(hhhh, hhvv)));
    c = n_vvhh - n_hhhh;
    scale = n_vvvv + n_vvhh + n_hhhh + n_hhvv;
  }

  double operator()(double u) const { return (a * u + b) * u + c; }
};

double balance_ratio_from(const ProcessSet& set) {
  const BalancePolynomial f(set);

  // Fully symmetric configurations balance identically; report r = 1.
  if (std::abs(f(1.0)) <= 1e-12 * f.scale) return 1.0;

  double lo, hi;
  if (f(1.0) < 0.0) {
    lo = 1.0;
    hi = 2.0;
    while (f(hi) < 0.0) {
      hi *= 2.0;
      if (hi > 1e12) {
        throw std::runtime_error(
            "pump balancing impossible: HH sector power cannot be matched");
      }
    }
  } else {
    lo = 0.0;
    hi = 1.0;
  }
  for (int iter = 0; iter < 200 && (hi - lo) > 1e-14 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::sqrt(0.5 * (lo + hi));
}

}  // namespace

SectorAmplitudes effective_sector_amplitudes(const WaveguideSpec& spec,
                                             const PumpAmplitudes& pumps,
                                             const PumpSpectrum& pump,
                                             const FilterFunction& filter,
                                             const GridSpec& grid) {
  return combine_sectors(compute_filtered_processes(spec, pump, filter, grid),
                         pumps);
}

double balance_ratio(const WaveguideSpec& spec, const PumpSpectrum& pump,
                     const FilterFunction& filter, const GridSpec& grid) {
  return balance_ratio_from(
      compute_filtered_processes(spec, pump, filter, grid));
}

TwoQubitDensityMatrix predicted_polarization_state(
    const SectorAmplitudes& sectors) {
  const std::array<const BiphotonAmplitude*, 4> by_index = {
      &sectors.hh, &sectors.vh, &sectors.hv, &sectors.vv};

  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  for (int row = 0; row < 4; ++row) {
    for (int col = 0; col < 4; ++col) {
      // integral of phi_row * conj(phi_col)
      rho(row, col) = overlap(*by_index[col], *by_index[row]);
    }
  }
  const double trace = rho.trace().real();
  if (!(trace > 0.0)) {
    throw std::invalid_argument(
        "cannot reduce to a polarization state: all sector amplitudes are "
        "zero");
  }
  rho /= trace;
  return TwoQubitDensityMatrix(rho);
}

Prediction predict_polarization_state(const WaveguideSpec& spec,
                                      const PumpSpectrum& pump,
                                      const FilterFunction& filter,
                                      const GridSpec& grid) {
  const ProcessSet set = compute_filtered_processes(spec, pump, filter, grid);
  const double ratio = balance_ratio_from(set);
  SectorAmplitudes sectors = combine_sectors(set, PumpAmplitudes{1.0, ratio});
  TwoQubitDensityMatrix rho = predicted_polarization_state(sectors);
  return Prediction{ratio, std::move(sectors), std::move(rho)};
}

std::string amplitude_grid_csv(const BiphotonAmplitude& amp) {
  std::string csv = "i,j,re,im\n";
  for (int i = 0; i < amp.amplitude.rows(); ++i) {
    for (int j = 0; j < amp.amplitude.cols(); ++j) {
      csv += std::to_string(i);
      csv += ',';
      csv += std::to_string(j);
      csv += ',';
      csv += format_double(amp.amplitude(i, j).real());
      csv += ',';
      csv += format_double(amp.amplitude(i, j).imag());
      csv += '\n';
    }
  }
  return csv;
}

json amplitude_grid_metadata(const SectorAmplitudes& sectors,
                             const PumpSpectrum& pump,
                             const FilterFunction& filter) {
  const BiphotonAmplitude& ref = sectors.hh;
  json meta;
  meta["sectors"] = {"HH", "VH", "HV", "VV"};
  meta["pump"] = {{"center_nm", pump.center_nm},
                  {"bandwidth_hz", pump.bandwidth_hz}};
  meta["filter"] = {{"signal_center_nm", filter.signal_center_nm},
                    {"idler_center_nm", filter.idler_center_nm},
                    {"bandwidth_hz", filter.bandwidth_hz}};
  meta["signal_omega_rad_per_s"] =
      std::vector<double>(ref.signal.data(), ref.signal.data() + ref.signal.size());
  meta["idler_omega_rad_per_s"] =
      std::vector<double>(ref.idler.data(), ref.idler.data() + ref.idler.size());
  meta["signal_step_rad_per_s"] = ref.signal_step;
  meta["idler_step_rad_per_s"] = ref.idler_step;
  return meta;
}

}  // namespace polpair
