#include "polpair/dispersion.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "polpair/constants.hpp"
#include "polpair/serialization.hpp"

namespace polpair {

CubicSpline::CubicSpline(const Eigen::VectorXd& x, const Eigen::VectorXd& y)
    : x_(x), y_(y) {
  const int n = static_cast<int>(x.size());
  if (n < 3 || y.size() != n) {
    throw std::invalid_argument("spline needs at least 3 matching samples");
  }
  for (int i = 1; i < n; ++i) {
    if (!(x(i) > x(i - 1))) {
      throw std::invalid_argument("spline abscissae must strictly increase");
    }
  }
  // Solve the tridiagonal system for knot second derivatives with natural
  // boundary conditions m_0 = m_{n-1} = 0 (Thomas algorithm).
  m_ = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd diag(n), rhs(n), upper(n);
  diag(0) = diag(n - 1) = 1.0;
  rhs(0) = rhs(n - 1) = 0.0;
  upper(0) = 0.0;
  for (int i = 1; i < n - 1; ++i) {
    const double h0 = x(i) - x(i - 1);
    const double h1 = x(i + 1) - x(i);
    diag(i) = 2.0 * (h0 + h1);
    upper(i) = h1;
    rhs(i) = 6.0 * ((y(i + 1) - y(i)) / h1 - (y(i) - y(i - 1)) / h0);
  }
  // Forward elimination; the lower band entry of row i is h0 (except row 0).
  for (int i = 1; i < n - 1; ++i) {
    const double lower = x_(i) - x_(i - 1);
    const double w = lower / diag(i - 1);
    diag(i) -= w * upper(i - 1);
    rhs(i) -= w * rhs(i - 1);
  }
  for (int i = n - 2; i >= 1; --i) {
    m_(i) = (rhs(i) - upper(i) * m_(i + 1)) / diag(i);
  }
}

int CubicSpline::segment(double x) const {
  const int n = static_cast<int>(x_.size());
  if (x < x_(0) || x > x_(n - 1)) {
    throw std::domain_error("spline evaluated outside its data range");
  }
  int lo = 0, hi = n - 1;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    (x_(mid) <= x ? lo : hi) = mid;
  }
  return lo;
}

double CubicSpline::operator()(double x) const {
  const int i = segment(x);
  const double h = x_(i + 1) - x_(i);
  const double a = (x_(i + 1) - x) / h;
  const double b = (x - x_(i)) / h;
  return a * y_(i) + b * y_(i + 1) +
         ((a * a * a - a) * m_(i) + (b * b * b - b) * m_(i + 1)) * h * h / 6.0;
}

double CubicSpline::derivative(double x) const {
  const int i = segment(x);
  const double h = x_(i + 1) - x_(i);
  const double a = (x_(i + 1) - x) / h;
  const double b = (x - x_(i)) / h;
  return (y_(i + 1) - y_(i)) / h +
         ((3.0 * b * b - 1.0) * m_(i + 1) - (3.0 * a * a - 1.0) * m_(i)) * h /
             6.0;
}

double CubicSpline::second_derivative(double x) const {
  const int i = segment(x);
  const double h = x_(i + 1) - x_(i);
  const double a = (x_(i + 1) - x) / h;
  const double b = (x - x_(i)) / h;
  return a * m_(i) + b * m_(i + 1);
}

ModeDispersion ModeDispersion::tabulated(ModePolarization pol,
                                         const Eigen::VectorXd& wavelength_nm,
                                         const Eigen::VectorXd& n_eff) {
  if (wavelength_nm.size() < 50) {
    throw std::invalid_argument(
        "tabulated dispersion needs at least 50 samples");
  }
  if ((n_eff.array() <= 1.0).any()) {
    throw std::invalid_argument("effective index must exceed 1");
  }
  ModeDispersion d;
  d.pol_ = pol;
  d.is_taylor_ = false;
  d.n_eff_ = CubicSpline(wavelength_nm, n_eff);
  d.omega_min_ = omega_from_wavelength_nm(wavelength_nm(wavelength_nm.size() - 1));
  d.omega_max_ = omega_from_wavelength_nm(wavelength_nm(0));
  return d;
}

ModeDispersion ModeDispersion::taylor(ModePolarization pol,
                                      const TaylorCoefficients& coeffs,
                                      double omega_min, double omega_max) {
  if (!(omega_min < omega_max) || !(coeffs.omega0 > 0.0)) {
    throw std::invalid_argument("invalid Taylor dispersion window");
  }
  ModeDispersion d;
  d.pol_ = pol;
  d.is_taylor_ = true;
  d.coeffs_ = coeffs;
  d.omega_min_ = omega_min;
  d.omega_max_ = omega_max;
  return d;
}

void ModeDispersion::check_window(double omega) const {
  if (omega < omega_min_ || omega > omega_max_) {
    throw std::domain_error(
        "frequency outside the dispersion validity window: omega = " +
        format_double(omega));
  }
}

double ModeDispersion::propagation_constant(double omega) const {
  check_window(omega);
  if (is_taylor_) {
    const double d = omega - coeffs_.omega0;
    return coeffs_.k0 +
           d * (coeffs_.k1 + d * (coeffs_.k2 / 2.0 + d * coeffs_.k3 / 6.0));
  }
  const double lambda_nm = wavelength_nm_from_omega(omega);
  return n_eff_(lambda_nm) * omega / speed_of_light;
}

double ModeDispersion::group_index(double omega) const {
  check_window(omega);
  if (is_taylor_) {
    const double d = omega - coeffs_.omega0;
    return speed_of_light *
           (coeffs_.k1 + d * (coeffs_.k2 + d * coeffs_.k3 / 2.0));
  }
  // c dk/domega = n - lambda dn/dlambda via the analytic spline derivative.
  const double lambda_nm = wavelength_nm_from_omega(omega);
  return n_eff_(lambda_nm) - lambda_nm * n_eff_.derivative(lambda_nm);
}

double ModeDispersion::gvd(double omega) const {
  check_window(omega);
  if (is_taylor_) {
    return coeffs_.k2 + (omega - coeffs_.omega0) * coeffs_.k3;
  }
  // d^2k/domega^2 = lambda^3 n''(lambda) / (2 pi c^2).
  const double lambda_nm = wavelength_nm_from_omega(omega);
  const double lambda_m = lambda_nm * 1e-9;
  const double d2n = n_eff_.second_derivative(lambda_nm) * 1e18;  // per m^2
  return lambda_m * lambda_m * lambda_m * d2n /
         (2.0 * pi * speed_of_light * speed_of_light);
}

const ModeDispersion& WaveguideSpec::mode_for(char polarization_letter) const {
  switch (polarization_letter) {
    case 'H': return te;
    case 'V': return tm;
    default:
      throw std::invalid_argument("mode letters must be 'H' or 'V'");
  }
}

double group_index_difference(const WaveguideSpec& spec, double omega) {
  return std::abs(spec.te.group_index(omega) - spec.tm.group_index(omega));
}

double zero_dispersion_wavelength(const ModeDispersion& mode,
                                  double lambda_lo_nm, double lambda_hi_nm,
                                  double tol_nm) {
  if (!(lambda_lo_nm < lambda_hi_nm)) {
    throw std::invalid_argument("invalid zero-dispersion bracket");
  }
  auto gvd_at = [&](double lambda_nm) {
    return mode.gvd(omega_from_wavelength_nm(lambda_nm));
  };
  double lo = lambda_lo_nm, hi = lambda_hi_nm;
  double f_lo = gvd_at(lo), f_hi = gvd_at(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if (f_lo * f_hi > 0.0) {
    throw std::domain_error(
        "GVD does not change sign over the requested bracket");
  }
  while (hi - lo > tol_nm) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = gvd_at(mid);
    if (f_mid == 0.0) return mid;
    if (f_lo * f_mid < 0.0) {
      hi = mid;
      f_hi = f_mid;
    } else {
      lo = mid;
      f_lo = f_mid;
    }
  }
  return 0.5 * (lo + hi);
}

double phase_mismatch(const WaveguideSpec& spec, const std::string& process,
                      double omega1, double omega2, double omega3,
                      double omega4) {
  if (process.size() != 4) {
    throw std::invalid_argument("process code must have four letters");
  }
  return spec.mode_for(process[0]).propagation_constant(omega1) +
         spec.mode_for(process[1]).propagation_constant(omega2) -
         spec.mode_for(process[2]).propagation_constant(omega3) -
         spec.mode_for(process[3]).propagation_constant(omega4);
}

std::pair<ModeDispersion, ModeDispersion> parse_dispersion_csv(
    const std::string& csv_text) {
  std::istringstream in(csv_text);
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("dispersion CSV is empty");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "wavelength_nm,n_eff_te,n_eff_tm") {
    throw std::runtime_error(
        "dispersion CSV row 1: expected header "
        "'wavelength_nm,n_eff_te,n_eff_tm', got '" + line + "'");
  }
  std::vector<double> lam, te, tm;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string cell;
    double values[3];
    for (int c = 0; c < 3; ++c) {
      if (!std::getline(fields, cell, ',')) {
        throw std::runtime_error("dispersion CSV row " + std::to_string(row) +
                                 ": expected 3 columns");
      }
      try {
        size_t used = 0;
        values[c] = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw std::runtime_error("dispersion CSV row " + std::to_string(row) +
                                 ": cannot parse '" + cell + "'");
      }
    }
    if (lam.size() > 0 && !(values[0] > lam.back())) {
      throw std::runtime_error("dispersion CSV row " + std::to_string(row) +
                               ": wavelengths must strictly increase");
    }
    lam.push_back(values[0]);
    te.push_back(values[1]);
    tm.push_back(values[2]);
  }
  const auto map = [](const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), v.size()).eval();
  };
  return {ModeDispersion::tabulated(ModePolarization::TE, map(lam), map(te)),
          ModeDispersion::tabulated(ModePolarization::TM, map(lam), map(tm))};
}

std::pair<ModeDispersion, ModeDispersion> load_dispersion_csv(
    const std::string& path) {
  return parse_dispersion_csv(read_text_file(path));
}

}  // namespace polpair
