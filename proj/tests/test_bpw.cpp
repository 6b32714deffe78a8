#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "polpair/bpw.hpp"
#include "polpair/constants.hpp"
#include "polpair/entanglement.hpp"
#include "polpair/fixtures.hpp"
#include "polpair/polarization.hpp"

using namespace polpair;

namespace {

// Waveguide whose modes have a frequency-independent propagation constant.
// Every process is then perfectly phase matched and the biphoton amplitude
// collapses to the pump-overlap triangle times the kinematic prefactor.
WaveguideSpec flat_waveguide(double k0) {
  ModeDispersion::TaylorCoefficients c;
  c.omega0 = omega_from_wavelength_nm(1554.90);
  c.k0 = k0;
  WaveguideSpec spec;
  spec.width_label = "flat";
  spec.te = ModeDispersion::taylor(ModePolarization::TE, c, 0.5 * c.omega0,
                                   1.5 * c.omega0);
  spec.tm = ModeDispersion::taylor(ModePolarization::TM, c, 0.5 * c.omega0,
                                   1.5 * c.omega0);
  return spec;
}

BiphotonAmplitude blank_amplitude(const FrequencyGrid& g) {
  BiphotonAmplitude a;
  a.signal = g.signal;
  a.idler = g.idler;
  a.signal_step = g.signal_step;
  a.idler_step = g.idler_step;
  a.amplitude.setZero(g.signal.size(), g.idler.size());
  return a;
}

GridSpec coarse_grid() {
  GridSpec g;
  g.points_per_passband = 48;
  g.pump_quadrature_points = 128;
  return g;
}

}  // namespace

TEST_CASE("process codes, sectors, and validation") {
  const auto& processes = all_sfwm_processes();
  REQUIRE(processes.size() == 8);

  const std::array<std::string, 8> codes = {"HHHH", "HHVV", "VVVV", "VVHH",
                                            "HVHV", "HVVH", "VHHV", "VHVH"};
  for (std::size_t i = 0; i < codes.size(); ++i) {
    CHECK(processes[i].code() == codes[i]);
    CHECK(SfwmProcess::from_code(codes[i]).code() == codes[i]);
  }

  CHECK(SfwmProcess::from_code("HHHH").sector() == "HH");
  CHECK(SfwmProcess::from_code("HVVH").sector() == "HV");
  CHECK(SfwmProcess::from_code("VHHV").sector() == "VH");
  CHECK(SfwmProcess::from_code("VVHH").sector() == "VV");

  // Codes that violate pairwise polarization conservation, or are not
  // four-letter H/V strings at all, are rejected.
  for (const std::string& bad :
       {"HHHV", "HHVH", "HVHH", "VHVV", "hhhh", "HHH", "HHHHH", ""}) {
    CHECK_THROWS_AS(SfwmProcess::from_code(bad), std::invalid_argument);
  }
}

TEST_CASE("pump and filter band bookkeeping") {
  PumpSpectrum pump;
  CHECK(pump.center_nm == 1554.90);
  CHECK(pump.center_omega() ==
        doctest::Approx(2.0 * pi * 299792458.0 / 1554.90e-9).epsilon(1e-12));
  CHECK(pump.half_width_omega() == doctest::Approx(pi * 100e9).epsilon(1e-15));

  FilterFunction filter;
  const double c1 = omega_from_wavelength_nm(filter.signal_center_nm);
  const double c2 = omega_from_wavelength_nm(filter.idler_center_nm);
  const double hw = pi * filter.bandwidth_hz;
  CHECK(filter.passes(c1, c2));
  CHECK(filter.passes(c1 + 0.99 * hw, c2 - 0.99 * hw));
  CHECK_FALSE(filter.passes(c1 + 1.01 * hw, c2));
  CHECK_FALSE(filter.passes(c1, c2 - 1.01 * hw));
}

TEST_CASE("frequency grid layout") {
  FilterFunction filter;
  const double hw = pi * filter.bandwidth_hz;
  const double c1 = omega_from_wavelength_nm(filter.signal_center_nm);
  const double c2 = omega_from_wavelength_nm(filter.idler_center_nm);

  SUBCASE("midpoint cells tile the passband") {
    GridSpec spec;
    spec.points_per_passband = 96;
    FrequencyGrid g = make_frequency_grid(filter, spec);
    REQUIRE(g.signal.size() == 96);
    REQUIRE(g.idler.size() == 96);
    CHECK(g.signal_step == doctest::Approx(2.0 * hw / 96).epsilon(1e-14));
    CHECK(g.signal(0) ==
          doctest::Approx(c1 - hw + 0.5 * g.signal_step).epsilon(1e-14));
    CHECK(g.signal(95) ==
          doctest::Approx(c1 + hw - 0.5 * g.signal_step).epsilon(1e-14));
    CHECK(g.idler(0) ==
          doctest::Approx(c2 - hw + 0.5 * g.idler_step).epsilon(1e-14));
    // Uniform spacing and symmetry about the filter center.
    for (int i = 1; i < 96; ++i) {
      CHECK(std::abs(g.signal(i) - g.signal(i - 1) - g.signal_step) <
            1e-3 * g.signal_step);
    }
    for (int i = 0; i < 48; ++i) {
      CHECK(std::abs(g.signal(i) + g.signal(95 - i) - 2.0 * c1) <
            1e-3 * g.signal_step);
    }
  }

  SUBCASE("a span of two doubles the extent and the point count") {
    GridSpec spec;
    spec.points_per_passband = 48;
    spec.span = 2.0;
    FrequencyGrid g = make_frequency_grid(filter, spec);
    REQUIRE(g.signal.size() == 96);
    CHECK(g.signal(0) < c1 - 1.5 * hw);
    CHECK(g.signal(95) > c1 + 1.5 * hw);
  }

  SUBCASE("degenerate requests are rejected") {
    GridSpec spec;
    spec.points_per_passband = 1;
    CHECK_THROWS_AS(make_frequency_grid(filter, spec), std::invalid_argument);
    spec.points_per_passband = 48;
    spec.span = 0.0;
    CHECK_THROWS_AS(make_frequency_grid(filter, spec), std::invalid_argument);
    spec.span = -1.0;
    CHECK_THROWS_AS(make_frequency_grid(filter, spec), std::invalid_argument);
  }

  SUBCASE("pump quadrature needs a minimum point count") {
    GridSpec spec;
    spec.points_per_passband = 8;
    FrequencyGrid g = make_frequency_grid(filter, spec);
    CHECK_THROWS_AS(compute_process_bpw(flat_waveguide(1e5),
                                        SfwmProcess::from_code("HHHH"),
                                        PumpSpectrum{}, g, 4),
                    std::invalid_argument);
  }
}

TEST_CASE("flat dispersion reduces the amplitude to the pump overlap") {
  // With constant propagation the sinc factor is 1 everywhere, so the
  // magnitude must be the triangular overlap of the two rectangular pump
  // lines times sqrt(w1 w2), and the phase must be the constant 2 k0 L.
  const double k0 = 5.0e5;
  WaveguideSpec spec = flat_waveguide(k0);
  PumpSpectrum pump;
  FilterFunction filter;
  GridSpec gs;
  gs.points_per_passband = 32;
  FrequencyGrid g = make_frequency_grid(filter, gs);
  BiphotonAmplitude amp =
      compute_process_bpw(spec, SfwmProcess::from_code("HHHH"), pump, g, 64);

  const double wp = pump.center_omega();
  const double hw = pump.half_width_omega();
  const int n = static_cast<int>(g.signal.size());

  double ratio_min = 1e300, ratio_max = 0.0;
  int nonzero = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double s = g.signal(i) + g.idler(j);
      const double tri = std::min(wp + hw, s - wp + hw) -
                         std::max(wp - hw, s - wp - hw);
      const double mag = std::abs(amp.amplitude(i, j));
      if (tri <= 0.0) {
        CHECK(mag == 0.0);
        continue;
      }
      ++nonzero;
      // Evaluate the sqrt(w3 w4) kinematic factor at the quadrature center;
      // its curvature across the overlap window is below 1e-7.
      const double w3_mid = 0.5 * (std::max(wp - hw, s - wp - hw) +
                                   std::min(wp + hw, s - wp + hw));
      const double r = mag / (tri * std::sqrt(g.signal(i) * g.idler(j) *
                                              w3_mid * (s - w3_mid)));
      ratio_min = std::min(ratio_min, r);
      ratio_max = std::max(ratio_max, r);
    }
  }
  REQUIRE(nonzero > n);
  CHECK((ratio_max - ratio_min) / ratio_max < 1e-7);

  // Constant accumulated phase: exp(i (k0 + k0 + k0 + k0) L / 2).
  const std::complex<double> expected_unit =
      std::polar(1.0, 2.0 * k0 * spec.length);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double mag = std::abs(amp.amplitude(i, j));
      if (mag == 0.0) continue;
      worst = std::max(
          worst, std::abs(amp.amplitude(i, j) / mag - expected_unit));
    }
  }
  CHECK(worst < 1e-9);

  // Energy matching: in the row through the signal filter center the largest
  // magnitude sits at the idler sample closest to (2 wp - w1).
  int ic = 0;
  const double c1 = omega_from_wavelength_nm(filter.signal_center_nm);
  for (int i = 0; i < n; ++i) {
    if (std::abs(g.signal(i) - c1) < std::abs(g.signal(ic) - c1)) ic = i;
  }
  int j_peak = 0, j_matched = 0;
  const double target = 2.0 * wp - g.signal(ic);
  for (int j = 0; j < n; ++j) {
    if (std::abs(amp.amplitude(ic, j)) > std::abs(amp.amplitude(ic, j_peak)))
      j_peak = j;
    if (std::abs(g.idler(j) - target) < std::abs(g.idler(j_matched) - target))
      j_matched = j;
  }
  CHECK(j_peak == j_matched);
}

TEST_CASE("a linear mode mismatch places a phase-matching zero on a chosen "
          "anti-diagonal") {
  // TM flat at zero, TE with pure group delay k1 relative to the pump frame.
  // For the process VVHH the mismatch is -k1 (w1 + w2 - 2 wp), constant along
  // the pump quadrature, so the amplitude is an exact sinc in the sum
  // frequency. Choosing k1 = 2 pi / (D L) parks the first sinc zero on the
  // grid anti-diagonal where w1 + w2 - 2 wp equals D.
  PumpSpectrum pump;
  FilterFunction filter;
  GridSpec gs;
  gs.points_per_passband = 48;
  FrequencyGrid g = make_frequency_grid(filter, gs);
  const int n = static_cast<int>(g.signal.size());

  const double wp = pump.center_omega();
  const double delta = omega_from_wavelength_nm(filter.signal_center_nm) +
                       omega_from_wavelength_nm(filter.idler_center_nm) -
                       2.0 * wp;
  const int target_diag = n - 1 + 8;
  const double d_target = delta + 8.0 * g.signal_step;
  REQUIRE(d_target > 0.0);

  WaveguideSpec spec = flat_waveguide(0.0);
  spec.width_label = "tilted";
  ModeDispersion::TaylorCoefficients te;
  te.omega0 = wp;
  te.k1 = 2.0 * pi / (d_target * spec.length);
  spec.te = ModeDispersion::taylor(ModePolarization::TE, te, 0.5 * wp,
                                   1.5 * wp);

  BiphotonAmplitude amp =
      compute_process_bpw(spec, SfwmProcess::from_code("VVHH"), pump, g, 64);
  const double peak = amp.amplitude.cwiseAbs().maxCoeff();
  REQUIRE(peak > 0.0);

  double on_zero = 0.0, near_peak = 0.0, past_zero = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double mag = std::abs(amp.amplitude(i, j));
      if (i + j == target_diag) on_zero = std::max(on_zero, mag);
      if (i + j == target_diag - 4) near_peak = std::max(near_peak, mag);
      if (i + j == target_diag + 4) past_zero = std::max(past_zero, mag);
    }
  }
  CHECK(on_zero < 1e-8 * peak);
  CHECK(near_peak > 0.5 * peak);
  // Past the zero the sinc lobe recovers; the notch is local, not a cutoff.
  CHECK(past_zero > 1e-3 * peak);
}

TEST_CASE("counter-polarized pump processes are birefringence-suppressed") {
  // k0(TE) - k0(TM) at 700 nm width contributes a large constant mismatch to
  // HHVV and VVHH, which co-polarized processes never see.
  WaveguideSpec spec = reference_waveguide(700.0);
  PumpSpectrum pump;
  FilterFunction filter;
  GridSpec gs = coarse_grid();
  FrequencyGrid g = make_frequency_grid(filter, gs);

  auto norm_of = [&](const char* code) {
    return compute_process_bpw(spec, SfwmProcess::from_code(code), pump, g, 96)
        .squared_norm();
  };
  const double hhhh = norm_of("HHHH");
  const double hhvv = norm_of("HHVV");
  const double vvvv = norm_of("VVVV");
  const double vvhh = norm_of("VVHH");
  REQUIRE(hhhh > 0.0);
  REQUIRE(vvvv > 0.0);
  CHECK(hhvv / hhhh < 1e-4);
  CHECK(vvhh / vvvv < 5e-3);
}

TEST_CASE("swapping the pump polarization order does not change a "
          "cross-polarized amplitude") {
  WaveguideSpec spec = reference_waveguide(700.0);
  PumpSpectrum pump;
  FilterFunction filter;
  FrequencyGrid g = make_frequency_grid(filter, coarse_grid());

  auto hvhv =
      compute_process_bpw(spec, SfwmProcess::from_code("HVHV"), pump, g, 128);
  auto hvvh =
      compute_process_bpw(spec, SfwmProcess::from_code("HVVH"), pump, g, 128);
  const double scale = hvhv.amplitude.cwiseAbs().maxCoeff();
  REQUIRE(scale > 0.0);
  CHECK((hvhv.amplitude - hvvh.amplitude).cwiseAbs().maxCoeff() <
        1e-9 * scale);

  auto vhhv =
      compute_process_bpw(spec, SfwmProcess::from_code("VHHV"), pump, g, 128);
  auto vhvh =
      compute_process_bpw(spec, SfwmProcess::from_code("VHVH"), pump, g, 128);
  CHECK((vhhv.amplitude - vhvh.amplitude).cwiseAbs().maxCoeff() <
        1e-9 * vhhv.amplitude.cwiseAbs().maxCoeff());
}

TEST_CASE("sector assembly limits") {
  PumpSpectrum pump;
  FilterFunction filter;
  GridSpec gs = coarse_grid();

  SUBCASE("turning one pump off leaves only its direct processes") {
    WaveguideSpec spec = reference_waveguide(900.0);
    SectorAmplitudes sectors =
        effective_sector_amplitudes(spec, PumpAmplitudes{1.0, 0.0}, pump,
                                    filter, gs);
    CHECK(sectors.hv.squared_norm() == 0.0);
    CHECK(sectors.vh.squared_norm() == 0.0);

    FrequencyGrid g = make_frequency_grid(filter, gs);
    auto hhhh = compute_process_bpw(spec, SfwmProcess::from_code("HHHH"), pump,
                                    g, gs.pump_quadrature_points);
    auto vvhh = compute_process_bpw(spec, SfwmProcess::from_code("VVHH"), pump,
                                    g, gs.pump_quadrature_points);
    const double scale = hhhh.amplitude.cwiseAbs().maxCoeff();
    CHECK((sectors.hh.amplitude - hhhh.amplitude).cwiseAbs().maxCoeff() <
          1e-15 * scale);
    CHECK((sectors.vv.amplitude - vvhh.amplitude).cwiseAbs().maxCoeff() <
          1e-15 * scale);
  }

  SUBCASE("a wide grid is masked to the filter passband") {
    WaveguideSpec spec = reference_waveguide(900.0);
    GridSpec wide = gs;
    wide.points_per_passband = 32;
    wide.span = 1.5;
    SectorAmplitudes sectors = effective_sector_amplitudes(
        spec, PumpAmplitudes{1.0, 1.0}, pump, filter, wide);

    FrequencyGrid g = make_frequency_grid(filter, wide);
    auto raw = compute_process_bpw(spec, SfwmProcess::from_code("HHHH"), pump,
                                   g, wide.pump_quadrature_points);
    const double hw = pi * filter.bandwidth_hz;
    const double c1 = omega_from_wavelength_nm(filter.signal_center_nm);
    const double c2 = omega_from_wavelength_nm(filter.idler_center_nm);
    const int n = static_cast<int>(g.signal.size());
    int outside = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (std::abs(g.signal(i) - c1) <= hw && std::abs(g.idler(j) - c2) <= hw)
          continue;
        CHECK(std::abs(sectors.hh.amplitude(i, j)) == 0.0);
        if (std::abs(raw.amplitude(i, j)) > 0.0) ++outside;
      }
    }
    // The unmasked amplitude really does extend beyond the passband, so the
    // mask is doing work.
    CHECK(outside > 0);
  }

  SUBCASE("identical modes give four identical sectors and no entanglement") {
    WaveguideSpec spec = symmetric_waveguide();
    Prediction pred = predict_polarization_state(spec, pump, filter, gs);
    CHECK(pred.ratio == 1.0);

    const double n_hh = pred.sectors.hh.squared_norm();
    REQUIRE(n_hh > 0.0);
    for (const char* st : {"VH", "HV", "VV"}) {
      CHECK(pred.sectors.sector(st).squared_norm() ==
            doctest::Approx(n_hh).epsilon(1e-12));
    }
    // The polarization state is the product of two diagonal photons.
    CHECK(concurrence(pred.rho) < 1e-6);
    const TwoQubitPureState dd(Eigen::Vector4cd(0.5, 0.5, 0.5, 0.5));
    CHECK(fidelity_to_pure(pred.rho, dd) > 1.0 - 1e-9);
  }
}

TEST_CASE("reduction of sector amplitudes to a polarization state") {
  FilterFunction filter;
  GridSpec gs;
  gs.points_per_passband = 8;
  FrequencyGrid g = make_frequency_grid(filter, gs);
  const int n = static_cast<int>(g.signal.size());

  SUBCASE("a single sector gives the corresponding basis projector") {
    SectorAmplitudes s{blank_amplitude(g), blank_amplitude(g),
                       blank_amplitude(g), blank_amplitude(g)};
    s.hh.amplitude.setConstant(std::complex<double>(0.3, -0.1));
    TwoQubitDensityMatrix rho = predicted_polarization_state(s);
    CHECK(rho.matrix()(0, 0).real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(concurrence(rho) == doctest::Approx(0.0));
    CHECK(purity(rho) == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("proportional HH and VV sectors give a maximally entangled state "
          "carrying the proportionality phase") {
    const double theta = 0.7;
    SectorAmplitudes s{blank_amplitude(g), blank_amplitude(g),
                       blank_amplitude(g), blank_amplitude(g)};
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const std::complex<double> v(0.2 + 0.01 * i, 0.05 * j);
        s.hh.amplitude(i, j) = v;
        s.vv.amplitude(i, j) = std::polar(1.0, theta) * v;
      }
    }
    TwoQubitDensityMatrix rho = predicted_polarization_state(s);
    CHECK(concurrence(rho) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(relative_phase(rho) == doctest::Approx(theta).epsilon(1e-12));
    const TwoQubitPureState psi =
        superposition_hh_vv(std::sqrt(0.5), std::sqrt(0.5), theta);
    CHECK(fidelity_to_pure(rho, psi) == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("partial spectral overlap sets the concurrence") {
    // phi_VV occupies half of phi_HH's support with equal power. The
    // concurrence of the reduced state is then exactly
    // 2 |<phi_HH, phi_VV>| / (||phi_HH||^2 + ||phi_VV||^2) = 1/sqrt(2).
    SectorAmplitudes s{blank_amplitude(g), blank_amplitude(g),
                       blank_amplitude(g), blank_amplitude(g)};
    s.hh.amplitude.setConstant(1.0);
    s.vv.amplitude.leftCols(n / 2).setConstant(std::sqrt(2.0));
    const double expected =
        2.0 * std::abs(overlap(s.vv, s.hh)) /
        (s.hh.squared_norm() + s.vv.squared_norm());
    CHECK(expected == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(concurrence(predicted_polarization_state(s)) ==
          doctest::Approx(expected).epsilon(1e-12));
  }

  SUBCASE("orthogonal sectors leave an even classical mixture") {
    SectorAmplitudes s{blank_amplitude(g), blank_amplitude(g),
                       blank_amplitude(g), blank_amplitude(g)};
    s.hh.amplitude.setConstant(1.0);
    s.vv.amplitude.leftCols(n / 2).setConstant(1.0);
    s.vv.amplitude.rightCols(n - n / 2).setConstant(-1.0);
    TwoQubitDensityMatrix rho = predicted_polarization_state(s);
    CHECK(std::abs(overlap(s.vv, s.hh)) < 1e-12);
    CHECK(concurrence(rho) == doctest::Approx(0.0));
    CHECK(purity(rho) == doctest::Approx(0.5).epsilon(1e-12));
  }

  SUBCASE("all-zero sectors cannot be normalized") {
    SectorAmplitudes s{blank_amplitude(g), blank_amplitude(g),
                       blank_amplitude(g), blank_amplitude(g)};
    CHECK_THROWS_WITH_AS(predicted_polarization_state(s),
                         doctest::Contains("all sector amplitudes"),
                         std::invalid_argument);
  }

  SUBCASE("overlap rejects mismatched grids") {
    GridSpec other = gs;
    other.points_per_passband = 12;
    BiphotonAmplitude a = blank_amplitude(g);
    BiphotonAmplitude b =
        blank_amplitude(make_frequency_grid(filter, other));
    CHECK_THROWS_WITH_AS(overlap(a, b), "amplitude grids do not match",
                         std::invalid_argument);
  }

  SUBCASE("overlap is conjugate-symmetric and reduces to the squared norm") {
    BiphotonAmplitude a = blank_amplitude(g);
    BiphotonAmplitude b = blank_amplitude(g);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        a.amplitude(i, j) = std::complex<double>(0.1 * i - 0.3, 0.2 * j);
        b.amplitude(i, j) = std::complex<double>(0.4, 0.05 * (i + j) - 0.2);
      }
    }
    const auto ab = overlap(a, b);
    const auto ba = overlap(b, a);
    CHECK(std::abs(ab - std::conj(ba)) < 1e-12 * std::abs(ab));
    CHECK(std::abs(overlap(a, a) - a.squared_norm()) <
          1e-12 * a.squared_norm());
  }
}

TEST_CASE("pump balancing") {
  PumpSpectrum pump;
  FilterFunction filter;

  SUBCASE("balanced powers at the reference widths") {
    GridSpec gs;  // full resolution, this is an anchor
    const double r700 = balance_ratio(reference_waveguide(700.0), pump, filter,
                                      gs);
    CHECK(r700 == doctest::Approx(1.3382).epsilon(1e-3));
    CHECK(r700 > 1.18);
    CHECK(r700 < 1.48);

    const double r1200 = balance_ratio(reference_waveguide(1200.0), pump,
                                       filter, gs);
    CHECK(r1200 == doctest::Approx(1.1467).epsilon(1e-3));
    CHECK(r1200 > 0.99);
    CHECK(r1200 < 1.29);
    CHECK(r700 > r1200);
  }

  SUBCASE("the balanced sectors really have equal power") {
    Prediction pred = predict_polarization_state(reference_waveguide(700.0),
                                                 pump, filter, coarse_grid());
    CHECK(pred.sectors.vv.squared_norm() /
              pred.sectors.hh.squared_norm() ==
          doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("predictions across the reference family") {
  PumpSpectrum pump;
  FilterFunction filter;
  GridSpec gs;  // full resolution for the anchor values

  SUBCASE("narrow width: entangled but walk-off limited") {
    Prediction pred = predict_polarization_state(reference_waveguide(700.0),
                                                 pump, filter, gs);
    CHECK(concurrence(pred.rho) == doctest::Approx(0.9634).epsilon(1e-3));
    // Cross-polarized contamination stays below the few-percent level.
    const double leak = pred.sectors.hv.squared_norm() /
                        pred.sectors.hh.squared_norm();
    CHECK(leak < 0.02);
    CHECK(leak > 0.004);
    // The HH-VV coherence is strong enough to define a relative phase.
    CHECK_NOTHROW(relative_phase(pred.rho));
  }

  SUBCASE("intermediate width outperforms both ends") {
    const double c700 = concurrence(
        predict_polarization_state(reference_waveguide(700.0), pump, filter,
                                   coarse_grid())
            .rho);
    const double c1000 = concurrence(
        predict_polarization_state(reference_waveguide(1000.0), pump, filter,
                                   coarse_grid())
            .rho);
    const double c1200 = concurrence(
        predict_polarization_state(reference_waveguide(1200.0), pump, filter,
                                   coarse_grid())
            .rho);
    CHECK(c1000 == doctest::Approx(0.9960).epsilon(1e-3));
    CHECK(c1200 == doctest::Approx(0.3770).epsilon(2e-3));
    CHECK(c1000 > c700 + 0.02);
    CHECK(c1000 > c1200 + 0.3);
  }

  SUBCASE("amplifying the group-index difference degrades the state "
          "monotonically") {
    auto c_at_scale = [&](double scale) {
      FixtureOptions opt;
      opt.dgi_scale = scale;
      return concurrence(
          predict_polarization_state(reference_waveguide(700.0, opt), pump,
                                     filter, coarse_grid())
              .rho);
    };
    const double c1 = c_at_scale(1.0);
    const double c2 = c_at_scale(2.0);
    const double c5 = c_at_scale(5.0);
    const double c10 = c_at_scale(10.0);
    CHECK(c1 > 0.95);
    CHECK(c1 > c2);
    CHECK(c2 > c5);
    CHECK(c5 > c10);
    CHECK(c10 < 0.2);
  }

  SUBCASE("halving the grid resolution moves the concurrence by less "
          "than 1e-3") {
    WaveguideSpec spec = reference_waveguide(900.0);
    const double c_coarse = concurrence(
        predict_polarization_state(spec, pump, filter, coarse_grid()).rho);
    const double c_fine =
        concurrence(predict_polarization_state(spec, pump, filter, gs).rho);
    CHECK(std::abs(c_fine - c_coarse) < 1e-3);
  }
}

TEST_CASE("exports") {
  FilterFunction filter;
  GridSpec gs;
  gs.points_per_passband = 8;
  FrequencyGrid g = make_frequency_grid(filter, gs);
  const int n = static_cast<int>(g.signal.size());

  SectorAmplitudes s{blank_amplitude(g), blank_amplitude(g),
                     blank_amplitude(g), blank_amplitude(g)};
  s.hh.amplitude(0, 0) = std::complex<double>(1.25, -0.5);
  s.hh.amplitude(2, 5) = std::complex<double>(0.0, 3.0);

  SUBCASE("long-format CSV of one amplitude grid") {
    const std::string csv = amplitude_grid_csv(s.hh);
    std::size_t lines = 0;
    for (char ch : csv) {
      if (ch == '\n') ++lines;
    }
    CHECK(lines == static_cast<std::size_t>(n * n) + 1);
    CHECK(csv.rfind("i,j,re,im\n", 0) == 0);
    const std::string first_row = "0,0," + format_double(1.25) + "," +
                                  format_double(-0.5) + "\n";
    CHECK(csv.find(first_row) != std::string::npos);
    const std::string sparse_row =
        "2,5," + format_double(0.0) + "," + format_double(3.0) + "\n";
    CHECK(csv.find(sparse_row) != std::string::npos);
  }

  SUBCASE("grid metadata") {
    PumpSpectrum pump;
    json meta = amplitude_grid_metadata(s, pump, filter);
    CHECK(meta["sectors"] == json::array({"HH", "VH", "HV", "VV"}));
    CHECK(meta["pump"]["center_nm"] == pump.center_nm);
    CHECK(meta["filter"]["idler_center_nm"] == filter.idler_center_nm);
    REQUIRE(meta["signal_omega_rad_per_s"].size() ==
            static_cast<std::size_t>(n));
    REQUIRE(meta["idler_omega_rad_per_s"].size() ==
            static_cast<std::size_t>(n));
    CHECK(meta["signal_omega_rad_per_s"][0].get<double>() == g.signal(0));
    CHECK(meta["signal_step_rad_per_s"].get<double>() == g.signal_step);
  }
}
