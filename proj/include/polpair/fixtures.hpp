#pragma once

#include "polpair/dispersion.hpp"

namespace polpair {

// Synthetic two-mode dispersion family parameterized by waveguide width.
//
// The family is built from cubic Taylor models around the pump frequency and
// is calibrated so that, at the default pump and filter bands:
//   - the TE-TM group-index difference falls from 0.10 at 700 nm width to
//     0.016 at 1200 nm width, monotonically;
//   - the TE mode of the 700 nm member has its zero-dispersion wavelength at
//     1550 nm while the TM mode stays normally dispersive;
//   - pump balancing over the filter windows lands near 1.33 (700 nm) and
//     1.14 (1200 nm).
struct FixtureOptions {
  // Multiplies the TE-TM group-index difference, leaving TM untouched.
  // Used to probe how temporal walk-off degrades the entangled state.
  double dgi_scale = 1.0;
};

WaveguideSpec reference_waveguide(double width_nm,
                                  const FixtureOptions& options = {});

// Degenerate fixture whose TE and TM modes are identical: no walk-off, no
// birefringence, fully symmetric pump processes.
WaveguideSpec symmetric_waveguide();

inline constexpr double fixture_width_min_nm = 700.0;
inline constexpr double fixture_width_max_nm = 1200.0;

}  // namespace polpair
