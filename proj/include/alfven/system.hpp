#pragma once

#include <optional>

#include "alfven/scattering.hpp"

namespace alfven {

struct StepStats {
  double max_speed = 0.0;       // max over sides of sup |Z_s|
  double sup_gradp = 0.0;       // sup |grad p| at the step's start stage
  double sup_z = 0.0;           // max over sides of sup |z_s|
};

// The coupled object advanced by one integrator: Elsasser coefficients,
// optional characteristic frame deviations, optional marker clouds and
// optional characteristic-line records, plus quadrature accumulators for
// the unweighted dissipation integrals. Everything is advanced in a
// single classical RK4 pass per step, with the viscous term of z+/z-
// integrated exactly by a spectral integrating factor. All components
// therefore see the same stage fields, which keeps the cross-component
// identities (frame duality, line identities, the energy identity) at
// the integrator's own order.
struct System {
  explicit System(ElsasserState s) : state(std::move(s)) {}

  ElsasserState state;
  std::optional<CharacteristicFrame> frame;
  std::optional<MarkerCloud> markers_p, markers_m;
  std::optional<LineRecordSet> lines_p, lines_m;

  // int_0^t ||grad z_s||_{L2}^2 dtau, carried as RK quadrature states so
  // the discrete energy identity holds at the scheme's order.
  double diss_plus = 0.0;
  double diss_minus = 0.0;

  long step_count = 0;
  StepStats last;

  void enable_frame() { frame.emplace(state.grid()); }
  void enable_markers(int stride) {
    markers_p = make_marker_cloud(state.grid(), +1, stride);
    markers_m = make_marker_cloud(state.grid(), -1, stride);
  }
  void enable_scattering(int stride,
                         const std::vector<std::array<double, 3>>& extra = {}) {
    lines_p = make_line_records(state, +1, stride, extra);
    lines_m = make_line_records(state, -1, stride, extra);
  }
};

// One RK4 / integrating-factor step of the whole system.
void step(System& sys, const SolverConfig& cfg);

}  // namespace alfven
