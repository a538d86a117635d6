#pragma once

#include <optional>

#include "alfven/geometry.hpp"

namespace alfven {

// Per-characteristic-line accumulators for the finite-time transport
// identities. Records for z_side live on lines tangent to L_{-side}
// (the transversal family), so the positions are advanced by Z_{-side}.
// Labels are (y1, y2, y3) on the initial slice; the line's u_{-side}
// label equals y3 for all time.
struct LineRecordSet {
  int side = +1;  // which Elsasser variable the records track
  std::vector<std::array<double, 3>> label;
  std::vector<std::array<double, 3>> pos;          // unwrapped, rides Z_{-side}
  std::vector<std::array<double, 3>> accum_gradp;  // int_0^t grad p along line
  std::vector<std::array<double, 3>> accum_wedge;  // int_0^t wedge term
  std::vector<std::array<double, 3>> z0;           // z_side at the label, t=0
  std::vector<std::array<double, 3>> j0;           // curl z_side at label, t=0
  std::size_t count() const { return label.size(); }
};

// Seed records on the marker sub-lattice (plus optional extra labels)
// and sample the initial data at the labels.
LineRecordSet make_line_records(
    const ElsasserState& s, int side, int stride,
    const std::vector<std::array<double, 3>>& extra_labels = {});

// Max over lines of |z(line,t) - z(line,0) + accum_gradp| normalized by
// (eps_floor + |z(line,0)|); with vorticity=true checks the curl identity
// against the accumulated wedge term instead. Only meaningful for mu = 0.
struct IdentityResidual {
  double value = 0.0;
  double vorticity_value = 0.0;
};
IdentityResidual characteristic_identity_residual(const LineRecordSet& rec,
                                                  const ElsasserState& s,
                                                  double eps_floor = 1e-3);

// Scattering field approximation at truncation time T:
//   z_side^scatter = z0 - accum_gradp(T), curl counterpart with the wedge.
struct ScatteringRecord {
  int side = +1;
  double T = 0.0;
  std::vector<std::array<double, 3>> label;
  std::vector<std::array<double, 3>> z_scatter;
  std::vector<std::array<double, 3>> j_scatter;
  double tail_estimate = 0.0;       // bound on the dropped integral tail
  double fitted_decay_exp = 0.0;    // fitted exponent of sup|grad p|(t)
  bool tail_reliable = true;        // false if the fit is not integrable
};

// sup|grad p| history recorded during a run, used for tail extrapolation.
struct PressureDecaySeries {
  std::vector<double> t;
  std::vector<double> sup_gradp;
};

ScatteringRecord scattering_field(const LineRecordSet& rec, double T,
                                  const PressureDecaySeries& decay);

// Fit of sup|grad p| ~ C (1+t)^(-q) over the trailing half of the series;
// returns q (negated slope).
double fit_pressure_decay_exponent(const PressureDecaySeries& decay);

// Weighted label-grid L2 norm of the deviation between the truncated
// scattering field and the label-coordinate copy of `reference` (which is
// what the linearized evolution produces), using the ideal weight
// <u>^(2 omega) evaluated at the label:
//   d^2 = sum_labels (R^2 + y3^2)^omega |z_scatter - ref|^2 dy1 dy2 dy3.
double scattering_deviation_norm(const ScatteringRecord& rec,
                                 const std::vector<std::array<double, 3>>& ref,
                                 const WeightParams& w,
                                 std::array<double, 3> label_spacing);

}  // namespace alfven
