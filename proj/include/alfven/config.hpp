#pragma once

#include <map>
#include <string>
#include <vector>

#include "alfven/diagnostics.hpp"
#include "alfven/initial_data.hpp"

namespace alfven {

// One run (or one study) described by a flat key = value file. Parsing is
// strict: unknown keys, malformed values, and violated run contracts are
// all rejected before anything executes.
struct RunConfig {
  std::array<int, 3> grid{32, 32, 32};
  std::array<double, 3> box{16.0, 16.0, 16.0};
  InitialDataSpec data;
  double mu = 0.0;
  double b0 = 1.0;
  double dt = 0.01;
  double t_final = 1.0;
  int diag_every = 10;          // diagnostics cadence in steps
  int flux_every = 1;           // flux accumulation cadence in steps
  int markers_every = 50;       // marker CSV dump cadence (0 = off)
  int checkpoint_every = 0;     // checkpoint cadence in steps (0 = end only)
  WeightParams weights;
  int deriv_budget = 2;
  int marker_stride = 4;
  bool enable_frame = true;
  bool enable_markers = true;
  bool enable_scattering = false;
  std::vector<double> flux_levels;
  std::vector<FluxKind> flux_kinds{FluxKind::z2};
  int flux_order = 1;
  double cfl_max = 0.8;
  double amplitude_margin = -1.0;  // < 0: use the data amplitude
  bool compare_transport = false;  // decoupled runs: track the exact shift
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  Mutation mutation = Mutation::none;

  // study-specific knobs
  std::vector<double> mu_list;          // viscous-compare
  std::vector<double> amplitudes;       // scatter linearization
  double parabolic_constant = 1.0;      // eps_mu = c_par * mu threshold
  bool decay_mu_auto = true;            // decay-study: mu = 2.5 / L3 per member

  double margin() const {
    return amplitude_margin >= 0.0 ? amplitude_margin : data.amplitude;
  }

  // The no-wrap contract: waves travel at speed ~b0 and must not cross
  // the periodic seam, T * b0 * (1 + margin) <= 0.4 * L3. Violations are
  // config errors, not runtime surprises.
  void validate() const;

  Grid3 make_grid() const { return Grid3(grid, box); }
};

RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

// Documented key list (name, type, default, description) for --help.
std::string config_reference();

}  // namespace alfven
