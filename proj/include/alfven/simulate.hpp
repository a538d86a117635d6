#pragma once

#include <optional>

#include "alfven/checkpoint.hpp"
#include "alfven/config.hpp"

namespace alfven {

struct SimulationOutput {
  std::string status = "ok";  // ok | monitor_breach
  std::string breach_monitor;
  std::string breach_detail;

  System system;
  std::optional<DiagnosticsSeries> diagnostics;
  std::optional<FluxAccumulator> flux;
  PressureDecaySeries pressure_decay;
  InitialDataReport data_report{};

  // Unweighted energy identity residual, tracked even without the frame.
  double energy_identity_residual = 0.0;

  // When compare_transport is set on a decoupled ideal run.
  double transport_error = 0.0;
  bool transport_checked = false;

  std::optional<ScatteringRecord> scatter_plus, scatter_minus;
  std::optional<IdentityResidual> identity_plus, identity_minus;
  std::optional<SeparationReport> separation;
  std::optional<NormalProductReport> normal_plus, normal_minus;
  std::optional<JacobianReport> jac_plus, jac_minus;

  explicit SimulationOutput(System sys) : system(std::move(sys)) {}
};

// Run one configured simulation. If out_dir is nonempty, CSVs,
// checkpoints and a status.json are written there (also on a monitor
// breach, with whatever was accumulated up to the stop).
SimulationOutput run_simulation(const RunConfig& cfg,
                                const std::string& out_dir);

}  // namespace alfven
