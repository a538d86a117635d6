#pragma once

#include "alfven/simulate.hpp"

namespace alfven {

struct CheckResult {
  std::string id;           // acceptance-criteria identifier, e.g. "AC7a"
  std::string description;
  double measured = 0.0;
  double lo = 0.0, hi = 0.0;  // pass window (inclusive)
  bool pass = false;
};

struct StudyReport {
  std::string kind;
  std::vector<CheckResult> checks;
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<std::string> notes;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  CheckResult& add_check(const std::string& id, const std::string& desc,
                         double measured, double lo, double hi) {
    checks.push_back(
        {id, desc, measured, lo, hi, measured >= lo && measured <= hi});
    return checks.back();
  }
  void add_metric(const std::string& name, double v) {
    metrics.emplace_back(name, v);
  }
  void write_json(const std::string& path) const;
  void print(std::ostream& os) const;
};

// Vanishing-viscosity comparison: identical data run at every mu in
// mu_list (which must contain 0 and at least two positive values in
// ratio 2); reports sup_t ||z^mu - z^0||^2, the ratio between consecutive
// positive viscosities, and the bound quotient sup||.||^2/(mu eps e^(eps T)),
// optionally re-run at dt/2 for a stability check.
StudyReport viscous_compare(const RunConfig& base, std::vector<double> mu_list,
                            const std::string& out_dir, bool refine_dt = true,
                            int threads = 1);

// Dissipation contrast between matched-E0 low-frequency and oscillatory
// data at t = 1/(4 mu). The low-frequency member runs on the configured
// box; the oscillatory member runs on a companion box with lengths that
// are integer multiples of 2*pi (so the unit shell is exactly
// representable), each with mu sized to its own box when cfg.mu == 0.
StudyReport decay_study(const RunConfig& base, const std::string& out_dir,
                        int threads = 1);

struct DispersionCase {
  double mu;
  std::array<int, 3> mode;
};
StudyReport dispersion_study(const std::vector<DispersionCase>& cases,
                             double b0, const std::string& out_dir);
std::vector<DispersionCase> default_dispersion_cases();

// Scattering run: characteristic-line accumulation, identity residuals,
// truncated scattering fields with tail estimates; when cfg.amplitudes
// holds two or more values, also the linearization (amplitude-scaling)
// deviation study.
StudyReport scatter_study(const RunConfig& cfg, const std::string& out_dir,
                          int threads = 1);

// The canned verification suite: every module-level invariant on small
// grids. Deterministic per seed; all file output under out_dir.
StudyReport verify_suite(std::uint64_t seed, const std::string& out_dir,
                         Mutation mutation = Mutation::none);

}  // namespace alfven
