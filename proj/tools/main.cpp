#include <iostream>

#include "CLI11.hpp"
#include "alfven/studies.hpp"

namespace {

alfven::RunConfig load_with_overrides(const std::string& config_path,
                                      const std::string& out_dir,
                                      long seed_override) {
  alfven::RunConfig cfg = config_path.empty()
                              ? alfven::RunConfig{}
                              : alfven::load_config(config_path);
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (seed_override >= 0) {
    cfg.seed = static_cast<std::uint64_t>(seed_override);
    cfg.data.seed = cfg.seed;
  }
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "alfven: pseudo-spectral simulator and verification suite for "
      "incompressible MHD waves around a strong background field"};
  app.require_subcommand(1);

  std::string config_path, out_dir, mutate = "none";
  long seed = -1;
  int threads = 1;
  app.add_option("--config", config_path, "run/study configuration file");
  app.add_option("--out", out_dir, "output directory (overrides config)");
  app.add_option("--seed", seed, "seed override");
  app.add_option("--threads", threads,
                 "concurrent member runs inside studies");

  auto* sim = app.add_subcommand("simulate", "run one configured simulation");
  auto* disp =
      app.add_subcommand("dispersion", "fit mode frequencies and damping "
                                       "against the analytic relation");
  auto* visc = app.add_subcommand(
      "viscous-compare", "vanishing-viscosity deviation scaling study");
  auto* decay = app.add_subcommand(
      "decay-study", "low-frequency vs oscillatory dissipation contrast");
  auto* scat = app.add_subcommand(
      "scatter", "characteristic-line scattering run and linearization");
  auto* verify = app.add_subcommand(
      "verify", "run the full invariant suite on canned small configs");
  verify->add_option(
      "--mutate", mutate,
      "deliberately corrupt one term (none|pressure-sign); the suite must "
      "detect it. Verification hook, not for production runs.");
  auto* keys = app.add_subcommand("keys", "print the config key reference");

  CLI11_PARSE(app, argc, argv);

  try {
    if (keys->parsed()) {
      std::cout << alfven::config_reference();
      return 0;
    }
    if (sim->parsed()) {
      alfven::RunConfig cfg = load_with_overrides(config_path, out_dir, seed);
      alfven::SimulationOutput out = alfven::run_simulation(cfg, cfg.out_dir);
      std::cout << "status: " << out.status << "\n"
                << "steps: " << out.system.step_count << "\n"
                << "t: " << out.system.state.t << "\n"
                << "energy_identity_residual: "
                << out.energy_identity_residual << "\n";
      if (out.transport_checked)
        std::cout << "transport_error: " << out.transport_error << "\n";
      return out.status == "ok" ? 0 : 2;
    }
    if (disp->parsed()) {
      alfven::RunConfig cfg = load_with_overrides(config_path, out_dir, seed);
      alfven::StudyReport rep = alfven::dispersion_study(
          alfven::default_dispersion_cases(), cfg.b0, cfg.out_dir);
      rep.print(std::cout);
      return rep.all_pass() ? 0 : 1;
    }
    if (visc->parsed()) {
      alfven::RunConfig cfg = load_with_overrides(config_path, out_dir, seed);
      alfven::StudyReport rep = alfven::viscous_compare(
          cfg, cfg.mu_list, cfg.out_dir, /*refine_dt=*/true, threads);
      rep.print(std::cout);
      return rep.all_pass() ? 0 : 1;
    }
    if (decay->parsed()) {
      alfven::RunConfig cfg = load_with_overrides(config_path, out_dir, seed);
      alfven::StudyReport rep =
          alfven::decay_study(cfg, cfg.out_dir, threads);
      rep.print(std::cout);
      return rep.all_pass() ? 0 : 1;
    }
    if (scat->parsed()) {
      alfven::RunConfig cfg = load_with_overrides(config_path, out_dir, seed);
      alfven::StudyReport rep =
          alfven::scatter_study(cfg, cfg.out_dir, threads);
      rep.print(std::cout);
      return rep.all_pass() ? 0 : 1;
    }
    if (verify->parsed()) {
      alfven::Mutation mut;
      if (mutate == "none")
        mut = alfven::Mutation::none;
      else if (mutate == "pressure-sign")
        mut = alfven::Mutation::pressure_sign;
      else
        throw alfven::ConfigError("unknown mutation: " + mutate);
      const std::string dir = out_dir.empty() ? "verify_out" : out_dir;
      const std::uint64_t s = seed >= 0 ? static_cast<std::uint64_t>(seed) : 1;
      alfven::StudyReport rep = alfven::verify_suite(s, dir, mut);
      rep.print(std::cout);
      std::cout << (rep.all_pass() ? "verify: all checks passed\n"
                                   : "verify: FAILURES present\n");
      return rep.all_pass() ? 0 : 1;
    }
  } catch (const alfven::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 64;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
