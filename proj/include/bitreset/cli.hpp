/**
 * @brief Command-line front end.
 *
 * All options live on the top-level app so that a flat key = value config
 * file (--config) can set any of them; flags given on the command line
 * override file values.
 */
#pragma once

#include <iostream>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bitreset/commands.hpp"
#include "bitreset/engine.hpp"

namespace bitreset {

inline int run_cli(int argc, const char *const *argv, std::ostream &out = std::cout, std::ostream &err = std::cerr) {
  CLI::App app{"Finite-time bit reset: work distributions, bounds and a two-bath engine"};
  app.set_config("--config", "", "Flat key = value config file; command-line flags take precedence");
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig rc;
  std::string direction = "raise", format = "csv", mode = "exact", cycle_mode = "limit-cycle";
  std::vector<double> grid_p, grid_be;
  std::vector<int> grid_t, grid_n;
  bool no_engine_grid = false;

  app.add_option("--seed", rc.seed, "Base seed of the per-trajectory random streams");
  app.add_option("--samples", rc.n_samples, "Monte Carlo sample count");
  app.add_option("--output", rc.output, "Output path ('-' for stdout)");
  app.add_option("--format", format, "csv or json");
  app.add_option("--workers", rc.workers, "Worker threads (default: $BITRESET_WORKERS or hardware)");

  app.add_option("--beta", rc.protocol.beta, "Inverse bath temperature of the reset");
  app.add_option("--step_energy,--step-energy", rc.protocol.step_energy, "Energy raised per stage");
  app.add_option("--num_steps,--num-steps", rc.protocol.num_steps, "Stages per protocol (per half-cycle for engine)");
  app.add_option("--swap_prob,--swap-prob", rc.protocol.swap_prob, "Per-step swap probability p");
  app.add_option("--therm_steps,--therm-steps", rc.protocol.therm_steps, "Thermalization steps t per stage");
  app.add_option("--direction", direction, "raise or lower");
  app.add_option("--eps", rc.fail_probs, "Comma-separated failure probabilities for W_max^eps")->delimiter(',');
  app.add_option("--omega_points,--omega-points", rc.omega_points, "Deviation grid size of the tail table");
  app.add_option("--mode", mode, "distribution: exact, sampled, both or brute");
  app.add_option("--n_bits,--n-bits", rc.n_bits, "Number of independent bits (sweep)");

  app.add_option("--t_cold,--t-cold", rc.engine.t_cold, "Cold bath temperature");
  app.add_option("--t_hot,--t-hot", rc.engine.t_hot, "Hot bath temperature");
  app.add_option("--e_max,--e-max", rc.engine.e_max, "Maximum gap of the engine cycle");
  app.add_option("--cycle_mode,--cycle-mode", cycle_mode, "first-cycle or limit-cycle");
  app.add_option("--t_min,--t-min", rc.t_min, "Sweep: first thermalization time");
  app.add_option("--t_max,--t-max", rc.t_max, "Sweep: last thermalization time");

  app.add_option("--grid_p,--grid-p", grid_p, "Verify: comma-separated swap probabilities")->delimiter(',');
  app.add_option("--grid_t,--grid-t", grid_t, "Verify: comma-separated thermalization times")->delimiter(',');
  app.add_option("--grid_beta_e,--grid-beta-e", grid_be, "Verify: comma-separated beta * step_energy")->delimiter(',');
  app.add_option("--grid_n,--grid-n", grid_n, "Verify: comma-separated stage counts")->delimiter(',');
  app.add_flag("--no_engine_grid,--no-engine-grid", no_engine_grid, "Verify: skip the engine checks");
  app.add_option("--test_scale_concentration", rc.grid.concentration_scale)->group("");

  app.add_option("--p_upper,--p-upper", rc.coherence.p_upper, "Coherence demo: upper-level population");
  app.add_option("--gap_old,--gap-old", rc.coherence.gap_old, "Coherence demo: initial gap");
  app.add_option("--gap_new,--gap-new", rc.coherence.gap_new, "Coherence demo: final gap");
  app.add_option("--angles", rc.coherence.angles, "Coherence demo: number of rotation angles");

  auto *distribution = app.add_subcommand("distribution", "Exact/sampled work distribution and reset bounds");
  auto *engine = app.add_subcommand("engine", "Engine cycle trace and summary");
  auto *verify = app.add_subcommand("verify", "Check every bound on a parameter grid");
  auto *coherence = app.add_subcommand("coherence-demo", "Quench work with and without the correcting unitary");
  auto *sweep = app.add_subcommand("sweep", "Thermalization-time sweep of engine and reset bounds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    // help exits 0; every malformed flag or config value is an invalid config
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    rc.format = parse_format(format);
    rc.mode = parse_distribution_mode(mode);
    rc.cycle_mode = parse_cycle_mode(cycle_mode);
    rc.protocol.direction = parse_direction(direction);
    rc.engine.num_steps = rc.protocol.num_steps;
    rc.engine.swap_prob = rc.protocol.swap_prob;
    rc.engine.therm_steps = rc.protocol.therm_steps;
    rc.grid.beta = rc.protocol.beta;
    rc.grid.fail_probs = rc.fail_probs;
    rc.validate_fail_probs();
    if (!grid_p.empty()) rc.grid.swap_probs = grid_p;
    if (!grid_t.empty()) rc.grid.therm_steps = grid_t;
    if (!grid_be.empty()) rc.grid.beta_step = grid_be;
    if (!grid_n.empty()) rc.grid.num_steps = grid_n;
    rc.grid.include_engine = !no_engine_grid;

    if (*distribution) return cmd_distribution(rc, out);
    if (*engine) return cmd_engine(rc, out);
    if (*verify) return cmd_verify(rc, out, err);
    if (*coherence) return cmd_coherence_demo(rc, out);
    if (*sweep) return cmd_sweep(rc, out);
  } catch (const std::invalid_argument &e) {
    err << "invalid config: " << e.what() << '\n';
    return 2;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}

}  // namespace bitreset
