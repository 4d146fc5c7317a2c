/**
 * @brief Subcommand implementations behind the `bitreset` executable.
 *
 * Every command takes a validated RunConfig, writes its documents to
 * `output` ("-" = stdout) and returns a process exit status.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bitreset/bounds.hpp"
#include "bitreset/coherence.hpp"
#include "bitreset/engine.hpp"
#include "bitreset/io.hpp"
#include "bitreset/multibit.hpp"
#include "bitreset/protocol.hpp"
#include "bitreset/sampling.hpp"
#include "bitreset/verify.hpp"
#include "bitreset/work_distribution.hpp"

namespace bitreset {

enum class OutputFormat { csv, json };

inline OutputFormat parse_format(std::string_view s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  throw std::invalid_argument("format: expected 'csv' or 'json', got '" + std::string(s) + "'");
}

enum class DistributionMode { exact, sampled, both, brute };

inline DistributionMode parse_distribution_mode(std::string_view s) {
  if (s == "exact") return DistributionMode::exact;
  if (s == "sampled") return DistributionMode::sampled;
  if (s == "both") return DistributionMode::both;
  if (s == "brute") return DistributionMode::brute;
  throw std::invalid_argument("mode: expected exact, sampled, both or brute, got '" + std::string(s) + "'");
}

struct CoherenceDemoConfig {
  double p_upper = 0.2;
  double gap_old = 1.0;
  double gap_new = 2.0;
  int angles = 13;  ///< rotation angles sampled on [0, pi/2]

  void validate() const {
    detail::require_probability(p_upper, "p_upper");
    detail::require_finite(gap_old, "gap_old");
    detail::require_finite(gap_new, "gap_new");
    if (gap_old <= 0.0) throw std::invalid_argument("gap_old: must be > 0");
    if (gap_new <= 0.0) throw std::invalid_argument("gap_new: must be > 0");
    if (angles < 2) throw std::invalid_argument("angles: must be >= 2");
  }
};

struct RunConfig {
  ProtocolConfig protocol;
  EngineConfig engine;
  std::uint64_t seed = 1;
  std::uint64_t n_samples = 100000;
  std::string output = "-";
  OutputFormat format = OutputFormat::csv;
  DistributionMode mode = DistributionMode::exact;
  std::vector<double> fail_probs{0.1, 0.01, 0.001};
  int omega_points = 11;
  int n_bits = 1;
  CycleMode cycle_mode = CycleMode::limit_cycle;
  int t_min = 1;
  int t_max = 20;
  unsigned workers = 0;
  VerifyGrid grid;
  CoherenceDemoConfig coherence;

  void validate_distribution() const {
    protocol.validate();
    if (protocol.direction != Direction::raise)
      throw std::invalid_argument("direction: the work distribution is defined for 'raise' only");
    if ((mode == DistributionMode::sampled || mode == DistributionMode::both) && n_samples < 1)
      throw std::invalid_argument("samples: must be >= 1");
    if (mode == DistributionMode::brute && protocol.num_steps > kBruteForceCap)
      throw std::invalid_argument("num_steps: brute mode is limited to " + std::to_string(kBruteForceCap));
    validate_fail_probs();
    if (omega_points < 2) throw std::invalid_argument("omega_points: must be >= 2");
  }

  void validate_sweep() const {
    engine.validate();
    protocol.validate();
    validate_fail_probs();
    if (t_min < 0) throw std::invalid_argument("t_min: must be >= 0");
    if (t_max < t_min) throw std::invalid_argument("t_max: must be >= t_min");
    if (n_bits < 1) throw std::invalid_argument("n_bits: must be >= 1");
  }

  void validate_fail_probs() const {
    if (fail_probs.empty()) throw std::invalid_argument("eps: at least one failure probability is required");
    for (double e : fail_probs)
      if (!(e > 0.0 && e < 1.0)) throw std::invalid_argument("eps: every value must lie in (0, 1)");
  }
};

namespace detail {

/// Writes `body` to `path`, or to `fallback` when path is "-".
template <class Body>
void emit(const std::string &path, std::ostream &fallback, Body &&body) {
  if (path == "-") {
    body(fallback);
    fallback.flush();
    return;
  }
  auto file = open_output(path);
  body(file);
  check_written(file, path);
}

/// Kolmogorov-Smirnov distance between two laws on the same lattice.
inline double ks_distance(const WorkDistribution &a, const WorkDistribution &b) {
  double ca = 0.0, cb = 0.0, d = 0.0;
  for (std::size_t k = 0; k < std::max(a.size(), b.size()); ++k) {
    ca += k < a.size() ? a.probs[k] : 0.0;
    cb += k < b.size() ? b.probs[k] : 0.0;
    d = std::max(d, std::abs(ca - cb));
  }
  return d;
}

}  // namespace detail

/// Exact and/or sampled work law plus every reset bound next to its empirical value.
inline int cmd_distribution(const RunConfig &rc, std::ostream &out) {
  rc.validate_distribution();
  const ProtocolConfig &cfg = rc.protocol;
  const bool want_exact = rc.mode != DistributionMode::sampled;
  const bool want_sampled = rc.mode == DistributionMode::sampled || rc.mode == DistributionMode::both;

  WorkDistribution exact;
  if (rc.mode == DistributionMode::brute) exact = brute_force_work_distribution(cfg);
  else if (want_exact) exact = exact_work_distribution(cfg);
  SampleResult sampled;
  if (want_sampled) sampled = sample_trajectories(cfg, rc.n_samples, rc.seed, {0, rc.workers});
  const WorkDistribution &primary = want_exact ? exact : sampled.distribution;

  const ProtocolTrace trace = evolve_protocol(cfg);
  const AverageWorkBounds avg = average_work_bounds(cfg);
  json summary;
  summary["command"] = "distribution";
  summary["config"] = protocol_json(cfg);
  summary["method"] = rc.mode == DistributionMode::brute ? "brute" : (want_exact ? "exact" : "sampled");
  summary["mean"] = primary.mean();
  summary["variance"] = primary.variance();
  summary["ensemble_mean"] = trace.total_work;
  summary["quasistatic_work"] = avg.lower;
  summary["average_work_bounds"] = {{"lower", avg.lower}, {"upper", avg.upper},
                                    {"discretization_margin", 0.5 * cfg.step_energy}};
  summary["reset_failure"] = {{"final_p_upper", trace.stages.back().state.p_upper},
                              {"bound", reset_failure_bound(cfg)}};

  json quantiles = json::array();
  for (double eps : rc.fail_probs) {
    json row{{"eps", eps},
             {"empirical", empirical_w_max_eps(primary, eps)},
             {"bound", bound_json(w_max_eps_bound(cfg, eps))}};
    if (want_exact && want_sampled) row["empirical_sampled"] = empirical_w_max_eps(sampled.distribution, eps);
    quantiles.push_back(row);
  }
  summary["w_max_eps"] = quantiles;

  json tails = json::array();
  for (int i = 0; i < rc.omega_points; ++i) {
    const double omega = cfg.e_max() * i / (rc.omega_points - 1);
    const ConcentrationReport r = concentration_report(cfg, primary, omega);
    tails.push_back({{"omega", omega},
                     {"bound_quasi", r.bound_quasi},
                     {"bound_finite", bound_json(r.bound_finite)},
                     {"empirical_tail", r.empirical_tail}});
  }
  summary["concentration"] = tails;
  if (want_sampled) {
    json s{{"seed", rc.seed}, {"n_samples", rc.n_samples}, {"mean", sampled.distribution.mean()},
           {"variance", sampled.distribution.variance()}};
    if (want_exact) s["ks_distance"] = detail::ks_distance(exact, sampled.distribution);
    summary["sampled"] = s;
  }

  if (rc.format == OutputFormat::json) {
    summary["distribution"] = distribution_json(primary);
    if (want_exact && want_sampled) summary["sampled"]["distribution"] = distribution_json(sampled.distribution);
    detail::emit(rc.output, out, [&](std::ostream &os) { os << summary.dump(2) << '\n'; });
    return 0;
  }
  detail::emit(rc.output, out, [&](std::ostream &os) { write_distribution_csv(os, primary); });
  if (rc.output != "-") {
    if (want_exact && want_sampled) {
      detail::emit(rc.output + ".sampled.csv", out,
                   [&](std::ostream &os) { write_distribution_csv(os, sampled.distribution); });
    }
    detail::emit(rc.output + ".summary.json", out, [&](std::ostream &os) { os << summary.dump(2) << '\n'; });
  }
  return 0;
}

inline json engine_summary(const EngineConfig &cfg, const CycleReport &cycle) {
  const EfficiencyBounds eta = efficiency_bounds(cfg);
  json s;
  s["config"] = engine_config_json(cfg);
  s["converged"] = cycle.converged;
  s["iterations"] = cycle.iterations;
  s["net_work"] = cycle.net_work;
  s["reset_work"] = cycle.reset_work;
  s["extract_work"] = cycle.extract_work;
  s["duration"] = cycle.duration;
  s["power"] = number_or_null(cycle.power);
  s["efficiency"] = cycle.efficiency;
  s["quasistatic_net_work"] = quasistatic_net_work(cfg);
  s["net_work_bound"] = net_work_bound(cfg);
  s["power_bound"] = cfg.therm_steps >= 1 ? json(power_bound(cfg)) : json(nullptr);
  s["efficiency_bounds"] = {{"eta_lower", eta.eta_lower},
                            {"eta_upper", eta.eta_upper},
                            {"eta_quasi", eta.eta_quasi},
                            {"eta_carnot", eta.eta_carnot}};
  const bool regime = quasistatic_net_work(cfg) < 0.0;
  s["engine_regime"] = regime;
  s["threshold_time"] = regime ? number_or_null(min_time_positive_output(cfg)) : json(nullptr);
  return s;
}

/// One engine cycle: per-stage CSV plus a JSON summary of work, power, efficiency and bounds.
inline int cmd_engine(const RunConfig &rc, std::ostream &out) {
  rc.engine.validate();
  const CycleReport cycle = run_cycle(rc.engine, rc.cycle_mode);
  json summary = engine_summary(rc.engine, cycle);
  summary["command"] = "engine";
  summary["mode"] = rc.cycle_mode == CycleMode::limit_cycle ? "limit-cycle" : "first-cycle";
  if (rc.format == OutputFormat::json) {
    json stages = json::array();
    for (const auto &s : cycle.stages) {
      for (const auto *snap : {&s.after_shift, &s.after_relax}) {
        const bool shift = snap == &s.after_shift;
        stages.push_back({{"stage", s.stage},
                          {"half", std::string(to_string(s.half))},
                          {"phase", shift ? "shift" : "relax"},
                          {"gap", s.gap},
                          {"p_upper", snap->state.p_upper},
                          {"work", shift ? s.work : 0.0},
                          {"T_eff", temperature_text(snap->temperature)},
                          {"entropy_bits", snap->entropy_bits}});
      }
    }
    summary["stages"] = stages;
    detail::emit(rc.output, out, [&](std::ostream &os) { os << summary.dump(2) << '\n'; });
    return 0;
  }
  detail::emit(rc.output, out, [&](std::ostream &os) { write_cycle_csv(os, cycle); });
  if (rc.output != "-")
    detail::emit(rc.output + ".summary.json", out, [&](std::ostream &os) { os << summary.dump(2) << '\n'; });
  return 0;
}

/// Runs the bound-domination grid. Exit status 0 iff no bound is violated.
inline int cmd_verify(const RunConfig &rc, std::ostream &out, std::ostream &err) {
  for (const auto &c : rc.grid.protocol_configs()) c.validate();
  for (const auto &c : rc.grid.engine_configs()) c.validate();
  const VerifyReport report = run_verification(rc.grid, rc.workers);

  if (rc.format == OutputFormat::json) {
    json records = json::array();
    for (const auto &r : report.records)
      records.push_back({{"config", r.config},
                         {"bound", r.bound},
                         {"bound_value", number_or_null(r.bound_value)},
                         {"observed", r.observed},
                         {"margin", number_or_null(r.margin)},
                         {"status", std::string(to_string(r.status))}});
    const json doc{{"command", "verify"},
                   {"passed", report.passed()},
                   {"checks", report.records.size()},
                   {"failures", report.failures()},
                   {"unbounded", report.unbounded()},
                   {"records", records}};
    detail::emit(rc.output, out, [&](std::ostream &os) { os << doc.dump(2) << '\n'; });
  } else {
    detail::emit(rc.output, out, [&](std::ostream &os) {
      os << "config,bound,bound_value,observed,margin,status\n";
      for (const auto &r : report.records)
        os << r.config << ',' << r.bound << ',' << format_number(r.bound_value) << ',' << format_number(r.observed)
           << ',' << format_number(r.margin) << ',' << to_string(r.status) << '\n';
    });
  }
  for (const auto &r : report.records)
    if (r.status == CheckStatus::fail)
      err << "VIOLATION " << r.bound << " [" << r.config << "] bound=" << format_number(r.bound_value)
          << " observed=" << format_number(r.observed) << " margin=" << format_number(r.margin) << '\n';
  err << "verify: " << report.records.size() << " checks, " << report.failures() << " violations, "
      << report.unbounded() << " unbounded\n";
  return report.passed() ? 0 : 1;
}

/// Uncorrected vs corrected quench work for a sweep of eigenbasis rotations.
inline int cmd_coherence_demo(const RunConfig &rc, std::ostream &out) {
  const CoherenceDemoConfig &c = rc.coherence;
  c.validate();
  const Hamiltonian2 h_old = Hamiltonian2::diagonal(0.0, c.gap_old);
  const DensityMatrix2 rho = DensityMatrix2::diagonal(1.0 - c.p_upper, c.p_upper);
  json rows = json::array();
  for (int i = 0; i < c.angles; ++i) {
    const double theta = 0.5 * std::numbers::pi * i / (c.angles - 1);
    const Hamiltonian2 h_new = Hamiltonian2::rotated(0.0, c.gap_new, theta);
    const double transition = std::pow(std::sin(theta), 2);
    rows.push_back({{"theta", theta},
                    {"transition_prob", transition},
                    {"sudden_work", sudden_quench_work(rho, h_old, h_new)},
                    {"coherent_average_work",
                     coherent_average_work(1.0 - c.p_upper, c.p_upper, transition, c.gap_old, c.gap_new)},
                    {"corrected_work", corrected_quench_work(rho, h_old, h_new).work},
                    {"incoherent_work", c.p_upper * (c.gap_new - c.gap_old)}});
  }
  if (rc.format == OutputFormat::json) {
    const json doc{{"command", "coherence-demo"},
                   {"p_upper", c.p_upper},
                   {"gap_old", c.gap_old},
                   {"gap_new", c.gap_new},
                   {"rows", rows}};
    detail::emit(rc.output, out, [&](std::ostream &os) { os << doc.dump(2) << '\n'; });
    return 0;
  }
  detail::emit(rc.output, out, [&](std::ostream &os) {
    os << "theta,transition_prob,sudden_work,coherent_average_work,corrected_work,incoherent_work\n";
    for (const auto &r : rows)
      os << format_number(r["theta"].get<double>()) << ',' << format_number(r["transition_prob"].get<double>()) << ','
         << format_number(r["sudden_work"].get<double>()) << ',' << format_number(r["coherent_average_work"].get<double>()) << ','
         << format_number(r["corrected_work"].get<double>()) << ',' << format_number(r["incoherent_work"].get<double>()) << '\n';
  });
  return 0;
}

inline const std::vector<std::string> &sweep_columns() {
  static const std::vector<std::string> cols{
      "t",           "net_work",      "power",          "efficiency",          "net_work_bound",
      "power_bound", "eta_lower",     "eta_quasi",      "eta_carnot",          "threshold_time",
      "reset_mean",  "reset_mean_upper", "w_max_eps",   "w_max_eps_bound",     "n_bits",
      "multibit_work_bound", "multibit_fail_exact", "multibit_fail_bound", "multibit_excess"};
  return cols;
}

/// Thermalization-time sweep of the engine (limit cycle) and the reset bounds, one row per t.
inline int cmd_sweep(const RunConfig &rc, std::ostream &out) {
  rc.validate_sweep();
  const auto n_rows = static_cast<std::size_t>(rc.t_max - rc.t_min + 1);
  std::vector<json> rows(n_rows);
  const double eps = rc.fail_probs.front();
  parallel_chunks(n_rows, worker_count(rc.workers), [&](std::uint64_t begin, std::uint64_t end, unsigned) {
    for (std::uint64_t i = begin; i < end; ++i) {
      const int t = rc.t_min + static_cast<int>(i);
      EngineConfig ec = rc.engine;
      ec.therm_steps = t;
      ProtocolConfig pc = rc.protocol;
      pc.therm_steps = t;
      pc.direction = Direction::raise;
      const CycleReport cycle = run_cycle(ec, CycleMode::limit_cycle);
      const EfficiencyBounds eta = efficiency_bounds(ec);
      const bool regime = quasistatic_net_work(ec) < 0.0;
      const MultiBitReport mb = multi_bit_bound(rc.n_bits, pc, eps);
      const WorkDistribution dist = exact_work_distribution(pc);
      rows[i] = json{{"t", t},
                     {"net_work", cycle.net_work},
                     {"power", number_or_null(cycle.power)},
                     {"efficiency", cycle.efficiency},
                     {"net_work_bound", net_work_bound(ec)},
                     {"power_bound", t >= 1 ? json(power_bound(ec)) : json(nullptr)},
                     {"eta_lower", eta.eta_lower},
                     {"eta_quasi", eta.eta_quasi},
                     {"eta_carnot", eta.eta_carnot},
                     {"threshold_time", regime ? number_or_null(min_time_positive_output(ec)) : json(nullptr)},
                     {"reset_mean", dist.mean()},
                     {"reset_mean_upper", average_work_bounds(pc).upper},
                     {"w_max_eps", empirical_w_max_eps(dist, eps)},
                     {"w_max_eps_bound", number_or_null(w_max_eps_bound(pc, eps).value)},
                     {"n_bits", rc.n_bits},
                     {"multibit_work_bound", number_or_null(mb.total_work_bound.value)},
                     {"multibit_fail_exact", mb.combined_fail_exact},
                     {"multibit_fail_bound", mb.combined_fail_bound},
                     {"multibit_excess", average_multibit_excess(rc.n_bits, pc)}};
    }
  });
  if (rc.format == OutputFormat::json) {
    const json doc{{"command", "sweep"},
                   {"engine", engine_config_json(rc.engine)},
                   {"protocol", protocol_json(rc.protocol)},
                   {"eps", eps},
                   {"rows", rows}};
    detail::emit(rc.output, out, [&](std::ostream &os) { os << doc.dump(2) << '\n'; });
    return 0;
  }
  detail::emit(rc.output, out, [&](std::ostream &os) {
    const auto &cols = sweep_columns();
    for (std::size_t c = 0; c < cols.size(); ++c) os << (c ? "," : "") << cols[c];
    os << '\n';
    for (const auto &row : rows) {
      for (std::size_t c = 0; c < cols.size(); ++c) {
        const json &v = row.at(cols[c]);
        os << (c ? "," : "");
        if (v.is_null()) os << "nan";
        else if (v.is_number_float()) os << format_number(v.get<double>());
        else os << v.dump();
      }
      os << '\n';
    }
  });
  return 0;
}

}  // namespace bitreset
