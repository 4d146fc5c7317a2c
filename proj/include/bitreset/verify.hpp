/**
 * @brief Bound-domination checks over parameter grids.
 *
 * Each check compares an exact (or simulated) quantity with its analytic
 * bound and records the slack. Vacuous bounds (zero swap probability) are
 * reported as unbounded and never count as violations.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "bitreset/bounds.hpp"
#include "bitreset/engine.hpp"
#include "bitreset/protocol.hpp"
#include "bitreset/sampling.hpp"
#include "bitreset/work_distribution.hpp"

namespace bitreset {

/// Round-off allowance for bounds that are tight by construction.
inline constexpr double kBoundTolerance = 1e-12;

enum class CheckStatus { pass, fail, unbounded };

inline std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::unbounded: return "unbounded";
  }
  return "?";
}

struct CheckRecord {
  std::string config;
  std::string bound;
  double bound_value = 0.0;  ///< allowed maximum (or minimum for lower bounds)
  double observed = 0.0;
  double margin = 0.0;       ///< slack; negative means violated
  CheckStatus status = CheckStatus::pass;
};

struct VerifyGrid {
  double beta = 1.0;
  std::vector<double> swap_probs{0.0, 0.3, 0.7, 1.0};
  std::vector<int> therm_steps{0, 1, 3};
  std::vector<double> beta_step{0.1, 1.0};  ///< beta * step_energy
  std::vector<int> num_steps{10, 50};
  std::vector<double> fail_probs{0.1, 0.01, 0.001};
  int omega_points = 50;

  bool include_engine = true;
  double t_hot = 1.0;
  double e_max = 5.0;
  std::vector<double> temperature_ratios{0.2, 0.5, 0.9};
  std::vector<double> engine_swap_probs{0.3, 0.7, 1.0};
  std::vector<int> engine_therm_steps{1, 3, 10};
  std::vector<int> engine_num_steps{100};

  /// Test hook: multiplies the finite-time concentration bound. 1 in normal runs.
  double concentration_scale = 1.0;

  [[nodiscard]] std::vector<ProtocolConfig> protocol_configs() const {
    std::vector<ProtocolConfig> out;
    for (double p : swap_probs)
      for (int t : therm_steps)
        for (double be : beta_step)
          for (int n : num_steps) out.push_back({beta, be / beta, n, p, t, Direction::raise});
    return out;
  }

  [[nodiscard]] std::vector<EngineConfig> engine_configs() const {
    std::vector<EngineConfig> out;
    if (!include_engine) return out;
    for (double r : temperature_ratios)
      for (double p : engine_swap_probs)
        for (int t : engine_therm_steps)
          for (int n : engine_num_steps) out.push_back({r * t_hot, t_hot, e_max, n, p, t});
    return out;
  }
};

inline std::string format_eps(double eps) {
  std::ostringstream os;
  os << eps;
  return os.str();
}

inline std::string describe(const ProtocolConfig &c) {
  std::ostringstream os;
  os << "beta=" << c.beta << " E=" << c.step_energy << " N=" << c.num_steps << " p=" << c.swap_prob
     << " t=" << c.therm_steps;
  return os.str();
}

inline std::string describe(const EngineConfig &c) {
  std::ostringstream os;
  os << "T_C=" << c.t_cold << " T_H=" << c.t_hot << " E_max=" << c.e_max << " N=" << c.num_steps
     << " p=" << c.swap_prob << " t=" << c.therm_steps;
  return os.str();
}

namespace detail {
/// observed <= allowed + tolerance
inline CheckRecord upper_check(std::string config, std::string name, double allowed, double observed,
                               double tolerance = kBoundTolerance) {
  const double margin = allowed - observed;
  return {std::move(config), std::move(name), allowed, observed, margin,
          margin >= -tolerance ? CheckStatus::pass : CheckStatus::fail};
}

inline CheckRecord lower_check(std::string config, std::string name, double allowed, double observed,
                               double tolerance = kBoundTolerance) {
  const double margin = observed - allowed;
  return {std::move(config), std::move(name), allowed, observed, margin,
          margin >= -tolerance ? CheckStatus::pass : CheckStatus::fail};
}

inline CheckRecord unbounded_check(std::string config, std::string name, double observed) {
  return {std::move(config), std::move(name), std::numeric_limits<double>::infinity(), observed,
          std::numeric_limits<double>::infinity(), CheckStatus::unbounded};
}
}  // namespace detail

/// Every reset-side bound for one configuration.
inline std::vector<CheckRecord> check_protocol(const ProtocolConfig &config, const VerifyGrid &grid) {
  std::vector<CheckRecord> out;
  const std::string label = describe(config);
  const WorkDistribution dist = exact_work_distribution(config);
  const double mean = dist.mean();
  const AverageWorkBounds avg = average_work_bounds(config);
  out.push_back(detail::lower_check(label, "mean_lower", avg.lower, mean));
  out.push_back(detail::upper_check(label, "mean_upper", avg.upper + 0.5 * config.step_energy, mean));

  const ProtocolTrace trace = evolve_protocol(config);
  double worst = std::numeric_limits<double>::infinity();
  DeltaBoundReport worst_stage;
  for (const auto &r : delta_reports(config, trace)) {
    if (r.delta_bound - r.delta_actual < worst) {
      worst = r.delta_bound - r.delta_actual;
      worst_stage = r;
    }
  }
  out.push_back(detail::upper_check(label, "delta", worst_stage.delta_bound, worst_stage.delta_actual));
  out.push_back(detail::upper_check(label, "reset_failure", reset_failure_bound(config),
                                    trace.stages.back().state.p_upper));

  const double e_max = config.e_max();
  if (mcdiarmid_bound(config, 0.0).unbounded) {
    out.push_back(detail::unbounded_check(label, "concentration", dist.two_sided_tail(mean, 0.0)));
  } else {
    CheckRecord worst_tail;
    worst_tail.margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid.omega_points; ++i) {
      const double omega = e_max * i / std::max(1, grid.omega_points - 1);
      const double allowed = grid.concentration_scale * mcdiarmid_bound(config, omega).value;
      CheckRecord r = detail::upper_check(label, "concentration", allowed, dist.two_sided_tail(mean, omega));
      if (r.margin < worst_tail.margin) worst_tail = r;
    }
    out.push_back(worst_tail);
  }

  for (double eps : grid.fail_probs) {
    const std::string name = "w_max_eps(" + format_eps(eps) + ")";
    const double quantile = empirical_w_max_eps(dist, eps);
    const BoundValue b = w_max_eps_bound(config, eps);
    out.push_back(b.unbounded ? detail::unbounded_check(label, name, quantile)
                              : detail::upper_check(label, name, b.value, quantile));
  }
  return out;
}

/// Engine bounds for one configuration, checked against the simulated limit cycle.
inline std::vector<CheckRecord> check_engine(const EngineConfig &config) {
  std::vector<CheckRecord> out;
  const std::string label = describe(config);
  const CycleReport cycle = run_cycle(config, CycleMode::limit_cycle);
  const double e = config.step_energy();
  const double bound = net_work_bound(config);
  out.push_back(detail::upper_check(label, "net_work", bound + e, cycle.net_work));
  if (config.therm_steps >= 1)
    out.push_back(detail::upper_check(label, "power", power_bound(config) + e / static_cast<double>(cycle.duration),
                                      cycle.power));
  const EfficiencyBounds eta = efficiency_bounds(config);
  const double eta_margin = e / (config.t_hot * std::numbers::ln2);
  out.push_back(detail::lower_check(label, "efficiency_lower", eta.eta_lower - eta_margin, cycle.efficiency));
  out.push_back(detail::upper_check(label, "efficiency_upper", eta.eta_upper + eta_margin, cycle.efficiency));
  const double identity = eta.eta_quasi - eta.eta_carnot +
                          (std::log1p(std::exp(-config.e_max / config.t_hot)) -
                           (config.t_cold / config.t_hot) * std::log1p(std::exp(-config.e_max / config.t_cold))) /
                              std::numbers::ln2;
  out.push_back(detail::upper_check(label, "efficiency_identity", 0.0, std::abs(identity)));
  if (quasistatic_net_work(config) < 0.0) {
    const double threshold = min_time_positive_output(config);
    // negative bound exactly when t exceeds the threshold
    const bool negative = bound < 0.0;
    const bool beyond = static_cast<double>(config.therm_steps) > threshold;
    out.push_back({label, "threshold_sign", threshold, static_cast<double>(config.therm_steps),
                   static_cast<double>(config.therm_steps) - threshold,
                   negative == beyond ? CheckStatus::pass : CheckStatus::fail});
  }
  return out;
}

struct VerifyReport {
  std::vector<CheckRecord> records;
  [[nodiscard]] std::size_t failures() const {
    return static_cast<std::size_t>(std::count_if(records.begin(), records.end(),
                                                  [](const auto &r) { return r.status == CheckStatus::fail; }));
  }
  [[nodiscard]] std::size_t unbounded() const {
    return static_cast<std::size_t>(std::count_if(records.begin(), records.end(),
                                                  [](const auto &r) { return r.status == CheckStatus::unbounded; }));
  }
  [[nodiscard]] bool passed() const { return failures() == 0; }
};

/// Runs every check of the grid; records come back in grid order whatever the worker count.
inline VerifyReport run_verification(const VerifyGrid &grid, unsigned workers = 0) {
  const auto protocols = grid.protocol_configs();
  const auto engines = grid.engine_configs();
  const std::size_t total = protocols.size() + engines.size();
  std::vector<std::vector<CheckRecord>> slots(total);
  parallel_chunks(total, worker_count(workers), [&](std::uint64_t begin, std::uint64_t end, unsigned) {
    for (std::uint64_t i = begin; i < end; ++i)
      slots[i] = i < protocols.size() ? check_protocol(protocols[i], grid)
                                      : check_engine(engines[i - protocols.size()]);
  });
  VerifyReport report;
  for (auto &s : slots) report.records.insert(report.records.end(), s.begin(), s.end());
  return report;
}

}  // namespace bitreset
