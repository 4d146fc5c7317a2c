/**
 * @brief Two-bath qubit engine: reset against a cold bath, extraction against a hot bath.
 *
 * Sign convention: positive work is consumed by the system, so a producing
 * engine has negative net work.
 */
#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bitreset/protocol.hpp"

namespace bitreset {

struct EngineConfig {
  double t_cold = 0.5;
  double t_hot = 1.0;
  double e_max = 5.0;
  int num_steps = 100;  ///< level shifts per half-cycle
  double swap_prob = 1.0;
  int therm_steps = 1;

  [[nodiscard]] double step_energy() const { return e_max / num_steps; }
  [[nodiscard]] double persistence() const { return std::pow(1.0 - swap_prob, therm_steps); }
  [[nodiscard]] double swap_effective() const { return 1.0 - persistence(); }

  void validate() const {
    detail::require_finite(t_cold, "t_cold");
    detail::require_finite(t_hot, "t_hot");
    if (t_cold <= 0.0) throw std::invalid_argument("t_cold: must be > 0");
    if (t_hot < t_cold) throw std::invalid_argument("t_hot: must be >= t_cold");
    detail::require_finite(e_max, "e_max");
    if (e_max <= 0.0) throw std::invalid_argument("e_max: must be > 0");
    if (num_steps < 1) throw std::invalid_argument("num_steps: must be >= 1");
    detail::require_probability(swap_prob, "swap_prob");
    if (therm_steps < 0) throw std::invalid_argument("therm_steps: must be >= 0");
  }

  /// The single-bath protocol driven during one half of the cycle.
  [[nodiscard]] ProtocolConfig half_protocol(double temperature, Direction direction) const {
    return {1.0 / temperature, step_energy(), num_steps, swap_prob, therm_steps, direction};
  }
};

enum class TemperatureKind { finite, infinite, ground };

struct EffectiveTemperature {
  double value = 0.0;
  TemperatureKind kind = TemperatureKind::finite;
};

/// Temperature whose Gibbs state at `gap` has the given populations; negative for inversion.
inline EffectiveTemperature effective_temperature(const Occupation &state, double gap) {
  state.validate("state");
  if (!(gap > 0.0) || !std::isfinite(gap)) throw std::invalid_argument("gap: must be > 0");
  if (state.p_upper <= 0.0) return {0.0, TemperatureKind::ground};
  if (state.p_lower == state.p_upper) return {std::numeric_limits<double>::infinity(), TemperatureKind::infinite};
  return {gap / std::log(state.p_lower / state.p_upper), TemperatureKind::finite};
}

/// Shannon entropy in bits, with 0 log 0 = 0.
inline double state_entropy(const Occupation &state) {
  state.validate("state");
  double h = 0.0;
  for (double p : {state.p_lower, state.p_upper})
    if (p > 0.0) h -= p * std::log2(p);
  return h;
}

enum class Half { reset, extract };
inline std::string_view to_string(Half h) { return h == Half::reset ? "reset" : "extract"; }

enum class CycleMode { first_cycle, limit_cycle };

inline CycleMode parse_cycle_mode(std::string_view s) {
  if (s == "first-cycle" || s == "first") return CycleMode::first_cycle;
  if (s == "limit-cycle" || s == "limit") return CycleMode::limit_cycle;
  throw std::invalid_argument("cycle_mode: expected 'first-cycle' or 'limit-cycle', got '" + std::string(s) + "'");
}

/// State of the system at one instant of the cycle.
struct CycleSnapshot {
  Occupation state;
  EffectiveTemperature temperature;  ///< NaN value when the gap is zero
  double entropy_bits = 0.0;
};

struct CycleStage {
  Half half = Half::reset;
  int stage = 0;       ///< 1..N within its half
  double gap = 0.0;    ///< gap after the level shift
  double work = 0.0;   ///< paid at the level shift
  CycleSnapshot after_shift;
  CycleSnapshot after_relax;
};

struct CycleReport {
  std::vector<CycleStage> stages;
  Occupation start;  ///< populations at gap 0 when the reset half begins
  Occupation end;
  double net_work = 0.0;
  double reset_work = 0.0;
  double extract_work = 0.0;
  long long duration = 0;  ///< 2 N t thermalization steps
  double power = 0.0;      ///< net_work / duration; NaN when duration is 0
  double efficiency = 0.0; ///< -net_work / (T_H ln 2)
  bool converged = false;
  long long iterations = 1;
  double residual = 0.0;
};

class CycleNotConverged : public std::runtime_error {
 public:
  CycleNotConverged(long long iterations, double residual)
      : std::runtime_error("limit cycle did not converge after " + std::to_string(iterations) +
                           " cycles (last residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  [[nodiscard]] double residual() const { return residual_; }

 private:
  double residual_;
};

inline constexpr double kCycleTolerance = 1e-12;
inline constexpr long long kCycleCap = 1000000;

namespace detail {
inline CycleSnapshot snapshot(const Occupation &s, double gap) {
  CycleSnapshot out{s, {std::numeric_limits<double>::quiet_NaN(), TemperatureKind::finite}, state_entropy(s)};
  if (gap > 0.0) out.temperature = effective_temperature(s, gap);
  return out;
}

inline CycleReport simulate_cycle(const EngineConfig &config, const Occupation &start, bool record) {
  CycleReport report;
  report.start = start;
  const double e = config.step_energy();
  const int n_steps = config.num_steps;
  if (record) report.stages.reserve(2 * static_cast<std::size_t>(n_steps));
  Occupation state = start;

  const auto run_half = [&](Half half) {
    const bool raising = half == Half::reset;
    const ProtocolConfig proto =
        config.half_protocol(raising ? config.t_cold : config.t_hot, raising ? Direction::raise : Direction::lower);
    double total = 0.0;
    for (int n = 1; n <= n_steps; ++n) {
      const double gap = stage_gap(proto, n);
      const double work = (raising ? 1.0 : -1.0) * state.p_upper * e;
      const Occupation shifted = state;
      state = evolve_stage(state, gap, proto);
      total += work;
      if (record) report.stages.push_back({half, n, gap, work, snapshot(shifted, gap), snapshot(state, gap)});
    }
    return total;
  };

  report.reset_work = run_half(Half::reset);
  report.extract_work = run_half(Half::extract);
  report.net_work = report.reset_work + report.extract_work;
  report.end = state;
  report.residual = std::abs(state.p_upper - start.p_upper);
  report.duration = 2LL * n_steps * config.therm_steps;
  report.power = report.duration > 0 ? report.net_work / static_cast<double>(report.duration)
                                     : std::numeric_limits<double>::quiet_NaN();
  report.efficiency = -report.net_work / (config.t_hot * std::numbers::ln2);
  return report;
}
}  // namespace detail

/**
 * Simulates one engine cycle. In limit-cycle mode, full cycles are iterated
 * from the maximally mixed state until the start-of-cycle populations move
 * by less than 1e-12; the last cycle is reported.
 */
inline CycleReport run_cycle(const EngineConfig &config, CycleMode mode, long long cap = kCycleCap) {
  config.validate();
  Occupation start = Occupation::maximally_mixed();
  if (mode == CycleMode::first_cycle) {
    CycleReport r = detail::simulate_cycle(config, start, true);
    r.converged = r.residual < kCycleTolerance;
    return r;
  }
  double residual = 0.0;
  for (long long i = 1; i <= cap; ++i) {
    CycleReport probe = detail::simulate_cycle(config, start, false);
    residual = probe.residual;
    if (residual < kCycleTolerance) {
      CycleReport r = detail::simulate_cycle(config, start, true);
      r.converged = true;
      r.iterations = i;
      return r;
    }
    start = probe.end;
  }
  throw CycleNotConverged(cap, residual);
}

/// Two-bath quasistatic net work: -(T_H - T_C) ln 2 - T_C ln Z_C + T_H ln Z_H.
inline double quasistatic_net_work(const EngineConfig &config) {
  config.validate();
  const double ln_zc = std::log1p(std::exp(-config.e_max / config.t_cold));
  const double ln_zh = std::log1p(std::exp(-config.e_max / config.t_hot));
  return -(config.t_hot - config.t_cold) * std::numbers::ln2 - config.t_cold * ln_zc + config.t_hot * ln_zh;
}

/// P_sw W_quasi_net + (1 - P_sw) E_max.
inline double net_work_bound(const EngineConfig &config) {
  const double w = quasistatic_net_work(config);
  const double p_sw = config.swap_effective();
  return p_sw * w + (1.0 - p_sw) * config.e_max;
}

inline double power_bound(const EngineConfig &config) {
  config.validate();
  if (config.therm_steps < 1) throw std::invalid_argument("therm_steps: power is undefined for a zero-duration cycle");
  return net_work_bound(config) / (2.0 * config.num_steps * config.therm_steps);
}

class NoEngineRegime : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Thermalization time beyond which the net-work bound is negative.
inline double min_time_positive_output(const EngineConfig &config) {
  const double w = quasistatic_net_work(config);
  if (w >= 0.0) throw NoEngineRegime("no engine regime: quasistatic net work is non-negative");
  if (config.swap_prob <= 0.0) return std::numeric_limits<double>::infinity();
  if (config.swap_prob >= 1.0) return 0.0;
  return (-1.0 / std::log1p(-config.swap_prob)) * std::log1p(-config.e_max / w);
}

struct EfficiencyBounds {
  double eta_lower = 0.0;
  double eta_upper = 0.0;
  double eta_quasi = 0.0;
  double eta_carnot = 0.0;
};

inline EfficiencyBounds efficiency_bounds(const EngineConfig &config) {
  config.validate();
  const double ln_zc = std::log1p(std::exp(-config.e_max / config.t_cold));
  const double ln_zh = std::log1p(std::exp(-config.e_max / config.t_hot));
  const double carnot = 1.0 - config.t_cold / config.t_hot;
  const double quasi = carnot - (ln_zh - (config.t_cold / config.t_hot) * ln_zc) / std::numbers::ln2;
  const double lower = quasi - config.persistence() * config.e_max / (config.t_hot * std::numbers::ln2);
  return {lower, quasi, quasi, carnot};
}

}  // namespace bitreset
