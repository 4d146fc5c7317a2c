/**
 * @brief Two-level raising/lowering protocol with partial-swap thermalization.
 *
 * Units: k_B = 1, hbar = 1. Temperatures are energies and beta = 1 / T.
 */
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bitreset {

/// Tolerance used for every probability-conservation invariant.
inline constexpr double kProbabilityTolerance = 1e-12;

enum class Direction { raise, lower };

inline std::string_view to_string(Direction d) { return d == Direction::raise ? "raise" : "lower"; }

inline Direction parse_direction(std::string_view s) {
  if (s == "raise") return Direction::raise;
  if (s == "lower") return Direction::lower;
  throw std::invalid_argument("direction: expected 'raise' or 'lower', got '" + std::string(s) + "'");
}

namespace detail {
inline void require_finite(double v, const char *field) {
  if (!std::isfinite(v)) throw std::invalid_argument(std::string(field) + ": value must be finite");
}
inline void require_probability(double v, const char *field) {
  require_finite(v, field);
  if (v < 0.0 || v > 1.0) throw std::invalid_argument(std::string(field) + ": must lie in [0, 1]");
}
}  // namespace detail

/// Population of the lower and upper level of a two-level system.
struct Occupation {
  double p_lower = 0.5;
  double p_upper = 0.5;

  static constexpr Occupation maximally_mixed() { return {0.5, 0.5}; }
  static Occupation from_upper(double p_upper) { return {1.0 - p_upper, p_upper}; }

  [[nodiscard]] bool is_valid(double tol = kProbabilityTolerance) const {
    return std::isfinite(p_lower) && std::isfinite(p_upper) && p_lower >= -tol && p_upper >= -tol &&
           p_lower <= 1.0 + tol && p_upper <= 1.0 + tol && std::abs(p_lower + p_upper - 1.0) <= tol;
  }

  void validate(const char *field = "occupation") const {
    if (!is_valid()) throw std::invalid_argument(std::string(field) + ": not a valid two-level distribution");
  }

  friend bool operator==(const Occupation &, const Occupation &) = default;
};

/// One raising (bit reset) or lowering (work extraction) protocol.
struct ProtocolConfig {
  double beta = 1.0;
  double step_energy = 0.01;
  int num_steps = 100;
  double swap_prob = 1.0;
  int therm_steps = 1;
  Direction direction = Direction::raise;

  [[nodiscard]] double e_max() const { return static_cast<double>(num_steps) * step_energy; }

  /// (1 - p)^t: probability that no swap happens during one thermalization period.
  [[nodiscard]] double persistence() const { return std::pow(1.0 - swap_prob, therm_steps); }

  void validate() const {
    detail::require_finite(beta, "beta");
    if (beta <= 0.0) throw std::invalid_argument("beta: must be > 0");
    detail::require_finite(step_energy, "step_energy");
    if (step_energy <= 0.0) throw std::invalid_argument("step_energy: must be > 0");
    if (num_steps < 1) throw std::invalid_argument("num_steps: must be >= 1");
    detail::require_probability(swap_prob, "swap_prob");
    if (therm_steps < 0) throw std::invalid_argument("therm_steps: must be >= 0");
    if (!std::isfinite(e_max())) throw std::invalid_argument("num_steps * step_energy: must be finite");
  }
};

/// Gibbs populations at the given gap: (1, e^{-beta gap}) / (1 + e^{-beta gap}).
inline Occupation thermal_population(double gap, double beta) {
  detail::require_finite(gap, "gap");
  detail::require_finite(beta, "beta");
  if (gap < 0.0) throw std::invalid_argument("gap: must be >= 0");
  if (beta <= 0.0) throw std::invalid_argument("beta: must be > 0");
  const double boltz = std::exp(-beta * gap);
  const double z = 1.0 + boltz;
  return {1.0 / z, boltz / z};
}

/// Net replacement probability after t partial swaps: 1 - (1 - p)^t.
inline double effective_swap_prob(double p, int t) {
  detail::require_probability(p, "swap_prob");
  if (t < 0) throw std::invalid_argument("therm_steps: must be >= 0");
  return 1.0 - std::pow(1.0 - p, t);
}

/// One application of M = (1 - p) 1 + p M_th at a fixed gap.
inline Occupation partial_swap_step(const Occupation &state, double gap, double beta, double p) {
  state.validate("state");
  detail::require_probability(p, "swap_prob");
  const Occupation th = thermal_population(gap, beta);
  return {(1.0 - p) * state.p_lower + p * th.p_lower, (1.0 - p) * state.p_upper + p * th.p_upper};
}

/// Thermalize for config.therm_steps unit steps at a fixed gap.
inline Occupation evolve_stage(const Occupation &state, double stage_gap, const ProtocolConfig &config) {
  Occupation out = state;
  for (int i = 0; i < config.therm_steps; ++i) out = partial_swap_step(out, stage_gap, config.beta, config.swap_prob);
  return out;
}

struct StageRecord {
  int stage = 0;
  double gap = 0.0;         ///< gap after the level shift of this stage
  Occupation state;         ///< populations after thermalizing at `gap`
  double work = 0.0;        ///< expected work paid at the level shift
};

struct ProtocolTrace {
  Occupation initial;
  std::vector<StageRecord> stages;
  double total_work = 0.0;
};

/// Gap after the level shift of stage n (1-based).
inline double stage_gap(const ProtocolConfig &config, int n) {
  return config.direction == Direction::raise ? n * config.step_energy
                                              : (config.num_steps - n) * config.step_energy;
}

/**
 * Deterministic ensemble evolution. Every stage shifts the upper level by
 * one step (paying p_upper * step_energy, negative when lowering) and then
 * thermalizes at the new gap.
 */
inline ProtocolTrace evolve_protocol(const ProtocolConfig &config,
                                     const Occupation &initial = Occupation::maximally_mixed()) {
  config.validate();
  initial.validate("initial");
  const double sign = config.direction == Direction::raise ? 1.0 : -1.0;
  ProtocolTrace trace{initial, {}, 0.0};
  trace.stages.reserve(static_cast<std::size_t>(config.num_steps));
  Occupation state = initial;
  for (int n = 1; n <= config.num_steps; ++n) {
    const double work = sign * state.p_upper * config.step_energy;
    const double gap = stage_gap(config, n);
    state = evolve_stage(state, gap, config);
    trace.stages.push_back({n, gap, state, work});
    trace.total_work += work;
  }
  return trace;
}

/// Upper bound on the variational distance from the thermal state after stage n (raising only).
inline double delta_bound(int stage, const ProtocolConfig &config) {
  config.validate();
  if (config.direction != Direction::raise)
    throw std::invalid_argument("delta_bound: only defined for the raising direction");
  if (stage < 1 || stage > config.num_steps) throw std::invalid_argument("stage: must lie in [1, num_steps]");
  return (thermal_population(stage * config.step_energy, config.beta).p_lower - 0.5) * config.persistence();
}

struct DeltaBoundReport {
  int stage = 0;
  double delta_actual = 0.0;
  double delta_bound = 0.0;
};

/// Measured vs bounded variational distance for every stage of a raising trace.
inline std::vector<DeltaBoundReport> delta_reports(const ProtocolConfig &config, const ProtocolTrace &trace) {
  std::vector<DeltaBoundReport> out;
  out.reserve(trace.stages.size());
  for (const auto &s : trace.stages) {
    const Occupation th = thermal_population(s.gap, config.beta);
    out.push_back({s.stage, std::abs(s.state.p_upper - th.p_upper), delta_bound(s.stage, config)});
  }
  return out;
}

/**
 * Bound on the final upper-level population of a reset:
 * sigma + (1-p)^t (1/2 - sigma), evaluated as (1-q) sigma + q/2 so that
 * q = 1 gives exactly 1/2.
 */
inline double reset_failure_bound(const ProtocolConfig &config) {
  config.validate();
  if (config.direction != Direction::raise)
    throw std::invalid_argument("reset_failure_bound: only defined for the raising direction");
  const double sigma = thermal_population(config.e_max(), config.beta).p_upper;
  const double q = config.persistence();
  return (1.0 - q) * sigma + 0.5 * q;
}

}  // namespace bitreset
