/**
 * @brief Analytic average-work, concentration and single-shot bounds for a reset.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "bitreset/protocol.hpp"
#include "bitreset/work_distribution.hpp"

namespace bitreset {

/// A bound that may be vacuous. `unbounded` is set when the swap probability vanishes.
struct BoundValue {
  double value = 0.0;
  bool unbounded = false;
};

/// (1/beta) ln(2 / (1 + e^{-beta e_max})): work of raising the upper level quasistatically to e_max.
inline double quasistatic_work(double e_max, double beta) {
  detail::require_finite(beta, "beta");
  if (beta <= 0.0) throw std::invalid_argument("beta: must be > 0");
  if (std::isnan(e_max) || e_max < 0.0) throw std::invalid_argument("e_max: must be >= 0");
  return (std::numbers::ln2 - std::log1p(std::exp(-beta * e_max))) / beta;
}

struct AverageWorkBounds {
  double lower = 0.0;
  double upper = 0.0;
};

inline AverageWorkBounds average_work_bounds(const ProtocolConfig &config) {
  config.validate();
  detail::require_raising(config, "average_work_bounds");
  const double lower = quasistatic_work(config.e_max(), config.beta);
  const double q = config.persistence();
  return {lower, lower + q * (0.5 * config.e_max() - lower)};
}

/// Bounded-difference coefficient of stage n: E (1 - (1 - P_sw)^{N-n}) / P_sw.
inline BoundValue cn_bound(const ProtocolConfig &config, int n) {
  config.validate();
  if (n < 1 || n > config.num_steps) throw std::invalid_argument("n: must lie in [1, num_steps]");
  const double p_sw = effective_swap_prob(config.swap_prob, config.therm_steps);
  if (p_sw <= 0.0) return {std::numeric_limits<double>::infinity(), true};
  const int remaining = config.num_steps - n;
  // -expm1(k log1p(-x)) = 1 - (1-x)^k without cancellation for small x
  const double numer = p_sw >= 1.0 ? (remaining > 0 ? 1.0 : 0.0) : -std::expm1(remaining * std::log1p(-p_sw));
  return {config.step_energy * numer / p_sw, false};
}

/// min(1, 2 exp(-2 omega^2 P_sw^2 / (N E^2))). With P_sw = 1 this is the fully-thermalized form.
inline BoundValue mcdiarmid_bound(const ProtocolConfig &config, double omega) {
  config.validate();
  if (std::isnan(omega) || omega < 0.0) throw std::invalid_argument("omega: must be >= 0");
  const double p_sw = effective_swap_prob(config.swap_prob, config.therm_steps);
  if (p_sw <= 0.0) return {1.0, true};
  const double e = config.step_energy;
  const double exponent = -2.0 * omega * omega * p_sw * p_sw / (config.num_steps * e * e);
  return {std::min(1.0, 2.0 * std::exp(exponent)), false};
}

/// Same tail bound with perfect thermalization (P_sw = 1).
inline double mcdiarmid_bound_quasistatic(const ProtocolConfig &config, double omega) {
  ProtocolConfig perfect = config;
  perfect.swap_prob = 1.0;
  perfect.therm_steps = std::max(1, config.therm_steps);
  return mcdiarmid_bound(perfect, omega).value;
}

/**
 * Spread term of the single-shot bound: (1/P_sw) sqrt(ln(2/eps) / (2N)) E_max.
 * Accepts eps in (0, 2]; eps = 2 gives zero.
 */
inline BoundValue concentration_margin(const ProtocolConfig &config, double fail_prob) {
  config.validate();
  if (!(fail_prob > 0.0 && fail_prob <= 2.0)) throw std::invalid_argument("fail_prob: must lie in (0, 2]");
  const double p_sw = effective_swap_prob(config.swap_prob, config.therm_steps);
  if (p_sw <= 0.0) return {std::numeric_limits<double>::infinity(), true};
  const double root = std::sqrt(std::log(2.0 / fail_prob) / (2.0 * config.num_steps));
  return {root * config.e_max() / p_sw, false};
}

/// Upper bound on the work exceeded with probability at most fail_prob.
inline BoundValue w_max_eps_bound(const ProtocolConfig &config, double fail_prob) {
  if (!(fail_prob > 0.0 && fail_prob < 1.0)) throw std::invalid_argument("fail_prob: must lie in (0, 1)");
  const BoundValue spread = concentration_margin(config, fail_prob);
  if (spread.unbounded) return spread;
  return {average_work_bounds(config).upper + spread.value, false};
}

struct ConcentrationReport {
  double omega = 0.0;
  double bound_quasi = 1.0;
  BoundValue bound_finite;
  double empirical_tail = 0.0;
};

/// Tail bounds at deviation omega next to the two-sided tail of `dist` about its mean.
inline ConcentrationReport concentration_report(const ProtocolConfig &config, const WorkDistribution &dist,
                                                double omega) {
  return {omega, mcdiarmid_bound_quasistatic(config, omega), mcdiarmid_bound(config, omega),
          dist.two_sided_tail(dist.mean(), omega)};
}

}  // namespace bitreset
