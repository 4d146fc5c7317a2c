/**
 * @brief Exact single-shot work law of a finite-time reset.
 *
 * A single shot is a sequence of definite occupancies X_1..X_N, X_1 being
 * the initial occupancy and X_{n+1} the occupancy after thermalizing at
 * stage n. Stage n pays X_n * step_energy. Thermalizing for t steps keeps
 * the occupancy with probability (1-p)^t and otherwise redraws it from the
 * Gibbs law at the new gap.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "bitreset/protocol.hpp"

namespace bitreset {

inline constexpr int kDefaultDistributionCap = 20000;
inline constexpr int kBruteForceCap = 20;

/// Probability mass on the lattice {0, E, 2E, ..., N E}; probs[k] = P(W = k E).
struct WorkDistribution {
  double step_energy = 1.0;
  std::vector<double> probs;

  [[nodiscard]] std::size_t size() const { return probs.size(); }
  [[nodiscard]] double work_value(std::size_t k) const { return static_cast<double>(k) * step_energy; }

  [[nodiscard]] double total() const { return std::accumulate(probs.begin(), probs.end(), 0.0); }

  [[nodiscard]] double mean() const {
    double m = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) m += static_cast<double>(k) * probs[k];
    return m * step_energy;
  }

  [[nodiscard]] double variance() const {
    const double mu = mean();
    double v = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
      const double d = work_value(k) - mu;
      v += d * d * probs[k];
    }
    return v;
  }

  /// P(|W - center| >= omega).
  [[nodiscard]] double two_sided_tail(double center, double omega) const {
    double tail = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k)
      if (std::abs(work_value(k) - center) >= omega) tail += probs[k];
    return std::min(tail, 1.0);
  }
};

/// Half the L1 distance; distributions must share the lattice spacing.
inline double total_variation(const WorkDistribution &a, const WorkDistribution &b) {
  const std::size_t n = std::max(a.size(), b.size());
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double pa = k < a.size() ? a.probs[k] : 0.0;
    const double pb = k < b.size() ? b.probs[k] : 0.0;
    s += std::abs(pa - pb);
  }
  return 0.5 * s;
}

struct Trajectory {
  std::vector<std::uint8_t> occupancies;  ///< X_1..X_N, 1 = upper level
  double work = 0.0;

  [[nodiscard]] std::size_t count() const {
    return static_cast<std::size_t>(std::count(occupancies.begin(), occupancies.end(), std::uint8_t{1}));
  }
};

namespace detail {
inline void require_raising(const ProtocolConfig &config, const char *what) {
  if (config.direction != Direction::raise)
    throw std::invalid_argument(std::string(what) + ": only defined for the raising direction");
}

/// Gibbs upper-level probability after stage n, for n = 1..N (index 0 unused).
inline std::vector<double> thermal_uppers(const ProtocolConfig &config) {
  std::vector<double> s(static_cast<std::size_t>(config.num_steps) + 1, 0.5);
  for (int n = 1; n <= config.num_steps; ++n) s[n] = thermal_population(n * config.step_energy, config.beta).p_upper;
  return s;
}
}  // namespace detail

/**
 * Forward dynamic program over (occupancy, accumulated count). O(N^2) time,
 * O(N) memory. Rejects num_steps above `cap`.
 */
inline WorkDistribution exact_work_distribution(const ProtocolConfig &config,
                                                const Occupation &initial = Occupation::maximally_mixed(),
                                                int cap = kDefaultDistributionCap) {
  config.validate();
  initial.validate("initial");
  detail::require_raising(config, "exact_work_distribution");
  if (config.num_steps > cap)
    throw std::invalid_argument("num_steps: " + std::to_string(config.num_steps) + " exceeds the cap of " +
                                std::to_string(cap));
  const auto n_steps = static_cast<std::size_t>(config.num_steps);
  const double q = config.persistence();
  const auto sigma = detail::thermal_uppers(config);

  // lower[k], upper[k]: P(current occupancy, k units of work paid so far)
  std::vector<double> lower(n_steps + 1, 0.0), upper(n_steps + 1, 0.0);
  std::vector<double> next_lower(n_steps + 1), next_upper(n_steps + 1);
  lower[0] = initial.p_lower;
  upper[0] = initial.p_upper;
  for (std::size_t n = 1; n <= n_steps; ++n) {
    const double up = sigma[n];
    const double from_lower_to_upper = (1.0 - q) * up;
    const double from_upper_to_upper = q + (1.0 - q) * up;
    // occupancy during the shift of stage n decides the payment; after the
    // shift the occupancy relaxes at gap n E.
    std::fill(next_lower.begin(), next_lower.begin() + static_cast<std::ptrdiff_t>(n) + 1, 0.0);
    std::fill(next_upper.begin(), next_upper.begin() + static_cast<std::ptrdiff_t>(n) + 1, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      const double pl = lower[k];
      const double pu = upper[k];
      next_lower[k] += pl * (1.0 - from_lower_to_upper);
      next_upper[k] += pl * from_lower_to_upper;
      next_lower[k + 1] += pu * (1.0 - from_upper_to_upper);
      next_upper[k + 1] += pu * from_upper_to_upper;
    }
    lower.swap(next_lower);
    upper.swap(next_upper);
  }
  WorkDistribution dist{config.step_energy, std::vector<double>(n_steps + 1)};
  for (std::size_t k = 0; k <= n_steps; ++k) dist.probs[k] = lower[k] + upper[k];
  return dist;
}

/// Enumerates all 2^(N+1) occupancy histories. Ground-truth oracle; N <= 20.
inline WorkDistribution brute_force_work_distribution(const ProtocolConfig &config,
                                                      const Occupation &initial = Occupation::maximally_mixed()) {
  config.validate();
  initial.validate("initial");
  detail::require_raising(config, "brute_force_work_distribution");
  if (config.num_steps > kBruteForceCap)
    throw std::invalid_argument("num_steps: brute force enumeration is limited to " + std::to_string(kBruteForceCap));
  const int n_steps = config.num_steps;
  const double q = config.persistence();
  const auto sigma = detail::thermal_uppers(config);

  WorkDistribution dist{config.step_energy, std::vector<double>(static_cast<std::size_t>(n_steps) + 1, 0.0)};
  const std::uint64_t histories = std::uint64_t{1} << (n_steps + 1);
  for (std::uint64_t h = 0; h < histories; ++h) {
    // bit i of h is the occupancy X_{i+1}; bit N is the final relaxed occupancy
    int x = static_cast<int>(h & 1U);
    double prob = x ? initial.p_upper : initial.p_lower;
    int count = 0;
    for (int n = 1; n <= n_steps && prob > 0.0; ++n) {
      count += x;
      const int y = static_cast<int>((h >> n) & 1U);
      const double p_up = (x ? q : 0.0) + (1.0 - q) * sigma[n];
      prob *= y ? p_up : 1.0 - p_up;
      x = y;
    }
    dist.probs[static_cast<std::size_t>(count)] += prob;
  }
  return dist;
}

/**
 * Smallest support point w with P(W > w) <= fail_prob.
 */
inline double empirical_w_max_eps(const WorkDistribution &dist, double fail_prob) {
  if (!(fail_prob > 0.0 && fail_prob < 1.0)) throw std::invalid_argument("fail_prob: must lie in (0, 1)");
  if (dist.probs.empty()) throw std::invalid_argument("distribution: empty");
  // scan from the top: exceedance above index k is the mass strictly above k
  double above = 0.0;
  std::size_t k = dist.size() - 1;
  while (k > 0) {
    const double above_next = above + dist.probs[k];
    if (above_next > fail_prob) break;
    above = above_next;
    --k;
  }
  return dist.work_value(k);
}

}  // namespace bitreset
