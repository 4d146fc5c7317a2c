/**
 * @brief Doob martingale of the reset work: D(n) = E[W | X_1..X_n].
 */
#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "bitreset/protocol.hpp"
#include "bitreset/work_distribution.hpp"

namespace bitreset {

/**
 * Expected remaining work count after stage n given X_n = x:
 * future[n][x] = E[X_{n+1} + ... + X_N | X_n = x], for n = 1..N.
 */
inline std::vector<std::array<double, 2>> future_work_counts(const ProtocolConfig &config) {
  config.validate();
  detail::require_raising(config, "future_work_counts");
  const auto n_steps = static_cast<std::size_t>(config.num_steps);
  const double q = config.persistence();
  const auto sigma = detail::thermal_uppers(config);
  std::vector<std::array<double, 2>> future(n_steps + 1, {0.0, 0.0});
  for (std::size_t n = n_steps - 1; n >= 1; --n) {
    // X_{n+1} is the occupancy after relaxing at the gap of stage n
    for (int x = 0; x < 2; ++x) {
      const double p_up = (x ? q : 0.0) + (1.0 - q) * sigma[n];
      future[n][x] = p_up * (1.0 + future[n + 1][1]) + (1.0 - p_up) * future[n + 1][0];
    }
  }
  return future;
}

/// D(0..N) along a trajectory. D(0) is the mean work, D(N) the realized work.
inline std::vector<double> doob_sequence(const ProtocolConfig &config, const Trajectory &traj,
                                         const Occupation &initial = Occupation::maximally_mixed()) {
  initial.validate("initial");
  if (traj.occupancies.size() != static_cast<std::size_t>(config.num_steps))
    throw std::invalid_argument("trajectory: expected num_steps occupancies");
  for (auto x : traj.occupancies)
    if (x > 1) throw std::invalid_argument("trajectory: occupancies must be 0 or 1");
  const auto future = future_work_counts(config);
  const double e = config.step_energy;
  std::vector<double> d(traj.occupancies.size() + 1);
  d[0] = e * (initial.p_lower * future[1][0] + initial.p_upper * (1.0 + future[1][1]));
  double paid = 0.0;
  for (std::size_t n = 1; n <= traj.occupancies.size(); ++n) {
    const int x = traj.occupancies[n - 1];
    paid += x;
    d[n] = e * (paid + future[n][x]);
  }
  return d;
}

}  // namespace bitreset
