/**
 * @brief Seeded Monte Carlo sampling of reset trajectories.
 *
 * Trajectory i draws from its own generator, keyed by (seed, i), so the
 * merged result does not depend on the number of workers or the order in
 * which they finish.
 */
#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "bitreset/protocol.hpp"
#include "bitreset/work_distribution.hpp"

namespace bitreset {

/// Environment variable overriding the worker count of parallel sweeps and samplers.
inline constexpr const char *kWorkersEnv = "BITRESET_WORKERS";

inline unsigned worker_count(unsigned requested = 0) {
  if (requested > 0) return requested;
  if (const char *env = std::getenv(kWorkersEnv)) {
    char *end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

/// 64-bit generator seed for stream `index` of a run seeded with `seed`.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over the pair
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

using StreamEngine = std::mt19937_64;

inline StreamEngine make_stream(std::uint64_t seed, std::uint64_t index) {
  return StreamEngine{stream_seed(seed, index)};
}

/// Precomputed per-stage transition data of the occupancy chain.
class TrajectorySampler {
 public:
  explicit TrajectorySampler(const ProtocolConfig &config, const Occupation &initial = Occupation::maximally_mixed())
      : config_(config), initial_upper_(initial.p_upper) {
    config.validate();
    initial.validate("initial");
    detail::require_raising(config, "sample_trajectories");
    swap_ = 1.0 - config.persistence();
    sigma_ = detail::thermal_uppers(config);
  }

  /// Draws one trajectory and returns its work count; fills `occupancies` when non-null.
  template <class Engine>
  std::size_t draw(Engine &gen, std::vector<std::uint8_t> *occupancies = nullptr) const {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int x = unit(gen) < initial_upper_ ? 1 : 0;
    std::size_t count = 0;
    if (occupancies) occupancies->assign(static_cast<std::size_t>(config_.num_steps), 0);
    for (int n = 1; n <= config_.num_steps; ++n) {
      if (occupancies) (*occupancies)[static_cast<std::size_t>(n - 1)] = static_cast<std::uint8_t>(x);
      count += static_cast<std::size_t>(x);
      if (swap_ > 0.0 && unit(gen) < swap_) x = unit(gen) < sigma_[static_cast<std::size_t>(n)] ? 1 : 0;
    }
    return count;
  }

  [[nodiscard]] const ProtocolConfig &config() const { return config_; }

 private:
  ProtocolConfig config_;
  double initial_upper_;
  double swap_ = 1.0;
  std::vector<double> sigma_;
};

struct SampleOptions {
  std::size_t keep_trajectories = 0;  ///< store the first k trajectories
  unsigned workers = 0;               ///< 0: environment or hardware default
};

struct SampleResult {
  WorkDistribution distribution;      ///< empirical frequencies
  std::vector<std::uint64_t> counts;  ///< counts[k] = #samples with W = k E
  std::vector<Trajectory> trajectories;
  std::uint64_t n_samples = 0;
};

/// Runs `body(begin, end, slot)` over [0, n) split into contiguous chunks.
template <class Body>
void parallel_chunks(std::uint64_t n, unsigned workers, Body &&body) {
  workers = static_cast<unsigned>(std::min<std::uint64_t>(std::max(1U, workers), std::max<std::uint64_t>(n, 1)));
  if (workers == 1) {
    body(std::uint64_t{0}, n, 0U);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::uint64_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t begin = std::min(n, w * chunk);
    const std::uint64_t end = std::min(n, begin + chunk);
    pool.emplace_back([&body, begin, end, w] { body(begin, end, w); });
  }
  for (auto &t : pool) t.join();
}

inline SampleResult sample_trajectories(const ProtocolConfig &config, std::uint64_t n_samples, std::uint64_t seed,
                                        const SampleOptions &options = {},
                                        const Occupation &initial = Occupation::maximally_mixed()) {
  if (n_samples < 1) throw std::invalid_argument("samples: must be >= 1");
  const TrajectorySampler sampler(config, initial);
  const auto n_bins = static_cast<std::size_t>(config.num_steps) + 1;
  const unsigned workers = worker_count(options.workers);
  const std::size_t keep = static_cast<std::size_t>(std::min<std::uint64_t>(options.keep_trajectories, n_samples));

  SampleResult result;
  result.n_samples = n_samples;
  result.trajectories.resize(keep);
  std::vector<std::vector<std::uint64_t>> partial(workers, std::vector<std::uint64_t>(n_bins, 0));

  parallel_chunks(n_samples, workers, [&](std::uint64_t begin, std::uint64_t end, unsigned slot) {
    auto &local = partial[slot];
    for (std::uint64_t i = begin; i < end; ++i) {
      auto gen = make_stream(seed, i);
      if (i < keep) {
        Trajectory &traj = result.trajectories[static_cast<std::size_t>(i)];
        const std::size_t c = sampler.draw(gen, &traj.occupancies);
        traj.work = static_cast<double>(c) * config.step_energy;
        ++local[c];
      } else {
        ++local[sampler.draw(gen)];
      }
    }
  });

  result.counts.assign(n_bins, 0);
  for (const auto &local : partial)
    for (std::size_t k = 0; k < n_bins; ++k) result.counts[k] += local[k];
  result.distribution.step_energy = config.step_energy;
  result.distribution.probs.resize(n_bins);
  for (std::size_t k = 0; k < n_bins; ++k)
    result.distribution.probs[k] = static_cast<double>(result.counts[k]) / static_cast<double>(n_samples);
  return result;
}

}  // namespace bitreset
