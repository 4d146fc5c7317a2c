/**
 * @brief Resetting n independent bits.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "bitreset/bounds.hpp"
#include "bitreset/protocol.hpp"
#include "bitreset/sampling.hpp"
#include "bitreset/work_distribution.hpp"

namespace bitreset {

struct MultiBitReport {
  int n_bits = 1;
  double per_bit_fail = 0.0;
  double combined_fail_exact = 0.0;  ///< 1 - (1 - eps)^n
  double combined_fail_bound = 0.0;  ///< min(1, n eps)
  BoundValue total_work_bound;       ///< n W_max^eps
};

inline MultiBitReport multi_bit_bound(int n_bits, const ProtocolConfig &config, double fail_prob) {
  if (n_bits < 1) throw std::invalid_argument("n_bits: must be >= 1");
  if (!(fail_prob > 0.0 && fail_prob < 1.0)) throw std::invalid_argument("fail_prob: must lie in (0, 1)");
  const BoundValue single = w_max_eps_bound(config, fail_prob);
  MultiBitReport r;
  r.n_bits = n_bits;
  r.per_bit_fail = fail_prob;
  r.combined_fail_exact = -std::expm1(n_bits * std::log1p(-fail_prob));
  r.combined_fail_bound = std::min(1.0, n_bits * fail_prob);
  r.total_work_bound = single.unbounded ? single : BoundValue{n_bits * single.value, false};
  return r;
}

/// Worst-case extra average cost over the quasistatic reset: n delta(N) E_max.
inline double average_multibit_excess(int n_bits, const ProtocolConfig &config) {
  if (n_bits < 1) throw std::invalid_argument("n_bits: must be >= 1");
  return n_bits * delta_bound(config.num_steps, config) * config.e_max();
}

inline WorkDistribution convolve(const WorkDistribution &a, const WorkDistribution &b) {
  if (a.step_energy != b.step_energy) throw std::invalid_argument("convolve: lattice spacings differ");
  WorkDistribution out{a.step_energy, std::vector<double>(a.size() + b.size() - 1, 0.0)};
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out.probs[i + j] += a.probs[i] * b.probs[j];
  return out;
}

/// Exact law of the total work of n independent resets.
inline WorkDistribution multi_bit_work_distribution(int n_bits, const ProtocolConfig &config) {
  if (n_bits < 1) throw std::invalid_argument("n_bits: must be >= 1");
  const WorkDistribution single = exact_work_distribution(config);
  WorkDistribution total = single;
  for (int b = 1; b < n_bits; ++b) total = convolve(total, single);
  return total;
}

/**
 * Monte Carlo law of the total work of n independent resets. Bit b of sample
 * s uses stream s * n_bits + b.
 */
inline SampleResult sample_multi_bit_totals(int n_bits, const ProtocolConfig &config, std::uint64_t n_samples,
                                            std::uint64_t seed, unsigned workers = 0) {
  if (n_bits < 1) throw std::invalid_argument("n_bits: must be >= 1");
  if (n_samples < 1) throw std::invalid_argument("samples: must be >= 1");
  const TrajectorySampler sampler(config);
  const std::size_t n_bins = static_cast<std::size_t>(n_bits) * static_cast<std::size_t>(config.num_steps) + 1;
  const unsigned w = worker_count(workers);
  std::vector<std::vector<std::uint64_t>> partial(w, std::vector<std::uint64_t>(n_bins, 0));
  parallel_chunks(n_samples, w, [&](std::uint64_t begin, std::uint64_t end, unsigned slot) {
    for (std::uint64_t s = begin; s < end; ++s) {
      std::size_t total = 0;
      for (int b = 0; b < n_bits; ++b) {
        auto gen = make_stream(seed, s * static_cast<std::uint64_t>(n_bits) + static_cast<std::uint64_t>(b));
        total += sampler.draw(gen);
      }
      ++partial[slot][total];
    }
  });
  SampleResult result;
  result.n_samples = n_samples;
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
