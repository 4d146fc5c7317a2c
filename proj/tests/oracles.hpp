// Independent reference computations used only by the tests.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracle {

using Mat2 = std::array<std::array<double, 2>, 2>;  // column-stochastic, acts on (P1, P2)
using Vec2 = std::array<double, 2>;

inline Vec2 gibbs(double gap, double beta) {
  const double z = 1.0 + std::exp(-beta * gap);
  return {1.0 / z, std::exp(-beta * gap) / z};
}

/// M(n) = (1 - p) 1 + p M_th(n), with M_th having the thermal vector in both columns.
inline Mat2 swap_matrix(double gap, double beta, double p) {
  const Vec2 th = gibbs(gap, beta);
  return {{{(1 - p) + p * th[0], p * th[0]}, {p * th[1], (1 - p) + p * th[1]}}};
}

inline Vec2 apply(const Mat2 &m, const Vec2 &v) {
  return {m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]};
}

inline Mat2 multiply(const Mat2 &a, const Mat2 &b) {
  Mat2 c{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) c[i][j] += a[i][k] * b[k][j];
  return c;
}

/// Composite Simpson rule on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)> &f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

/// Occupancy chain of a reset: X_1 ~ initial, X_{n+1} | X_n from one thermalization period at gap n E.
struct Chain {
  double beta;
  double step_energy;
  int num_steps;
  double swap_prob;
  int therm_steps;
  double initial_upper = 0.5;

  // Transition probability computed from the t-fold matrix power, not the closed form.
  [[nodiscard]] double p_next_upper(int n, int x) const {
    Mat2 m{{{1, 0}, {0, 1}}};
    const Mat2 step = swap_matrix(n * step_energy, beta, swap_prob);
    for (int i = 0; i < therm_steps; ++i) m = multiply(step, m);
    return x ? m[1][1] : m[1][0];
  }

  [[nodiscard]] double p_first(int x) const { return x ? initial_upper : 1.0 - initial_upper; }

  /// P(X_1..X_k = prefix), for any prefix length k in 1..N.
  [[nodiscard]] double prefix_probability(const std::vector<int> &prefix) const {
    double prob = p_first(prefix[0]);
    for (std::size_t i = 1; i < prefix.size(); ++i) {
      const double up = p_next_upper(static_cast<int>(i), prefix[i - 1]);
      prob *= prefix[i] ? up : 1.0 - up;
    }
    return prob;
  }

  /// E[sum X_i | X_1..X_k = prefix] * E, by enumerating every continuation.
  [[nodiscard]] double conditional_work(const std::vector<int> &prefix) const {
    const int k = static_cast<int>(prefix.size());
    const int free = num_steps - k;
    double num = 0.0, den = 0.0;
    for (std::uint64_t c = 0; c < (std::uint64_t{1} << free); ++c) {
      std::vector<int> path = prefix;
      for (int i = 0; i < free; ++i) path.push_back(static_cast<int>((c >> i) & 1U));
      const double pr = prefix_probability(path);
      int count = 0;
      for (int x : path) count += x;
      num += pr * count;
      den += pr;
    }
    return step_energy * num / den;
  }

  /// Unconditional law of the work count by enumeration.
  [[nodiscard]] std::vector<double> work_law() const {
    std::vector<double> law(static_cast<std::size_t>(num_steps) + 1, 0.0);
    for (std::uint64_t h = 0; h < (std::uint64_t{1} << num_steps); ++h) {
      std::vector<int> path;
      int count = 0;
      for (int i = 0; i < num_steps; ++i) {
        path.push_back(static_cast<int>((h >> i) & 1U));
        count += path.back();
      }
      law[static_cast<std::size_t>(count)] += prefix_probability(path);
    }
    return law;
  }
};

}  // namespace oracle
