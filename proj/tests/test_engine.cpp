#include "bitreset/engine.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <gtest/gtest.h>

#include "bitreset/bounds.hpp"

namespace {

using bitreset::CycleMode;
using bitreset::EngineConfig;
using bitreset::Occupation;
using bitreset::TemperatureKind;

constexpr double kTol = 1e-12;

EngineConfig engine(double tc, double th, double e_max, int n, double p, int t) { return {tc, th, e_max, n, p, t}; }

TEST(EffectiveTemperature, Examples) {
  const auto th = bitreset::thermal_population(0.7, 1.0 / 0.4);
  const auto t = bitreset::effective_temperature(th, 0.7);
  EXPECT_EQ(t.kind, TemperatureKind::finite);
  EXPECT_NEAR(t.value, 0.4, kTol);
  EXPECT_EQ(bitreset::effective_temperature({0.5, 0.5}, 1.0).kind, TemperatureKind::infinite);
  EXPECT_LT(bitreset::effective_temperature({0.3, 0.7}, 1.0).value, 0.0);
  EXPECT_EQ(bitreset::effective_temperature({1.0, 0.0}, 1.0).kind, TemperatureKind::ground);
  EXPECT_THROW(bitreset::effective_temperature({0.5, 0.5}, 0.0), std::invalid_argument);
}

TEST(StateEntropy, Examples) {
  EXPECT_DOUBLE_EQ(bitreset::state_entropy({0.5, 0.5}), 1.0);
  EXPECT_EQ(bitreset::state_entropy({1.0, 0.0}), 0.0);
  EXPECT_NEAR(bitreset::state_entropy({0.75, 0.25}), 2.0 - 0.75 * std::log2(3.0), kTol);
}

TEST(Cycle, NoThermalizationIsFree) {
  const auto r = bitreset::run_cycle(engine(0.3, 1.0, 5.0, 50, 0.6, 0), CycleMode::limit_cycle);
  EXPECT_EQ(r.net_work, 0.0);
  EXPECT_EQ(r.duration, 0);
  EXPECT_TRUE(std::isnan(r.power));
}

TEST(Cycle, SingleTemperatureCostsAtMostOneStep) {
  const auto cfg = engine(1.0, 1.0, 8.0, 2000, 1.0, 1);
  const auto r = bitreset::run_cycle(cfg, CycleMode::limit_cycle);
  EXPECT_GE(r.net_work, -kTol);
  EXPECT_LE(r.net_work, cfg.step_energy());
}

TEST(Cycle, HotterExtractionBeatsItsBound) {
  const auto cfg = engine(1.0, 2.0, 5.0, 500, 0.5, 3);
  const auto r = bitreset::run_cycle(cfg, CycleMode::limit_cycle);
  EXPECT_TRUE(r.converged);
  EXPECT_LT(r.net_work, 0.0);
  EXPECT_LE(r.net_work, bitreset::net_work_bound(cfg) + cfg.step_energy());
}

TEST(Cycle, ReportInvariants) {
  const auto cfg = engine(0.4, 1.0, 5.0, 120, 0.7, 2);
  for (auto mode : {CycleMode::first_cycle, CycleMode::limit_cycle}) {
    const auto r = bitreset::run_cycle(cfg, mode);
    ASSERT_EQ(r.stages.size(), 240U);
    double sum = 0.0;
    for (const auto &s : r.stages) sum += s.work;
    EXPECT_NEAR(r.net_work, sum, 1e-10);
    EXPECT_NEAR(r.net_work, r.reset_work + r.extract_work, 1e-12);
    EXPECT_EQ(r.duration, 2LL * 120 * 2);
    EXPECT_DOUBLE_EQ(r.power, r.net_work / 480.0);
    EXPECT_DOUBLE_EQ(r.efficiency, -r.net_work / std::numbers::ln2);
    EXPECT_EQ(r.stages.front().gap, cfg.step_energy());
    EXPECT_EQ(r.stages.back().gap, 0.0);
  }
}

TEST(Cycle, LimitCycleIsPeriodic) {
  const auto r = bitreset::run_cycle(engine(0.2, 1.0, 5.0, 100, 0.3, 1), CycleMode::limit_cycle);
  EXPECT_TRUE(r.converged);
  EXPECT_LT(std::abs(r.end.p_upper - r.start.p_upper), 1e-12);
}

TEST(Cycle, NonConvergenceCarriesResidual) {
  try {
    bitreset::run_cycle(engine(0.2, 1.0, 5.0, 20, 0.01, 1), CycleMode::limit_cycle, 2);
    FAIL();
  } catch (const bitreset::CycleNotConverged &e) {
    EXPECT_GT(e.residual(), 0.0);
  }
}

TEST(Cycle, ResetSawTooth) {
  // after each raise the bit is hotter than the cold bath, and relaxation moves it back down
  for (double p : {0.2, 0.6, 1.0})
    for (int t : {1, 4}) {
      const auto cfg = engine(0.3, 1.0, 5.0, 80, p, t);
      const auto r = bitreset::run_cycle(cfg, CycleMode::first_cycle);
      for (const auto &s : r.stages) {
        if (s.half != bitreset::Half::reset) continue;
        const auto &shift = s.after_shift.temperature;
        const auto &relax = s.after_relax.temperature;
        ASSERT_NE(relax.kind, TemperatureKind::ground);
        EXPECT_GE(relax.value, cfg.t_cold - 1e-9);
        if (shift.kind == TemperatureKind::finite) {
          EXPECT_LE(relax.value, shift.value + 1e-9);
        }
        EXPECT_LE(s.after_relax.entropy_bits, s.after_shift.entropy_bits + kTol);
      }
    }
}

TEST(NetWorkBound, Limits) {
  const auto slow = engine(0.3, 1.0, 5.0, 100, 0.5, 200);
  EXPECT_NEAR(bitreset::net_work_bound(slow), bitreset::quasistatic_net_work(slow), kTol);
  const auto frozen = engine(0.3, 1.0, 5.0, 100, 0.5, 0);
  EXPECT_DOUBLE_EQ(bitreset::net_work_bound(frozen), 5.0);
  // one bath: quasistatic net work tends to zero for a large gap
  EXPECT_NEAR(bitreset::quasistatic_net_work(engine(1.0, 1.0, 60.0, 10, 1.0, 1)), 0.0, 1e-12);
}

TEST(NetWorkBound, QuasistaticIsSumOfSingleBathWorks) {
  const auto cfg = engine(0.35, 1.2, 3.0, 10, 1.0, 1);
  const double reset = bitreset::quasistatic_work(cfg.e_max, 1.0 / cfg.t_cold);
  const double extract = -bitreset::quasistatic_work(cfg.e_max, 1.0 / cfg.t_hot);
  EXPECT_NEAR(bitreset::quasistatic_net_work(cfg), reset + extract, kTol);
}

TEST(PowerBound, Examples) {
  const auto cfg = engine(0.3, 1.0, 5.0, 50, 0.5, 4);
  EXPECT_NEAR(bitreset::power_bound(cfg), bitreset::net_work_bound(cfg) / 400.0, kTol);
  EXPECT_THROW(bitreset::power_bound(engine(0.3, 1.0, 5.0, 50, 0.5, 0)), std::invalid_argument);
  EXPECT_NEAR(bitreset::power_bound(engine(0.3, 1.0, 5.0, 50, 0.5, 400)), 0.0, 1e-3);
}

TEST(Threshold, LimitsAndErrors) {
  EXPECT_THROW(bitreset::min_time_positive_output(engine(1.0, 1.0, 5.0, 10, 0.5, 1)), bitreset::NoEngineRegime);
  EXPECT_EQ(bitreset::min_time_positive_output(engine(0.1, 1.0, 5.0, 10, 1.0, 1)), 0.0);
  EXPECT_TRUE(std::isinf(bitreset::min_time_positive_output(engine(0.1, 1.0, 5.0, 10, 0.0, 1))));
}

TEST(EfficiencyBounds, Limits) {
  const auto big = bitreset::efficiency_bounds(engine(0.3, 1.0, 200.0, 10, 0.5, 1));
  EXPECT_NEAR(big.eta_quasi, 0.7, kTol);
  EXPECT_EQ(bitreset::efficiency_bounds(engine(1.0, 1.0, 5.0, 10, 0.5, 1)).eta_carnot, 0.0);
  const auto slow = bitreset::efficiency_bounds(engine(0.3, 1.0, 5.0, 10, 0.5, 100));
  EXPECT_NEAR(slow.eta_lower, slow.eta_quasi, 1e-12);
}

TEST(EngineConfig, Validation) {
  EXPECT_THROW(engine(1.0, 0.5, 5.0, 10, 0.5, 1).validate(), std::invalid_argument);
  EXPECT_THROW(engine(0.0, 1.0, 5.0, 10, 0.5, 1).validate(), std::invalid_argument);
  EXPECT_THROW(engine(0.5, 1.0, -5.0, 10, 0.5, 1).validate(), std::invalid_argument);
  EXPECT_THROW(bitreset::parse_cycle_mode("steady"), std::invalid_argument);
}

// ---- properties -----------------------------------------------------------

TEST(EngineProperties, GridRespectsEveryBound) {
  for (double ratio : {0.2, 0.5, 0.9})
    for (double p : {0.3, 0.7, 1.0})
      for (int t : {1, 3, 10})
        for (int n : {100, 1000}) {
          const auto cfg = engine(ratio, 1.0, 5.0, n, p, t);
          const auto r = bitreset::run_cycle(cfg, CycleMode::limit_cycle);
          const double e = cfg.step_energy();
          EXPECT_LE(r.net_work, bitreset::net_work_bound(cfg) + e);
          EXPECT_LE(r.power, bitreset::power_bound(cfg) + e / static_cast<double>(r.duration));
          const auto eta = bitreset::efficiency_bounds(cfg);
          const double margin = e / std::numbers::ln2;
          EXPECT_GE(r.efficiency, eta.eta_lower - margin);
          EXPECT_LE(r.efficiency, eta.eta_upper + margin);
          const double identity =
              eta.eta_quasi - eta.eta_carnot +
              (std::log1p(std::exp(-5.0)) - ratio * std::log1p(std::exp(-5.0 / ratio))) / std::numbers::ln2;
          EXPECT_NEAR(identity, 0.0, 1e-12);
        }
}

TEST(EngineProperties, BoundSignFlipsAtThreshold) {
  for (double ratio : {0.1, 0.3, 0.6})
    for (double p : {0.05, 0.2, 0.5, 0.9}) {
      auto cfg = engine(ratio, 1.0, 5.0, 100, p, 1);
      if (bitreset::quasistatic_net_work(cfg) >= 0.0) continue;
      const double threshold = bitreset::min_time_positive_output(cfg);
      for (int t = 0; t <= 200; ++t) {
        cfg.therm_steps = t;
        const bool negative = bitreset::net_work_bound(cfg) < 0.0;
        EXPECT_EQ(negative, t > threshold) << "ratio=" << ratio << " p=" << p << " t=" << t;
      }
    }
}

TEST(EngineProperties, SweepPowerPeaksAndEfficiencyRises) {
  // a slow bath: at larger p the best integer time is already t = 1
  auto cfg = engine(0.2, 1.0, 5.0, 100, 0.05, 1);
  std::vector<double> power, efficiency;
  for (int t = 1; t <= 20; ++t) {
    cfg.therm_steps = t;
    const auto r = bitreset::run_cycle(cfg, CycleMode::limit_cycle);
    power.push_back(-r.power);
    efficiency.push_back(r.efficiency);
  }
  const auto peak = std::max_element(power.begin(), power.end()) - power.begin();
  EXPECT_GT(peak, 0);
  EXPECT_LT(peak, 19);
  for (std::size_t i = 1; i < efficiency.size(); ++i) EXPECT_GE(efficiency[i], efficiency[i - 1]);
}

}  // namespace
