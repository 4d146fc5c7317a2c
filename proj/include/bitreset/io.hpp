/**
 * @brief CSV and JSON serialization.
 *
 * Numbers are written with std::to_chars (no locale), 17 significant digits.
 */
#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <system_error>

#include <json.hpp>

#include "bitreset/bounds.hpp"
#include "bitreset/engine.hpp"
#include "bitreset/multibit.hpp"
#include "bitreset/protocol.hpp"
#include "bitreset/work_distribution.hpp"

namespace bitreset {

using json = nlohmann::json;

inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  if (res.ec != std::errc{}) throw std::runtime_error("format_number: conversion failed");
  return {buf, res.ptr};
}

/// JSON number, or null for NaN and infinities.
inline json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json bound_json(const BoundValue &b) {
  return {{"value", number_or_null(b.value)}, {"unbounded", b.unbounded}};
}

/// Columns: work_value, probability.
inline void write_distribution_csv(std::ostream &os, const WorkDistribution &dist) {
  os << "work_value,probability\n";
  for (std::size_t k = 0; k < dist.size(); ++k)
    os << format_number(dist.work_value(k)) << ',' << format_number(dist.probs[k]) << '\n';
}

inline json distribution_json(const WorkDistribution &dist) {
  json values = json::array(), probs = json::array();
  for (std::size_t k = 0; k < dist.size(); ++k) {
    values.push_back(dist.work_value(k));
    probs.push_back(dist.probs[k]);
  }
  return {{"step_energy", dist.step_energy}, {"work_value", values}, {"probability", probs}};
}

inline json protocol_json(const ProtocolConfig &c) {
  return {{"beta", c.beta},
          {"step_energy", c.step_energy},
          {"num_steps", c.num_steps},
          {"swap_prob", c.swap_prob},
          {"therm_steps", c.therm_steps},
          {"direction", std::string(to_string(c.direction))},
          {"e_max", c.e_max()}};
}

inline json engine_config_json(const EngineConfig &c) {
  return {{"t_cold", c.t_cold},           {"t_hot", c.t_hot},
          {"e_max", c.e_max},             {"num_steps", c.num_steps},
          {"swap_prob", c.swap_prob},     {"therm_steps", c.therm_steps},
          {"step_energy", c.step_energy()}};
}

inline std::string temperature_text(const EffectiveTemperature &t) {
  switch (t.kind) {
    case TemperatureKind::infinite: return "inf";
    case TemperatureKind::ground: return "0";
    case TemperatureKind::finite: break;
  }
  return format_number(t.value);
}

/**
 * Two rows per stage: the state right after the level shift (phase "shift",
 * carrying the stage work) and after thermalization (phase "relax", work 0).
 */
inline void write_cycle_csv(std::ostream &os, const CycleReport &report) {
  os << "stage,half,gap,p_upper,work,T_eff,entropy_bits,phase\n";
  for (const auto &s : report.stages) {
    const auto row = [&](const CycleSnapshot &snap, double work, const char *phase) {
      os << s.stage << ',' << to_string(s.half) << ',' << format_number(s.gap) << ','
         << format_number(snap.state.p_upper) << ',' << format_number(work) << ','
         << temperature_text(snap.temperature) << ',' << format_number(snap.entropy_bits) << ',' << phase << '\n';
    };
    row(s.after_shift, s.work, "shift");
    row(s.after_relax, 0.0, "relax");
  }
}

inline json multibit_json(const MultiBitReport &r) {
  return {{"n_bits", r.n_bits},
          {"per_bit_fail", r.per_bit_fail},
          {"combined_fail_exact", r.combined_fail_exact},
          {"combined_fail_bound", r.combined_fail_bound},
          {"total_work_bound", bound_json(r.total_work_bound)}};
}

inline std::ofstream open_output(const std::string &path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  return out;
}

inline void check_written(std::ostream &os, const std::string &path) {
  os.flush();
  if (!os) throw std::runtime_error("failed writing output file '" + path + "'");
}

}  // namespace bitreset
