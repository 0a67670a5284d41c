#pragma once

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "rectify/consistency.hpp"
#include "rectify/core.hpp"
#include "rectify/discovery.hpp"
#include "rectify/noise.hpp"
#include "rectify/repair.hpp"

namespace rectify {

struct Misaligned : Error { using Error::Error; };

struct Metrics {
  double precision = 1.0;
  double recall = 1.0;
  double f_measure = 0.0;
  int repair_count = 0;   // cells where repaired differs from dirty
  int correct_count = 0;  // of those, cells restored to the clean value
  int wrong_count = 0;    // cells where dirty differs from clean
  bool vacuous_precision = false;  // no repairs were made at all
};

inline double f_measure(double precision, double recall) {
  const double denom = precision + recall;
  return denom > 0 ? 2.0 * precision * recall / denom : 0.0;
}

/// Cell-level accuracy of a repair against ground truth. Rectified cells are
/// those the repair changed; a rectification is correct when it lands on the
/// clean value. Zero rectifications give precision 1 (flagged as vacuous),
/// zero injected errors give recall 1.
inline Metrics evaluate(const Dataset& repaired, const Dataset& dirty, const Dataset& clean) {
  if (repaired.schema != dirty.schema || dirty.schema != clean.schema)
    throw Misaligned("schemas differ");
  if (repaired.tuples.size() != dirty.tuples.size() || dirty.tuples.size() != clean.tuples.size())
    throw Misaligned("tuple counts differ");

  Metrics m;
  for (std::size_t i = 0; i < clean.tuples.size(); ++i) {
    const Tuple& r = repaired.tuples[i];
    const Tuple& d = dirty.tuples[i];
    const Tuple& c = clean.tuples[i];
    if (r.tuple_id != d.tuple_id || d.tuple_id != c.tuple_id)
      throw Misaligned("tuple ids differ at row " + std::to_string(i));
    for (int a = 0; a < clean.schema.arity(); ++a) {
      const CellValue& rv = r.at(a);
      const CellValue& dv = d.at(a);
      const CellValue& cv = c.at(a);
      if (dv != cv) ++m.wrong_count;
      if (rv != dv) {
        ++m.repair_count;
        if (rv == cv) ++m.correct_count;
      }
    }
  }
  m.vacuous_precision = m.repair_count == 0;
  m.precision = m.repair_count > 0
                    ? static_cast<double>(m.correct_count) / static_cast<double>(m.repair_count)
                    : 1.0;
  m.recall = m.wrong_count > 0
                 ? static_cast<double>(m.correct_count) / static_cast<double>(m.wrong_count)
                 : 1.0;
  m.f_measure = f_measure(m.precision, m.recall);
  return m;
}

enum class SweepKind { TypoRate, Theta };

struct ExperimentConfig {
  Dataset clean;
  std::vector<FunctionalDependency> fds;
  double theta = 0.6;
  Thresholds thresholds;
  NoiseSpec noise;               // typo_rate is overridden per point in a typo-rate sweep
  SweepKind sweep = SweepKind::TypoRate;
  std::vector<double> values;    // sweep points
};

struct ExperimentRow {
  double value = 0;
  int discovered_rules = 0;
  int consistent_rules = 0;
  int repair_count = 0;
  Metrics metrics;
  double discover_ms = 0;
  double resolve_ms = 0;
  double repair_ms = 0;
};

namespace detail {

inline double ms_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace detail

/// One full pipeline run per sweep point: inject, discover, resolve, repair,
/// evaluate. A theta sweep keeps one fixed dirty instance; a typo-rate sweep
/// re-injects at each point with the same seed.
inline std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config) {
  std::vector<ExperimentRow> rows;
  const auto fds = validate_fds(config.clean.schema, config.fds);

  NoisyData fixed;
  if (config.sweep == SweepKind::Theta) fixed = inject_noise(config.clean, config.noise);

  for (const double value : config.values) {
    ExperimentRow row;
    row.value = value;

    const NoisyData* noisy = &fixed;
    NoisyData local;
    double theta = config.theta;
    if (config.sweep == SweepKind::TypoRate) {
      NoiseSpec spec = config.noise;
      spec.typo_rate = value;
      local = inject_noise(config.clean, spec);
      noisy = &local;
    } else {
      theta = value;
    }

    auto t0 = std::chrono::steady_clock::now();
    auto rules = discover_rules(noisy->dirty, fds, theta);
    row.discover_ms = detail::ms_since(t0);
    row.discovered_rules = static_cast<int>(rules.size());

    t0 = std::chrono::steady_clock::now();
    auto resolved = resolve_inconsistency(std::move(rules), config.thresholds);
    row.resolve_ms = detail::ms_since(t0);
    row.consistent_rules = static_cast<int>(resolved.rules.size());

    t0 = std::chrono::steady_clock::now();
    auto [repaired, report] = repair_dataset(noisy->dirty, resolved.rules, fds, config.thresholds);
    row.repair_ms = detail::ms_since(t0);
    row.repair_count = report.rectified;

    row.metrics = evaluate(repaired, noisy->dirty, config.clean);
    rows.push_back(row);
  }
  return rows;
}

/// Tab-separated sweep report with a header row, one row per sweep point.
/// Timing columns are optional so reports stay byte-identical across runs.
inline std::string render_experiment_report(const std::vector<ExperimentRow>& rows, SweepKind sweep,
                                             bool include_timings = true) {
  std::string out = sweep == SweepKind::Theta ? "theta" : "typo_rate";
  out += "\trules\tconsistent\trepairs\tprecision\trecall\tf_measure";
  if (include_timings) out += "\tdiscover_ms\tresolve_ms\trepair_ms";
  out += "\n";
  char line[256];
  for (const auto& r : rows) {
    std::snprintf(line, sizeof(line), "%g\t%d\t%d\t%d\t%.6f\t%.6f\t%.6f",
                  r.value, r.discovered_rules, r.consistent_rules, r.repair_count,
                  r.metrics.precision, r.metrics.recall, r.metrics.f_measure);
    out += line;
    if (include_timings) {
      std::snprintf(line, sizeof(line), "\t%.3f\t%.3f\t%.3f", r.discover_ms, r.resolve_ms,
                    r.repair_ms);
      out += line;
    }
    out += "\n";
  }
  return out;
}

}  // namespace rectify
