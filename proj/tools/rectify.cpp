// rectify: rule-based data repair over CSV files. Discovers matching
// rectifying rules from dirty data and its functional dependencies, resolves
// rule conflicts, and applies the consistent set to detect and fix
// cell-level errors.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rectify/consistency.hpp"
#include "rectify/core.hpp"
#include "rectify/discovery.hpp"
#include "rectify/eval.hpp"
#include "rectify/io.hpp"
#include "rectify/noise.hpp"
#include "rectify/repair.hpp"
#include "rectify/rule_io.hpp"

namespace {

struct CommonOptions {
  double theta = 0.6;
  double sim_threshold = 2.0;
  double num_threshold = -1.0;  // negative: relative default
  std::uint64_t seed = 42;
  double noise_rate = 0.10;
  double typo_rate = 0.5;
  std::string fds_path;
  std::string rules_path;
  std::string out_path;
};

rectify::Thresholds thresholds_of(const CommonOptions& o) {
  rectify::Thresholds th;
  th.string_threshold = o.sim_threshold;
  if (o.num_threshold >= 0) th.numeric_threshold = o.num_threshold;
  th.validate();
  return th;
}

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--theta", o.theta, "rule adoption threshold on w1")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--sim-threshold", o.sim_threshold, "string similarity threshold (edit distance)");
  cmd->add_option("--num-threshold", o.num_threshold,
                  "absolute numeric similarity threshold (default: 0.001 of the pattern value)");
  cmd->add_option("--seed", o.seed, "random seed");
  cmd->add_option("--noise-rate", o.noise_rate, "fraction of fd-covered cells to corrupt")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--typo-rate", o.typo_rate, "corrupted cells that receive a typo")
      ->check(CLI::Range(0.0, 1.0));
}

void write_or_print(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    rectify::detail::write_file(out_path, content);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rectify: discover matching rectifying rules from dirty data and repair it"};
  app.require_subcommand(1);

  CommonOptions o;

  std::string data_path, clean_path, dirty_path, log_path, report_path;
  std::string sweep = "typo-rate";
  std::string sweep_values;

  auto* discover = app.add_subcommand("discover", "discover rules from a CSV and its fds");
  add_common(discover, o);
  discover->add_option("data", data_path, "input CSV")->required();
  discover->add_option("--fds", o.fds_path, "fd spec file")->required();
  discover->add_option("--out", o.out_path, "rule file to write (stdout when omitted)");

  auto* check = app.add_subcommand("check", "resolve rule inconsistencies");
  add_common(check, o);
  check->add_option("--rules", o.rules_path, "rule file to check")->required();
  check->add_option("--out", o.out_path, "consistent rule file to write (stdout when omitted)");
  check->add_option("--log", log_path, "resolution log file (stderr when omitted)");

  auto* repair = app.add_subcommand("repair", "repair a CSV with a consistent rule file");
  add_common(repair, o);
  repair->add_option("data", data_path, "input CSV")->required();
  repair->add_option("--rules", o.rules_path, "rule file")->required();
  repair->add_option("--fds", o.fds_path, "fd spec file")->required();
  repair->add_option("--out", o.out_path, "repaired CSV to write (stdout when omitted)");
  repair->add_option("--report", report_path, "per-cell repair report file");

  auto* inject = app.add_subcommand("inject-noise", "corrupt a clean CSV for benchmarking");
  add_common(inject, o);
  inject->add_option("data", data_path, "clean input CSV")->required();
  inject->add_option("--fds", o.fds_path, "fd spec file (fixes the target attributes)")->required();
  inject->add_option("--out", o.out_path, "dirty CSV to write (stdout when omitted)");
  inject->add_option("--log", log_path, "error log CSV file");

  auto* evaluate = app.add_subcommand("evaluate", "score a repair against ground truth");
  add_common(evaluate, o);
  evaluate->add_option("repaired", data_path, "repaired CSV")->required();
  evaluate->add_option("--dirty", dirty_path, "dirty CSV")->required();
  evaluate->add_option("--clean", clean_path, "clean CSV (ground truth)")->required();

  auto* experiment = app.add_subcommand("experiment", "sweep a parameter over the full pipeline");
  add_common(experiment, o);
  experiment->add_option("data", data_path, "clean input CSV")->required();
  experiment->add_option("--fds", o.fds_path, "fd spec file")->required();
  experiment->add_option("--sweep", sweep, "typo-rate or theta")
      ->check(CLI::IsMember({"typo-rate", "theta"}));
  experiment->add_option("--values", sweep_values, "comma-separated sweep points");
  experiment->add_option("--out", o.out_path, "report file to write (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    const rectify::Thresholds th = thresholds_of(o);

    if (discover->parsed()) {
      const auto data = rectify::load_csv(data_path);
      const auto fds = rectify::parse_fd_file(o.fds_path, data.schema);
      const auto rules = rectify::discover_rules(data, fds, o.theta);
      write_or_print(o.out_path, rectify::serialize_rules(rules, data.schema));
      std::cerr << "discovered " << rules.size() << " rule(s)\n";
    } else if (check->parsed()) {
      auto [rules, schema] = rectify::deserialize_rules_with_schema(
          rectify::detail::read_file(o.rules_path));
      auto resolved = rectify::resolve_inconsistency(std::move(rules), th);
      write_or_print(o.out_path, rectify::serialize_rules(resolved.rules, schema));
      const std::string log = rectify::render_resolution_log(resolved.log);
      if (log_path.empty()) {
        std::cerr << log;
      } else {
        rectify::detail::write_file(log_path, log);
      }
      std::cerr << "kept " << resolved.rules.size() << " rule(s), removed " << resolved.log.size()
                << "\n";
    } else if (repair->parsed()) {
      const auto data = rectify::load_csv(data_path);
      const auto fds = rectify::parse_fd_file(o.fds_path, data.schema);
      const auto rules =
          rectify::deserialize_rules(rectify::detail::read_file(o.rules_path), data.schema);
      auto [repaired, rep] = rectify::repair_dataset(data, rules, fds, th);
      write_or_print(o.out_path, rectify::render_csv(repaired));
      if (!report_path.empty())
        rectify::detail::write_file(report_path, rectify::render_repair_report(rep, data.schema));
      std::cerr << "rectified=" << rep.rectified << " verified=" << rep.verified << "\n";
    } else if (inject->parsed()) {
      const auto data = rectify::load_csv(data_path);
      const auto fds = rectify::parse_fd_file(o.fds_path, data.schema);
      rectify::NoiseSpec spec;
      spec.noise_rate = o.noise_rate;
      spec.typo_rate = o.typo_rate;
      spec.seed = o.seed;
      spec.target_attributes = rectify::fd_attributes(fds);
      const auto noisy = rectify::inject_noise(data, spec);
      write_or_print(o.out_path, rectify::render_csv(noisy.dirty));
      if (!log_path.empty()) {
        std::string log = "tuple,attribute,clean,dirty,kind\n";
        for (const auto& e : noisy.log) {
          log += std::to_string(e.tuple_id) + "," + data.schema.at(e.attribute).name + ",";
          rectify::detail::write_csv_field(log, e.clean_value.text());
          log += ",";
          rectify::detail::write_csv_field(log, e.dirty_value.text());
          log += std::string(",") + (e.kind == rectify::NoiseKind::Typo ? "typo" : "active-domain") + "\n";
        }
        rectify::detail::write_file(log_path, log);
      }
      std::cerr << "corrupted " << noisy.log.size() << " cell(s)\n";
    } else if (evaluate->parsed()) {
      const auto repaired = rectify::load_csv(data_path);
      const auto dirty = rectify::load_csv(dirty_path);
      const auto clean = rectify::load_csv(clean_path);
      const auto m = rectify::evaluate(repaired, dirty, clean);
      char line[160];
      std::snprintf(line, sizeof(line), "precision=%.3f recall=%.3f f-measure=%.3f repairs=%d%s\n",
                    m.precision, m.recall, m.f_measure, m.repair_count,
                    m.vacuous_precision ? " (no repairs; precision is vacuous)" : "");
      std::cout << line;
    } else if (experiment->parsed()) {
      rectify::ExperimentConfig config;
      config.clean = rectify::load_csv(data_path);
      config.fds = rectify::parse_fd_file(o.fds_path, config.clean.schema);
      config.theta = o.theta;
      config.thresholds = th;
      config.noise.noise_rate = o.noise_rate;
      config.noise.typo_rate = o.typo_rate;
      config.noise.seed = o.seed;
      config.noise.target_attributes = rectify::fd_attributes(config.fds);
      config.sweep = sweep == "theta" ? rectify::SweepKind::Theta : rectify::SweepKind::TypoRate;
      if (!sweep_values.empty()) {
        std::istringstream parts(sweep_values);
        std::string v;
        while (std::getline(parts, v, ',')) config.values.push_back(std::stod(v));
      } else if (config.sweep == rectify::SweepKind::Theta) {
        config.values = {0.9, 0.8, 0.7, 0.6};
      } else {
        for (int i = 0; i <= 10; ++i) config.values.push_back(i / 10.0);
      }
      const auto rows = rectify::run_experiment(config);
      write_or_print(o.out_path,
                     rectify::render_experiment_report(rows, config.sweep, /*include_timings=*/false));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
