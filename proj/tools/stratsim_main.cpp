// stratsim: run, sweep and verify online strategic classification experiments.
//
//   stratsim run    --config exp.json [--seed S] [--trials K] [--out result.json] [--emit-rounds]
//   stratsim sweep  --config exp.json --axis T --values 256,1024,4096 [--out sweep.csv]
//   stratsim verify [--seed S] [--trials K]
//   stratsim ldim   --config exp.json
//   stratsim build  --config exp.json [--out instance.json]
//
// Exit codes: 0 success, 1 invariant violation or run failure, 2 configuration error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "stratsim/harness.hpp"
#include "stratsim/io.hpp"
#include "stratsim/littlestone.hpp"

namespace {

using namespace stratsim;

constexpr int kExitViolation = 1;
constexpr int kExitConfig = 2;

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::string out;
  bool emit_rounds = false;
};

ExperimentConfig load_config(const Common& common) {
  ExperimentConfig c = config_from_json(load_json(common.config_path));
  if (common.seed) c.seed = *common.seed;
  if (common.trials) c.trials = *common.trials;
  if (!common.out.empty()) c.out = common.out;
  if (common.emit_rounds) c.emit_rounds = true;
  c.validate();
  return c;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

int cmd_run(const Common& common) {
  const auto config = load_config(common);
  const auto set = run_trials(config);
  emit(config.out, trial_set_to_json(config, set).dump(2) + "\n");
  std::cerr << "mistakes mean=" << set.mistakes.mean << " se=" << set.mistakes.se << "  regret mean=" << set.regret.mean
            << " se=" << set.regret.se << "\n";
  if (set.invariants.total_violations() != 0) {
    write_report(std::cerr, set.invariants);
    return kExitViolation;
  }
  return 0;
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("bad sweep value '" + item + "'");
    }
  }
  return values;
}

int cmd_sweep(const Common& common, const std::string& axis, const std::string& values) {
  const auto config = load_config(common);
  const auto rows = sweep(config, axis, parse_values(values));
  std::ostringstream csv;
  write_sweep_csv(csv, axis, rows);
  emit(config.out, csv.str());
  for (const auto& r : rows) {
    if (r.violations != 0) return kExitViolation;
  }
  return 0;
}

int cmd_verify(const Common& common, bool fault) {
  VerifyOptions options;
  if (common.seed) options.seed = *common.seed;
  if (common.trials) options.trials = *common.trials;
  options.inject_stability_fault = fault;
  const auto log = verify_invariants(options);
  std::ostringstream report;
  write_report(report, log);
  report << (log.total_violations() == 0 ? "verify: all checks passed\n" : "verify: violations found\n");
  emit(common.out, report.str());
  return log.total_violations() == 0 ? 0 : kExitViolation;
}

int cmd_ldim(const Common& common) {
  const auto config = load_config(common);
  const auto inst = build_instance(config.instance, config.horizon);
  emit(common.out, std::to_string(ldim(*inst.cls)) + "\n");
  return 0;
}

int cmd_build(const Common& common) {
  const auto config = load_config(common);
  const auto inst = build_instance(config.instance, config.horizon);
  emit(common.out, instance_to_json(inst).dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online strategic classification simulator"};
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* opt = sub->add_option("--config", common.config_path, "Experiment config (JSON)");
    if (needs_config) opt->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", common.seed, "Base seed; trial i uses seed + i");
    sub->add_option("--trials", common.trials, "Number of trials");
    sub->add_option("--out", common.out, "Output path (stdout if omitted)");
  };

  auto* run = app.add_subcommand("run", "Run trials of one configuration");
  add_common(run, true);
  run->add_flag("--emit-rounds", common.emit_rounds, "Include per-round transcripts");

  std::string axis;
  std::string values;
  auto* sw = app.add_subcommand("sweep", "Sweep T, n or d and write CSV");
  add_common(sw, true);
  sw->add_option("--axis", axis, "T, n or d")->required();
  sw->add_option("--values", values, "Comma-separated ascending values")->required();

  bool fault = false;
  auto* verify = app.add_subcommand("verify", "Run the invariant suite");
  add_common(verify, false);
  verify->add_flag("--inject-fault", fault, "Use nu = 1 in the stability probe (should fail)");

  auto* ld = app.add_subcommand("ldim", "Print the Littlestone dimension of the configured class");
  add_common(ld, true);

  auto* build = app.add_subcommand("build", "Write the configured instance as JSON");
  add_common(build, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (run->parsed()) return cmd_run(common);
    if (sw->parsed()) return cmd_sweep(common, axis, values);
    if (verify->parsed()) return cmd_verify(common, fault);
    if (ld->parsed()) return cmd_ldim(common);
    if (build->parsed()) return cmd_build(common);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitViolation;
  }
  return 0;
}
