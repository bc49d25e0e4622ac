// l1conc: Monte Carlo checks of l1 concentration bounds for empirical
// multinomial distributions.
//
//   l1conc falsify --bound agrawal --S 50 --n 10000 --delta 0.05 --trials 10000 --seed 7
//   l1conc asymptotic-mean --S 2,10,50 --trials 1000000 --seed 7 --format json --out means.json
//   l1conc run --config experiment.cfg --format json --out report.json
//   l1conc report --in report.json --format csv
//   l1conc report --in report.json --plot-task means --plot-out means.dat
//
// Exit status: 0 ran with no violated bound, 10 at least one bound violated,
// 1 usage or configuration error, 2 runtime or capacity error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "l1conc/config.hpp"
#include "l1conc/error.hpp"
#include "l1conc/experiment.hpp"
#include "l1conc/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitViolated = 10;

struct Flags {
  std::string config_path;
  std::string S, n, delta, threshold, grid, bound, family, statistic, p;
  std::string seed;
  std::string trials;
  std::string D;
  std::string ci_level;
  std::string format = "csv";
  std::string out;
  std::string in;
  std::string plot_task;
  std::string plot_out;
  int workers = -1;
  bool timing = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw l1conc::ConfigError({"cannot read '" + path + "'"});
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

// Direct flags become a one-task config so that both routes share validation.
std::string config_from_flags(const Flags& f, const std::string& kind) {
  std::ostringstream cfg;
  if (!f.seed.empty()) cfg << "master_seed = " << f.seed << '\n';
  if (!f.ci_level.empty()) cfg << "ci_level = " << f.ci_level << '\n';
  cfg << "[task]\nid = " << kind << "\nkind = " << kind << '\n';
  const auto put = [&](const char* key, const std::string& value) {
    if (!value.empty()) cfg << key << " = " << value << '\n';
  };
  put("S", f.S);
  put("n", f.n);
  put("delta", f.delta);
  put("threshold", f.threshold);
  put("grid", f.grid);
  put("bound", f.bound);
  put("family", f.family);
  put("statistic", f.statistic);
  put("p", f.p);
  put("trials", f.trials);
  put("D", f.D);
  return cfg.str();
}

l1conc::ReportFormat format_of(const Flags& f) {
  const auto format = l1conc::parse_report_format(f.format);
  if (!format) throw l1conc::ConfigError({"--format must be csv or json"});
  return *format;
}

void emit(const Flags& f, const l1conc::Report& report) {
  write_output(f.out, l1conc::emit_report(report, format_of(f)));
  if (!f.plot_task.empty()) {
    write_output(f.plot_out, l1conc::emit_plot_data(report, f.plot_task));
  }
}

int run_command(const Flags& f, const std::string& kind) {
  format_of(f);
  l1conc::ExperimentConfig config;
  if (!f.config_path.empty()) {
    config = l1conc::parse_config(read_file(f.config_path));
    if (!kind.empty()) {
      for (const auto& task : config.tasks) {
        if (l1conc::to_string(task.kind) != kind) {
          throw l1conc::ConfigError({"task '" + task.id + "' has kind " + std::string(l1conc::to_string(task.kind)) +
                                     "; use the run command for mixed configs"});
        }
      }
    }
  } else {
    if (kind.empty()) throw l1conc::ConfigError({"run requires --config"});
    config = l1conc::parse_config(config_from_flags(f, kind));
  }

  const int workers = f.workers >= 0 ? f.workers : l1conc::resolve_workers(config);
  auto summary = l1conc::run_experiment(config, workers);
  if (!f.timing) summary.report.runtime_seconds.reset();
  emit(f, summary.report);

  if (summary.violated_outside_regime > 0) {
    std::cerr << "note: " << summary.violated_outside_regime
              << " Violated verdict(s) fall outside the Devroye validity regime and do not count\n";
  }
  return summary.violated > 0 ? kExitViolated : kExitOk;
}

int report_command(const Flags& f) {
  if (f.in.empty()) throw l1conc::ConfigError({"report requires --in <saved.json>"});
  const auto report = l1conc::parse_report_json(read_file(f.in));
  emit(f, report);
  return kExitOk;
}

void add_run_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config_path, "Experiment config file");
  cmd->add_option("--S", f.S, "Alphabet size(s), comma separated");
  cmd->add_option("--n", f.n, "Sample size(s), comma separated");
  cmd->add_option("--trials", f.trials, "Monte Carlo trials");
  cmd->add_option("--seed", f.seed, "Master seed (required)");
  cmd->add_option("--D", f.D, "Scale of the maximization box [0, D]^S");
  cmd->add_option("--family", f.family, "multinomial | dirichlet | asymptotic");
  cmd->add_option("--statistic", f.statistic, "l1 | zn | scaled-zn");
  cmd->add_option("--p", f.p, "Probability vector, comma separated (default uniform)");
  cmd->add_option("--ci-level", f.ci_level, "Confidence level of intervals");
  cmd->add_option("--workers", f.workers, "Worker threads (overrides config and L1CONC_WORKERS)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_flag("--timing", f.timing, "Include wall-clock runtime in JSON output");
}

void add_output_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--format", f.format, "csv | json")->capture_default_str();
  cmd->add_option("--out", f.out, "Output path (default stdout)");
  cmd->add_option("--plot-task", f.plot_task, "Also emit plot data for this task id");
  cmd->add_option("--plot-out", f.plot_out, "Plot data path (default stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo verification of l1 concentration bounds for multinomial distributions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", L1CONC_VERSION);
  Flags f;

  auto* tail = app.add_subcommand("tail", "Estimate P(statistic >= threshold)");
  add_run_flags(tail, f);
  add_output_flags(tail, f);
  tail->add_option("--threshold", f.threshold, "Threshold(s): list or linspace(a, b, k)");

  auto* quantiles = app.add_subcommand("quantiles", "Empirical CDF on a grid with a DKW band");
  add_run_flags(quantiles, f);
  add_output_flags(quantiles, f);
  quantiles->add_option("--grid", f.grid, "Ascending grid: list or linspace(a, b, k)");

  auto* falsify = app.add_subcommand("falsify", "Test a concentration bound against simulation");
  add_run_flags(falsify, f);
  add_output_flags(falsify, f);
  falsify->add_option("--bound", f.bound, "weissman-union | weissman-exact | devroye | agrawal");
  falsify->add_option("--delta", f.delta, "Claimed failure probability(ies)");

  auto* mean = app.add_subcommand("asymptotic-mean", "Monte Carlo mean of the large-n limit Z_S");
  add_run_flags(mean, f);
  add_output_flags(mean, f);

  auto* run = app.add_subcommand("run", "Run every task of a config file");
  add_run_flags(run, f);
  add_output_flags(run, f);

  auto* report = app.add_subcommand("report", "Re-emit a saved JSON report");
  report->add_option("--in", f.in, "Saved JSON report")->required();
  add_output_flags(report, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (report->parsed()) return report_command(f);
    if (run->parsed()) return run_command(f, "");
    for (auto* cmd : {tail, quantiles, falsify, mean}) {
      if (cmd->parsed()) return run_command(f, cmd->get_name());
    }
  } catch (const l1conc::ConfigError& e) {
    std::cerr << "configuration error:\n" << e.what() << '\n';
    return kExitUsage;
  } catch (const l1conc::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const l1conc::ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitUsage;
  } catch (const l1conc::DomainError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
