#include "l1conc/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <boost/math/distributions/normal.hpp>

#include "l1conc/asymptotic.hpp"
#include "l1conc/bounds.hpp"
#include "l1conc/montecarlo.hpp"

namespace l1conc {
namespace {

struct Combo {
  std::uint64_t S;
  std::optional<std::uint64_t> n;
};

std::vector<Combo> combos_of(const TaskConfig& task) {
  std::vector<Combo> out;
  for (auto S : task.S) {
    if (task.n.empty()) {
      out.push_back({S, std::nullopt});
    } else {
      for (auto n : task.n) out.push_back({S, n});
    }
  }
  return out;
}

ReportRow base_row(const TaskConfig& task, const Combo& combo, std::uint64_t seed) {
  ReportRow row;
  row.task_id = task.id;
  row.kind = task.kind;
  row.family = task.family;
  row.S = combo.S;
  row.n = combo.n;
  row.D = task.D;
  row.trials = task.trials;
  row.seed = seed;
  return row;
}

SampleSource source_of(const TaskConfig& task, const Combo& combo) {
  SampleSource source;
  source.kind = task.family;
  source.S = combo.S;
  source.n = combo.n.value_or(1);
  source.D = task.D;
  source.statistic = task.statistic;
  source.p = task.p;
  return source;
}

void run_tail(const ExperimentConfig& config, const TaskConfig& task, const Combo& combo, std::uint64_t seed,
              int workers, RunSummary& summary) {
  const auto estimates = estimate_tail_curve(source_of(task, combo), task.thresholds, task.trials, seed,
                                             EstimateOptions{config.ci_level, workers});
  for (const auto& est : estimates) {
    auto row = base_row(task, combo, seed);
    row.threshold = est.threshold;
    row.point = est.point;
    row.ci_low = est.ci_low;
    row.ci_high = est.ci_high;
    summary.report.rows.push_back(std::move(row));
  }
}

void run_quantiles(const ExperimentConfig& config, const TaskConfig& task, const Combo& combo, std::uint64_t seed,
                   int workers, RunSummary& summary) {
  const auto curve = estimate_quantile_curve(source_of(task, combo), task.thresholds, task.trials, seed,
                                             config.band_level, workers);
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    auto row = base_row(task, combo, seed);
    row.threshold = curve.grid[i];
    row.point = curve.cdf_estimates[i];
    row.ci_low = std::max(0.0, row.point - curve.dkw_halfwidth);
    row.ci_high = std::min(1.0, row.point + curve.dkw_halfwidth);
    summary.report.rows.push_back(std::move(row));
  }
}

void run_falsify(const ExperimentConfig& config, const TaskConfig& task, const Combo& combo, std::uint64_t seed,
                 int workers, RunSummary& summary) {
  std::vector<BoundEvaluation> bounds;
  std::vector<double> epsilons;
  for (double delta : task.delta) {
    bounds.push_back(evaluate(BoundSpec{*task.bound, *combo.n, combo.S, delta}));
    epsilons.push_back(bounds.back().epsilon);
  }
  // Every delta is scored on the same sample, which is the sample falsify_bound draws for this seed.
  const auto estimates =
      estimate_tail_curve(source_of(task, combo), epsilons, task.trials, seed, EstimateOptions{config.ci_level, workers});
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    auto row = base_row(task, combo, seed);
    row.delta = bounds[i].spec.delta;
    row.threshold = bounds[i].epsilon;
    row.epsilon = bounds[i].epsilon;
    row.point = estimates[i].point;
    row.ci_low = estimates[i].ci_low;
    row.ci_high = estimates[i].ci_high;
    row.outcome = classify(estimates[i], bounds[i].spec.delta);
    if (*row.outcome == Outcome::Violated) {
      ++(bounds[i].valid ? summary.violated : summary.violated_outside_regime);
    }
    summary.report.rows.push_back(std::move(row));
  }
}

void run_asymptotic_mean(const ExperimentConfig& config, const TaskConfig& task, const Combo& combo,
                         std::uint64_t seed, int workers, RunSummary& summary) {
  const auto samples = draw_samples_parallel(source_of(task, combo), task.trials, seed, workers);
  // Index-order accumulation keeps the mean independent of the worker count.
  double sum = 0.0;
  for (double x : samples) sum += x;
  const double count = static_cast<double>(samples.size());
  const double mean = sum / count;
  double squares = 0.0;
  for (double x : samples) squares += (x - mean) * (x - mean);
  const double stderr_mean = samples.size() > 1 ? std::sqrt(squares / (count - 1.0) / count) : 0.0;
  const double z = boost::math::quantile(boost::math::normal_distribution<double>(), 0.5 * (1.0 + config.ci_level));

  auto row = base_row(task, combo, seed);
  row.epsilon = task.D * expected_Z_S(combo.S);
  row.point = mean;
  row.ci_low = mean - z * stderr_mean;
  row.ci_high = mean + z * stderr_mean;
  summary.report.rows.push_back(std::move(row));
}

}  // namespace

std::uint64_t task_seed(std::uint64_t master_seed, std::size_t task_index, std::size_t combo) {
  return derive_seed(derive_seed(master_seed, task_index), combo);
}

RunSummary run_experiment(const ExperimentConfig& config, int workers) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();
  RunSummary summary;
  summary.report.config = config;
  summary.report.config.workers.reset();

  for (std::size_t t = 0; t < config.tasks.size(); ++t) {
    const auto& task = config.tasks[t];
    const auto combos = combos_of(task);
    for (std::size_t c = 0; c < combos.size(); ++c) {
      const auto seed = task_seed(config.master_seed, t, c);
      switch (task.kind) {
        case TaskKind::Tail: run_tail(config, task, combos[c], seed, workers, summary); break;
        case TaskKind::Quantiles: run_quantiles(config, task, combos[c], seed, workers, summary); break;
        case TaskKind::Falsify: run_falsify(config, task, combos[c], seed, workers, summary); break;
        case TaskKind::AsymptoticMean: run_asymptotic_mean(config, task, combos[c], seed, workers, summary); break;
      }
    }
  }
  summary.report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return summary;
}

}  // namespace l1conc
