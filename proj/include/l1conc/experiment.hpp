#pragma once

#include <cstdint>

#include "l1conc/config.hpp"
#include "l1conc/report.hpp"

namespace l1conc {

struct RunSummary {
  Report report;
  std::size_t violated = 0;
  /// Violated verdicts for Devroye outside delta <= 3 exp(-4S/5), where the
  /// bound makes no claim; excluded from `violated`.
  std::size_t violated_outside_regime = 0;
};

/// Seed used for combination `combo` of task `task_index`.
std::uint64_t task_seed(std::uint64_t master_seed, std::size_t task_index, std::size_t combo);

/// Executes every task. Results depend only on the config, never on `workers`
/// (0 = OpenMP default).
RunSummary run_experiment(const ExperimentConfig& config, int workers);

}  // namespace l1conc
