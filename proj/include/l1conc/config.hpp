#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "l1conc/bounds.hpp"
#include "l1conc/montecarlo.hpp"

namespace l1conc {

/// Malformed or semantically invalid experiment configuration. The message
/// lists every problem found, one per line.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

enum class TaskKind { Tail, Quantiles, Falsify, AsymptoticMean };

std::string_view to_string(TaskKind kind) noexcept;
std::optional<TaskKind> parse_task_kind(std::string_view text) noexcept;

/// One `[task]` block. List-valued fields (S, n, delta) are swept as a
/// cartesian product; thresholds are evaluated on a shared sample.
struct TaskConfig {
  std::string id;
  TaskKind kind = TaskKind::Falsify;
  SourceKind family = SourceKind::Multinomial;
  Statistic statistic = Statistic::L1;
  std::vector<std::uint64_t> S;
  /// Empty for the asymptotic family.
  std::vector<std::uint64_t> n;
  /// falsify only.
  std::vector<double> delta;
  std::optional<BoundFamily> bound;
  /// tail: thresholds; quantiles: ascending CDF grid.
  std::vector<double> thresholds;
  std::uint64_t trials = 10'000;
  double D = 1.0;
  /// Empty means uniform.
  std::vector<double> p;
};

struct ExperimentConfig {
  std::uint64_t master_seed = 0;
  /// nullopt: not set in the config. 0: auto (OpenMP default).
  std::optional<int> workers;
  double ci_level = 0.95;
  double band_level = 0.05;
  std::vector<TaskConfig> tasks;
};

/// Parses the key-value format:
///
///     # comment
///     master_seed = 42
///     workers = auto          # optional; positive integer or auto
///     ci_level = 0.95         # optional
///     band_level = 0.05       # optional, DKW alpha for quantile tasks
///
///     [task]
///     id = agrawal-s50        # optional; defaults to task<k>
///     kind = falsify          # tail | quantiles | falsify | asymptotic-mean
///     bound = agrawal         # falsify: weissman-union | weissman-exact | devroye | agrawal
///     family = multinomial    # multinomial | dirichlet | asymptotic
///     statistic = l1          # l1 | zn | scaled-zn (finite-n sources)
///     S = 50                  # list allowed: S = 2, 10, 50
///     n = 10000               # list allowed; absent for asymptotic
///     delta = 0.05            # falsify; list allowed
///     threshold = 0.1, 0.2    # tail; linspace(a, b, k) allowed
///     grid = linspace(0, 2, 21)  # quantiles, ascending
///     trials = 10000
///     D = 1
///     p = 0.2, 0.8            # optional, requires a single S
///
/// Throws ConfigError listing every syntax error (with line numbers) and
/// every semantic error (with a field path such as task[1].delta).
ExperimentConfig parse_config(std::string_view text);

/// Applies the validation rules parse_config uses; throws ConfigError.
void validate(const ExperimentConfig& config);

/// Number of workers to use: config value, else the environment variable
/// L1CONC_WORKERS, else 0 (OpenMP default).
int resolve_workers(const ExperimentConfig& config);

inline constexpr const char* kWorkersEnvVar = "L1CONC_WORKERS";

}  // namespace l1conc
