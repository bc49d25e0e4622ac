#include "l1conc/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include "l1conc/error.hpp"

namespace l1conc {
namespace {

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& line : lines) {
    if (!out.empty()) out += '\n';
    out += line;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

std::optional<std::uint64_t> to_uint(std::string_view s) {
  s = trim(s);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec == std::errc{} && ptr == s.data() + s.size() && !s.empty()) return value;
  // Accept integral scientific notation such as 1e4.
  const auto d = to_double(s);
  if (d && *d >= 0.0 && *d < 9.2e18 && std::floor(*d) == *d) return static_cast<std::uint64_t>(*d);
  return std::nullopt;
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> parts;
  while (true) {
    const auto comma = s.find(',');
    parts.push_back(trim(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return parts;
}

// Comma list of reals, or linspace(a, b, k).
std::optional<std::vector<double>> to_double_list(std::string_view s) {
  s = trim(s);
  std::vector<double> out;
  if (s.starts_with("linspace(") && s.ends_with(")")) {
    const auto args = split_list(s.substr(9, s.size() - 10));
    if (args.size() != 3) return std::nullopt;
    const auto a = to_double(args[0]);
    const auto b = to_double(args[1]);
    const auto k = to_uint(args[2]);
    if (!a || !b || !k || *k == 0) return std::nullopt;
    if (*k == 1) return std::vector<double>{*a};
    for (std::uint64_t i = 0; i < *k; ++i) {
      out.push_back(i + 1 == *k ? *b : *a + (*b - *a) * static_cast<double>(i) / static_cast<double>(*k - 1));
    }
    return out;
  }
  for (auto part : split_list(s)) {
    const auto v = to_double(part);
    if (!v) return std::nullopt;
    out.push_back(*v);
  }
  return out;
}

std::optional<std::vector<std::uint64_t>> to_uint_list(std::string_view s) {
  std::vector<std::uint64_t> out;
  for (auto part : split_list(s)) {
    const auto v = to_uint(part);
    if (!v) return std::nullopt;
    out.push_back(*v);
  }
  return out;
}

struct Entry {
  std::string value;
  int line = 0;
};

using Block = std::map<std::string, Entry, std::less<>>;

class Collector {
 public:
  void add(std::string message) { problems_.push_back(std::move(message)); }
  void field(const std::string& path, const std::string& message) { add(path + ": " + message); }
  bool empty() const { return problems_.empty(); }
  void raise() {
    if (!problems_.empty()) throw ConfigError(std::move(problems_));
  }

 private:
  std::vector<std::string> problems_;
};

std::string task_path(std::size_t index, std::string_view key) {
  return "task[" + std::to_string(index + 1) + "]." + std::string(key);
}

void check_task(const TaskConfig& task, std::size_t index, Collector& errors) {
  const auto path = [&](std::string_view key) { return task_path(index, key); };
  const bool asymptotic = task.family == SourceKind::Asymptotic;

  if (task.S.empty()) errors.field(path("S"), "is required");
  for (auto s : task.S) {
    if (s < 2) errors.field(path("S"), "every value must be >= 2");
  }
  if (task.trials < 1) errors.field(path("trials"), "must be >= 1");
  if (!(task.D > 0.0) || !std::isfinite(task.D)) errors.field(path("D"), "must be positive and finite");

  if (task.kind == TaskKind::AsymptoticMean && !asymptotic) {
    errors.field(path("family"), "asymptotic-mean always uses the asymptotic family");
  }
  if (task.kind == TaskKind::Falsify && asymptotic) {
    errors.field(path("family"), "falsify needs a finite-n family (multinomial or dirichlet)");
  }
  if (asymptotic) {
    if (!task.n.empty()) errors.field(path("n"), "must be absent for the asymptotic family");
    if (!task.p.empty()) errors.field(path("p"), "the asymptotic family is defined for uniform p only");
    if (task.statistic != Statistic::L1) errors.field(path("statistic"), "not used by the asymptotic family");
  } else {
    if (task.n.empty()) errors.field(path("n"), "is required for finite-n families");
    for (auto n : task.n) {
      if (n < 1) errors.field(path("n"), "every value must be >= 1");
    }
  }

  if (task.kind == TaskKind::Falsify) {
    if (!task.bound) errors.field(path("bound"), "is required for falsify tasks");
    if (task.delta.empty()) errors.field(path("delta"), "is required for falsify tasks");
    for (double d : task.delta) {
      if (!(d > 0.0 && d <= 1.0)) errors.field(path("delta"), "every value must lie in (0, 1]");
    }
    if (task.trials < 100) errors.field(path("trials"), "falsify needs at least 100 trials");
    if (task.statistic != Statistic::L1) errors.field(path("statistic"), "falsify always uses the l1 deviation");
  } else {
    if (task.bound) errors.field(path("bound"), "only used by falsify tasks");
    if (!task.delta.empty()) errors.field(path("delta"), "only used by falsify tasks");
  }

  const bool curve = task.kind == TaskKind::Tail || task.kind == TaskKind::Quantiles;
  const char* grid_key = task.kind == TaskKind::Quantiles ? "grid" : "threshold";
  if (curve) {
    if (task.thresholds.empty()) errors.field(path(grid_key), "is required");
    for (double t : task.thresholds) {
      if (!std::isfinite(t)) errors.field(path(grid_key), "values must be finite");
    }
    if (task.kind == TaskKind::Quantiles && !std::is_sorted(task.thresholds.begin(), task.thresholds.end())) {
      errors.field(path("grid"), "must be ascending");
    }
  } else if (!task.thresholds.empty()) {
    errors.field(path("threshold"), "only used by tail and quantiles tasks");
  }

  if (!task.p.empty()) {
    if (task.S.size() != 1 || task.S.front() != task.p.size()) {
      errors.field(path("p"), "needs exactly one S value equal to its length");
    } else {
      try {
        validate_simplex(task.p);
      } catch (const ValidationError& e) {
        errors.field(path("p"), e.what());
      }
    }
  }
}

void check_config(const ExperimentConfig& config, Collector& errors) {
  if (config.workers && *config.workers < 0) errors.field("workers", "must be a positive integer or auto");
  if (!(config.ci_level > 0.0 && config.ci_level < 1.0)) errors.field("ci_level", "must lie in (0, 1)");
  if (!(config.band_level > 0.0 && config.band_level < 1.0)) errors.field("band_level", "must lie in (0, 1)");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < config.tasks.size(); ++i) {
    const auto& task = config.tasks[i];
    if (task.id.empty()) errors.field(task_path(i, "id"), "must not be empty");
    if (!ids.insert(task.id).second) errors.field(task_path(i, "id"), "duplicate task id '" + task.id + "'");
    check_task(task, i, errors);
  }
}

void read_globals(const Block& block, ExperimentConfig& config, Collector& errors) {
  for (const auto& [key, entry] : block) {
    const auto& v = entry.value;
    if (key == "master_seed") {
      if (auto seed = to_uint(v)) {
        config.master_seed = *seed;
      } else {
        errors.field("master_seed", "expected an unsigned 64-bit integer");
      }
    } else if (key == "workers") {
      if (trim(v) == "auto") {
        config.workers = 0;
      } else if (auto w = to_uint(v); w && *w >= 1 && *w <= 4096) {
        config.workers = static_cast<int>(*w);
      } else {
        errors.field("workers", "expected a positive integer or auto");
      }
    } else if (key == "ci_level" || key == "band_level") {
      if (auto d = to_double(v)) {
        (key == "ci_level" ? config.ci_level : config.band_level) = *d;
      } else {
        errors.field(key, "expected a number");
      }
    } else {
      errors.add("line " + std::to_string(entry.line) + ": unknown key '" + key + "'");
    }
  }
  if (!block.contains("master_seed")) errors.field("master_seed", "is required (seeds are never generated implicitly)");
}

TaskConfig read_task(const Block& block, std::size_t index, Collector& errors) {
  TaskConfig task;
  const auto path = [&](std::string_view key) { return task_path(index, key); };
  task.id = "task" + std::to_string(index + 1);

  bool family_set = false;
  if (auto it = block.find("kind"); it == block.end()) {
    errors.field(path("kind"), "is required");
  } else if (auto kind = parse_task_kind(trim(it->second.value))) {
    task.kind = *kind;
  } else {
    errors.field(path("kind"), "expected tail, quantiles, falsify or asymptotic-mean");
  }

  for (const auto& [key, entry] : block) {
    const std::string_view v = trim(entry.value);
    if (key == "kind") continue;
    if (key == "id") {
      task.id = std::string(v);
    } else if (key == "family") {
      if (auto f = parse_source_kind(v)) {
        task.family = *f;
        family_set = true;
      } else {
        errors.field(path(key), "expected multinomial, dirichlet or asymptotic");
      }
    } else if (key == "statistic") {
      if (auto s = parse_statistic(v)) {
        task.statistic = *s;
      } else {
        errors.field(path(key), "expected l1, zn or scaled-zn");
      }
    } else if (key == "bound") {
      if (auto b = parse_bound_family(v)) {
        task.bound = *b;
      } else {
        errors.field(path(key), "expected weissman-union, weissman-exact, devroye or agrawal");
      }
    } else if (key == "S" || key == "n") {
      if (auto list = to_uint_list(v)) {
        (key == "S" ? task.S : task.n) = *list;
      } else {
        errors.field(path(key), "expected a comma-separated list of unsigned integers");
      }
    } else if (key == "delta" || key == "threshold" || key == "grid" || key == "p") {
      auto list = to_double_list(v);
      if (!list) {
        errors.field(path(key), "expected a comma-separated list of numbers or linspace(a, b, k)");
      } else if (key == "delta") {
        task.delta = *list;
      } else if (key == "p") {
        task.p = *list;
      } else {
        if (!task.thresholds.empty()) errors.field(path(key), "threshold and grid are mutually exclusive");
        task.thresholds = *list;
      }
    } else if (key == "trials") {
      if (auto t = to_uint(v)) {
        task.trials = *t;
      } else {
        errors.field(path(key), "expected an unsigned integer");
      }
    } else if (key == "D") {
      if (auto d = to_double(v)) {
        task.D = *d;
      } else {
        errors.field(path(key), "expected a number");
      }
    } else {
      errors.add("line " + std::to_string(entry.line) + ": unknown key '" + key + "' in task block");
    }
  }
  if (!family_set && task.kind == TaskKind::AsymptoticMean) task.family = SourceKind::Asymptotic;
  if (task.kind == TaskKind::Quantiles && block.contains("threshold")) {
    errors.field(path("threshold"), "quantiles tasks take a grid");
  }
  if (task.kind == TaskKind::Tail && block.contains("grid")) {
    errors.field(path("grid"), "tail tasks take threshold");
  }
  return task;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(join_lines(problems)), problems_(std::move(problems)) {}

std::string_view to_string(TaskKind kind) noexcept {
  switch (kind) {
    case TaskKind::Tail: return "tail";
    case TaskKind::Quantiles: return "quantiles";
    case TaskKind::Falsify: return "falsify";
    case TaskKind::AsymptoticMean: return "asymptotic-mean";
  }
  return "unknown";
}

std::optional<TaskKind> parse_task_kind(std::string_view text) noexcept {
  if (text == "tail") return TaskKind::Tail;
  if (text == "quantiles") return TaskKind::Quantiles;
  if (text == "falsify") return TaskKind::Falsify;
  if (text == "asymptotic-mean") return TaskKind::AsymptoticMean;
  return std::nullopt;
}

ExperimentConfig parse_config(std::string_view text) {
  Collector errors;
  Block globals;
  std::vector<Block> blocks;
  Block* current = &globals;

  std::istringstream stream{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line == "[task]") {
        blocks.emplace_back();
        current = &blocks.back();
      } else {
        errors.add("line " + std::to_string(line_no) + ": unknown section " + std::string(line));
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      errors.add("line " + std::to_string(line_no) + ": expected 'key = value'");
      continue;
    }
    const auto key = std::string(trim(line.substr(0, eq)));
    const auto value = std::string(trim(line.substr(eq + 1)));
    if (key.empty() || value.empty()) {
      errors.add("line " + std::to_string(line_no) + ": expected 'key = value'");
      continue;
    }
    if (!current->emplace(key, Entry{value, line_no}).second) {
      errors.add("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }

  ExperimentConfig config;
  read_globals(globals, config, errors);
  for (std::size_t i = 0; i < blocks.size(); ++i) config.tasks.push_back(read_task(blocks[i], i, errors));
  check_config(config, errors);
  errors.raise();
  return config;
}

void validate(const ExperimentConfig& config) {
  Collector errors;
  check_config(config, errors);
  errors.raise();
}

int resolve_workers(const ExperimentConfig& config) {
  if (config.workers) return *config.workers;
  if (const char* env = std::getenv(kWorkersEnvVar)) {
    if (auto w = to_uint(env); w && *w >= 1 && *w <= 4096) return static_cast<int>(*w);
  }
  return 0;
}

}  // namespace l1conc
