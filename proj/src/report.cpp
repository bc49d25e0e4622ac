#include "l1conc/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <map>

#include <json.hpp>

namespace l1conc {
namespace {

using Json = nlohmann::ordered_json;

std::string number(double x) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), ptr);
}

std::string number(std::uint64_t x) { return std::to_string(x); }

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

template <typename T>
std::string optional_number(const std::optional<T>& v) {
  return v ? number(*v) : std::string();
}

template <typename T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json task_to_json(const TaskConfig& task) {
  Json j;
  j["id"] = task.id;
  j["kind"] = to_string(task.kind);
  j["family"] = to_string(task.family);
  j["statistic"] = to_string(task.statistic);
  j["S"] = task.S;
  j["n"] = task.n;
  j["delta"] = task.delta;
  j["bound"] = task.bound ? Json(to_string(*task.bound)) : Json(nullptr);
  j["thresholds"] = task.thresholds;
  j["trials"] = task.trials;
  j["D"] = task.D;
  j["p"] = task.p;
  return j;
}

Json config_to_json(const ExperimentConfig& config) {
  Json j;
  j["master_seed"] = config.master_seed;
  j["ci_level"] = config.ci_level;
  j["band_level"] = config.band_level;
  j["tasks"] = Json::array();
  for (const auto& task : config.tasks) j["tasks"].push_back(task_to_json(task));
  return j;
}

Json row_to_json(const ReportRow& row) {
  Json j;
  j["task_id"] = row.task_id;
  j["kind"] = to_string(row.kind);
  j["family"] = to_string(row.family);
  j["S"] = row.S;
  j["n"] = optional_json(row.n);
  j["delta"] = optional_json(row.delta);
  j["D"] = row.D;
  j["threshold"] = optional_json(row.threshold);
  j["epsilon"] = optional_json(row.epsilon);
  j["point"] = row.point;
  j["ci_low"] = row.ci_low;
  j["ci_high"] = row.ci_high;
  j["outcome"] = row.outcome ? Json(to_string(*row.outcome)) : Json(nullptr);
  j["trials"] = row.trials;
  j["seed"] = row.seed;
  return j;
}

[[noreturn]] void schema_error(const std::string& message) { throw ConfigError({"report: " + message}); }

template <typename T, typename Parse>
T parse_enum(const Json& j, const char* field, Parse parse) {
  if (!j.is_string()) schema_error(std::string(field) + " must be a string");
  auto value = parse(j.get<std::string>());
  if (!value) schema_error(std::string("unknown ") + field + " '" + j.get<std::string>() + "'");
  return *value;
}

template <typename T>
std::optional<T> optional_from(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<T>();
}

TaskConfig task_from_json(const Json& j) {
  TaskConfig task;
  task.id = j.at("id").get<std::string>();
  task.kind = parse_enum<TaskKind>(j.at("kind"), "kind", parse_task_kind);
  task.family = parse_enum<SourceKind>(j.at("family"), "family", parse_source_kind);
  task.statistic = parse_enum<Statistic>(j.at("statistic"), "statistic", parse_statistic);
  task.S = j.at("S").get<std::vector<std::uint64_t>>();
  task.n = j.at("n").get<std::vector<std::uint64_t>>();
  task.delta = j.at("delta").get<std::vector<double>>();
  if (!j.at("bound").is_null()) task.bound = parse_enum<BoundFamily>(j.at("bound"), "bound", parse_bound_family);
  task.thresholds = j.at("thresholds").get<std::vector<double>>();
  task.trials = j.at("trials").get<std::uint64_t>();
  task.D = j.at("D").get<double>();
  task.p = j.at("p").get<std::vector<double>>();
  return task;
}

ReportRow row_from_json(const Json& j) {
  ReportRow row;
  row.task_id = j.at("task_id").get<std::string>();
  row.kind = parse_enum<TaskKind>(j.at("kind"), "kind", parse_task_kind);
  row.family = parse_enum<SourceKind>(j.at("family"), "family", parse_source_kind);
  row.S = j.at("S").get<std::uint64_t>();
  row.n = optional_from<std::uint64_t>(j.at("n"));
  row.delta = optional_from<double>(j.at("delta"));
  row.D = j.at("D").get<double>();
  row.threshold = optional_from<double>(j.at("threshold"));
  row.epsilon = optional_from<double>(j.at("epsilon"));
  row.point = j.at("point").get<double>();
  row.ci_low = j.at("ci_low").get<double>();
  row.ci_high = j.at("ci_high").get<double>();
  if (!j.at("outcome").is_null()) row.outcome = parse_enum<Outcome>(j.at("outcome"), "outcome", parse_outcome);
  row.trials = j.at("trials").get<std::uint64_t>();
  row.seed = j.at("seed").get<std::uint64_t>();
  return row;
}

std::string emit_csv(const Report& report) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& row : report.rows) {
    const std::array<std::string, 15> fields = {
        csv_field(row.task_id),
        std::string(to_string(row.kind)),
        std::string(to_string(row.family)),
        number(row.S),
        optional_number(row.n),
        optional_number(row.delta),
        number(row.D),
        optional_number(row.threshold),
        optional_number(row.epsilon),
        number(row.point),
        number(row.ci_low),
        number(row.ci_high),
        row.outcome ? std::string(to_string(*row.outcome)) : std::string(),
        number(row.trials),
        number(row.seed),
    };
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i > 0) out += ',';
      out += fields[i];
    }
    out += '\n';
  }
  return out;
}

std::string emit_json(const Report& report) {
  Json j;
  j["schema"] = report.schema;
  j["tool"] = report.tool;
  j["version"] = report.version;
  j["config"] = config_to_json(report.config);
  j["rows"] = Json::array();
  for (const auto& row : report.rows) j["rows"].push_back(row_to_json(row));
  if (report.runtime_seconds) j["runtime_seconds"] = *report.runtime_seconds;
  return j.dump(2) + '\n';
}

}  // namespace

std::optional<ReportFormat> parse_report_format(std::string_view text) noexcept {
  if (text == "csv") return ReportFormat::Csv;
  if (text == "json") return ReportFormat::Json;
  return std::nullopt;
}

std::string emit_report(const Report& report, ReportFormat format) {
  return format == ReportFormat::Csv ? emit_csv(report) : emit_json(report);
}

Report parse_report_json(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    schema_error(std::string("invalid JSON: ") + e.what());
  }
  try {
    if (!j.is_object() || !j.contains("schema")) schema_error("missing schema field");
    if (j.at("schema").get<int>() != kReportSchema) schema_error("unsupported schema version");
    Report report;
    report.schema = j.at("schema").get<int>();
    report.tool = j.at("tool").get<std::string>();
    report.version = j.at("version").get<std::string>();
    const auto& config = j.at("config");
    report.config.master_seed = config.at("master_seed").get<std::uint64_t>();
    report.config.ci_level = config.at("ci_level").get<double>();
    report.config.band_level = config.at("band_level").get<double>();
    for (const auto& task : config.at("tasks")) report.config.tasks.push_back(task_from_json(task));
    for (const auto& row : j.at("rows")) report.rows.push_back(row_from_json(row));
    if (j.contains("runtime_seconds")) report.runtime_seconds = j.at("runtime_seconds").get<double>();
    return report;
  } catch (const Json::exception& e) {
    schema_error(e.what());
  }
}

std::string emit_plot_data(const Report& report, std::string_view task_id) {
  std::vector<const ReportRow*> rows;
  for (const auto& row : report.rows) {
    if (row.task_id == task_id) rows.push_back(&row);
  }
  if (rows.empty()) throw UsageError("no rows for task '" + std::string(task_id) + "'");
  const TaskKind kind = rows.front()->kind;

  // Group by (S, n); asymptotic-mean rows form a single S curve.
  std::vector<std::vector<const ReportRow*>> blocks;
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::size_t> index;
  for (const auto* row : rows) {
    const auto key = kind == TaskKind::AsymptoticMean ? std::pair<std::uint64_t, std::uint64_t>{0, 0}
                                                      : std::pair{row->S, row->n.value_or(0)};
    const auto [it, inserted] = index.emplace(key, blocks.size());
    if (inserted) blocks.emplace_back();
    blocks[it->second].push_back(row);
  }
  const bool has_curve = kind == TaskKind::Quantiles ||
                         std::any_of(blocks.begin(), blocks.end(), [](const auto& b) { return b.size() >= 2; });
  if (!has_curve) throw UsageError("task '" + std::string(task_id) + "' produced no curve");

  std::string out = "# task " + std::string(task_id) + " (" + std::string(to_string(kind)) + ")\n";
  switch (kind) {
    case TaskKind::Tail: out += "# threshold point ci_low ci_high\n"; break;
    case TaskKind::Quantiles: out += "# threshold cdf cdf_low cdf_high\n"; break;
    case TaskKind::Falsify: out += "# delta point ci_low ci_high claimed_delta\n"; break;
    case TaskKind::AsymptoticMean: out += "# S mean expected\n"; break;
  }
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& block = blocks[b];
    if (b > 0) out += "\n\n";
    if (kind != TaskKind::AsymptoticMean) {
      out += "# S=" + number(block.front()->S);
      if (block.front()->n) out += " n=" + number(*block.front()->n);
      out += '\n';
    }
    for (const auto* row : block) {
      switch (kind) {
        case TaskKind::Tail:
        case TaskKind::Quantiles:
          out += number(row->threshold.value_or(0.0)) + ' ' + number(row->point) + ' ' + number(row->ci_low) +
                 ' ' + number(row->ci_high) + '\n';
          break;
        case TaskKind::Falsify:
          out += number(row->delta.value_or(0.0)) + ' ' + number(row->point) + ' ' + number(row->ci_low) + ' ' +
                 number(row->ci_high) + ' ' + number(row->delta.value_or(0.0)) + '\n';
          break;
        case TaskKind::AsymptoticMean:
          out += number(row->S) + ' ' + number(row->point) + ' ' + number(row->epsilon.value_or(0.0)) + '\n';
          break;
      }
    }
  }
  return out;
}

}  // namespace l1conc
