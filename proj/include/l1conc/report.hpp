#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "l1conc/config.hpp"

namespace l1conc {

inline constexpr int kReportSchema = 1;

/// One result line. Fields a task kind does not produce are empty.
///
///   tail             threshold, point = P(stat >= threshold), Clopper-Pearson CI
///   quantiles        threshold = grid point, point = P(stat <= threshold), DKW band
///   falsify          delta, epsilon = threshold, tail estimate, outcome
///   asymptotic-mean  epsilon = reference mean D sqrt((S-1)/(2 pi)), point = sample mean,
///                    normal-approximation CI at ci_level
struct ReportRow {
  std::string task_id;
  TaskKind kind = TaskKind::Tail;
  SourceKind family = SourceKind::Multinomial;
  std::uint64_t S = 0;
  std::optional<std::uint64_t> n;
  std::optional<double> delta;
  double D = 1.0;
  std::optional<double> threshold;
  std::optional<double> epsilon;
  double point = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::optional<Outcome> outcome;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct Report {
  int schema = kReportSchema;
  std::string tool = "l1conc";
  std::string version = L1CONC_VERSION;
  ExperimentConfig config;
  std::vector<ReportRow> rows;
  /// Wall-clock duration; only serialized when requested so that reports stay
  /// byte-identical across runs.
  std::optional<double> runtime_seconds;
};

enum class ReportFormat { Csv, Json };

std::optional<ReportFormat> parse_report_format(std::string_view text) noexcept;

/// Header of the CSV emission.
inline constexpr std::string_view kCsvHeader =
    "task_id,kind,family,S,n,delta,D,threshold,epsilon,point,ci_low,ci_high,outcome,trials,seed";

/// CSV or JSON text with stable field order; JSON is canonical (parse then
/// emit reproduces the input byte for byte).
std::string emit_report(const Report& report, ReportFormat format);

/// Reads a JSON report produced by emit_report. Throws ConfigError on schema problems.
Report parse_report_json(std::string_view text);

/// Requested plot data does not exist (unknown task or a task without a curve).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Whitespace-separated columns with a '#' header, one block per (S, n)
/// combination separated by blank lines.
///
///   tail             threshold point ci_low ci_high
///   quantiles        threshold cdf cdf_low cdf_high
///   falsify          delta point ci_low ci_high claimed_delta
///   asymptotic-mean  S mean expected
std::string emit_plot_data(const Report& report, std::string_view task_id);

}  // namespace l1conc
