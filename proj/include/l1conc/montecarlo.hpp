#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "l1conc/bounds.hpp"
#include "l1conc/rng.hpp"
#include "l1conc/simplex.hpp"
#include "l1conc/stats.hpp"

namespace l1conc {

enum class SourceKind { Multinomial, Dirichlet, Asymptotic };

/// Which scalar is recorded per finite-n trial.
enum class Statistic {
  L1,        ///< ||phat - p||_1
  Zn,        ///< (D/2) ||phat - p||_1
  ScaledZn,  ///< sqrt(n) (D/2) ||phat - p||_1, comparable with Z_S
};

std::string_view to_string(SourceKind kind) noexcept;
std::optional<SourceKind> parse_source_kind(std::string_view text) noexcept;
std::string_view to_string(Statistic statistic) noexcept;
std::optional<Statistic> parse_statistic(std::string_view text) noexcept;

/// Describes the random variable whose distribution is being estimated.
///
/// Multinomial: phat ~ Multinomial(n, p) / n. Dirichlet: phat ~ Dirichlet(n p).
/// Asymptotic: the Z_S limit for uniform p (n and statistic are ignored).
struct SampleSource {
  SourceKind kind = SourceKind::Multinomial;
  std::uint64_t S = 2;
  std::uint64_t n = 1;
  double D = 1.0;
  Statistic statistic = Statistic::L1;
  /// Empty means uniform over S outcomes.
  std::vector<double> p;
};

/// Throws ValidationError on inconsistent fields.
void validate(const SampleSource& source);

/// Per-worker sampler; trial value is a pure function of the StreamKey.
class TrialSampler {
 public:
  explicit TrialSampler(const SampleSource& source);
  ~TrialSampler();
  TrialSampler(TrialSampler&&) noexcept;
  TrialSampler& operator=(TrialSampler&&) noexcept;

  double operator()(StreamKey key);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Largest trial count the sample-buffer kernels accept (2 GiB of doubles).
inline constexpr std::uint64_t kMaxTrials = std::uint64_t{1} << 28;

/// Serial reference kernel: out[i] = statistic of trial i under seed.
std::vector<double> draw_samples_serial(const SampleSource& source, std::uint64_t trials, std::uint64_t seed);

/// OpenMP kernel; bitwise identical to draw_samples_serial for any worker count.
/// workers == 0 uses the OpenMP default. Both kernels throw CapacityError above kMaxTrials.
std::vector<double> draw_samples_parallel(const SampleSource& source, std::uint64_t trials, std::uint64_t seed,
                                          int workers);

/// Number of entries >= threshold, with serial and OpenMP variants.
std::uint64_t count_at_least_serial(std::span<const double> samples, double threshold);
std::uint64_t count_at_least_parallel(std::span<const double> samples, double threshold, int workers);

struct TailEstimate {
  double threshold = 0.0;
  std::uint64_t exceedance_count = 0;
  std::uint64_t trials = 0;
  double point = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;
  double ci_level = 0.95;
};

struct EstimateOptions {
  double ci_level = 0.95;
  int workers = 0;
};

TailEstimate tail_estimate_from_count(double threshold, std::uint64_t exceedances, std::uint64_t trials,
                                      double ci_level);

/// P(statistic >= threshold) with a Clopper-Pearson interval.
TailEstimate estimate_tail_probability(const SampleSource& source, double threshold, std::uint64_t trials,
                                       std::uint64_t master_seed, const EstimateOptions& options = {});

/// Same as estimate_tail_probability for several thresholds over one shared sample.
std::vector<TailEstimate> estimate_tail_curve(const SampleSource& source, std::span<const double> thresholds,
                                              std::uint64_t trials, std::uint64_t master_seed,
                                              const EstimateOptions& options = {});

/// Largest number of compositions exact_tail_small will enumerate.
inline constexpr std::uint64_t kMaxCompositions = 10'000'000;

/// C(n + S - 1, S - 1), saturating at kMaxCompositions + 1.
std::uint64_t composition_count(std::uint64_t n, std::uint64_t S);

/// Exact P(||c/n - p||_1 >= threshold) for c ~ Multinomial(n, p), by enumeration.
/// Throws CapacityError above kMaxCompositions outcomes.
double exact_tail_small(const SimplexVector& p, std::uint64_t n, double threshold);

/// exact_tail_small at every threshold with a single enumeration pass.
std::vector<double> exact_tail_curve(const SimplexVector& p, std::uint64_t n, std::span<const double> thresholds);

struct QuantileCurve {
  std::vector<double> grid;
  std::vector<double> cdf_estimates;
  double dkw_halfwidth = 0.0;
  double band_level = 0.05;
  std::uint64_t trials = 0;
};

/// Empirical CDF P(statistic <= t) on an ascending grid with a DKW band at level alpha.
QuantileCurve estimate_quantile_curve(const SampleSource& source, std::span<const double> grid,
                                      std::uint64_t trials, std::uint64_t master_seed, double band_level = 0.05,
                                      int workers = 0);

/// Order-statistic quantile: the ceil(q N)-th smallest sample (q in (0, 1]).
double empirical_quantile(std::span<const double> sorted_samples, double q);

enum class Outcome { Violated, Consistent, Inconclusive };

std::string_view to_string(Outcome outcome) noexcept;
std::optional<Outcome> parse_outcome(std::string_view text) noexcept;

/// Violated iff ci_low > delta; Consistent iff ci_high <= delta; otherwise Inconclusive.
Outcome classify(const TailEstimate& estimate, double claimed_delta) noexcept;

struct Verdict {
  BoundEvaluation bound;
  TailEstimate estimate;
  double claimed_delta = 0.0;
  Outcome outcome = Outcome::Inconclusive;
};

struct FalsifyOptions {
  SourceKind family = SourceKind::Multinomial;
  double ci_level = 0.95;
  int workers = 0;
  /// Empty means uniform p.
  std::vector<double> p;
};

/// Estimates P(||phat - p||_1 >= eps(spec)) and classifies it against spec.delta.
/// Requires trials >= 100.
Verdict falsify_bound(const BoundSpec& spec, std::uint64_t trials, std::uint64_t master_seed,
                      const FalsifyOptions& options = {});

}  // namespace l1conc
