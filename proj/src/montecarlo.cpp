#include "l1conc/montecarlo.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "l1conc/asymptotic.hpp"
#include "l1conc/deviation.hpp"
#include "l1conc/distributions.hpp"
#include "l1conc/error.hpp"

namespace l1conc {

std::string_view to_string(SourceKind kind) noexcept {
  switch (kind) {
    case SourceKind::Multinomial: return "multinomial";
    case SourceKind::Dirichlet: return "dirichlet";
    case SourceKind::Asymptotic: return "asymptotic";
  }
  return "unknown";
}

std::optional<SourceKind> parse_source_kind(std::string_view text) noexcept {
  if (text == "multinomial") return SourceKind::Multinomial;
  if (text == "dirichlet") return SourceKind::Dirichlet;
  if (text == "asymptotic") return SourceKind::Asymptotic;
  return std::nullopt;
}

std::string_view to_string(Statistic statistic) noexcept {
  switch (statistic) {
    case Statistic::L1: return "l1";
    case Statistic::Zn: return "zn";
    case Statistic::ScaledZn: return "scaled-zn";
  }
  return "unknown";
}

std::optional<Statistic> parse_statistic(std::string_view text) noexcept {
  if (text == "l1") return Statistic::L1;
  if (text == "zn") return Statistic::Zn;
  if (text == "scaled-zn") return Statistic::ScaledZn;
  return std::nullopt;
}

void validate(const SampleSource& source) {
  if (!(source.D > 0.0) || !std::isfinite(source.D)) throw ValidationError("D must be positive and finite");
  if (source.kind == SourceKind::Asymptotic) {
    if (source.S < 2) throw ValidationError("asymptotic source requires S >= 2");
    if (!source.p.empty()) throw ValidationError("asymptotic source is defined for uniform p only");
    return;
  }
  if (source.S < 1) throw ValidationError("source requires S >= 1");
  if (source.n < 1) throw ValidationError("finite-n source requires n >= 1");
  if (!source.p.empty()) {
    if (source.p.size() != source.S) throw ValidationError("p has " + std::to_string(source.p.size()) +
                                                           " entries but S = " + std::to_string(source.S));
    validate_simplex(source.p);
  }
}

struct TrialSampler::Impl {
  SourceKind kind;
  Statistic statistic;
  double D;
  double n;
  SimplexVector p;
  std::vector<double> alpha;
  std::optional<LimitSampler> limit;

  explicit Impl(const SampleSource& s)
      : kind(s.kind),
        statistic(s.statistic),
        D(s.D),
        n(static_cast<double>(s.n)),
        p(s.p.empty() ? SimplexVector::uniform(s.S) : SimplexVector(s.p)) {
    if (kind == SourceKind::Asymptotic) limit.emplace(s.S, s.D);
    if (kind == SourceKind::Dirichlet) {
      // Zero-probability outcomes stay at zero; they are dropped from the Dirichlet draw.
      for (double pi : p.entries()) {
        if (pi > 0.0) alpha.push_back(n * pi);
      }
    }
  }

  double finish(double l1) const {
    switch (statistic) {
      case Statistic::L1: return l1;
      case Statistic::Zn: return 0.5 * D * l1;
      case Statistic::ScaledZn: return std::sqrt(n) * 0.5 * D * l1;
    }
    return l1;
  }

  double draw(StreamKey key) {
    switch (kind) {
      case SourceKind::Asymptotic: return (*limit)(key);
      case SourceKind::Multinomial: {
        StreamRng rng(key);
        const auto counts = sample_multinomial(p, static_cast<std::uint64_t>(n), rng);
        return finish(l1_deviation(empirical_frequency(counts), p));
      }
      case SourceKind::Dirichlet: {
        StreamRng rng(key);
        const auto draw = sample_dirichlet(alpha, rng);
        double l1 = 0.0;
        std::size_t j = 0;
        for (double pi : p.entries()) {
          if (pi > 0.0) l1 += std::abs(draw[j++] - pi);
        }
        return finish(l1);
      }
    }
    return 0.0;
  }
};

TrialSampler::TrialSampler(const SampleSource& source) {
  validate(source);
  impl_ = std::make_unique<Impl>(source);
}
TrialSampler::~TrialSampler() = default;
TrialSampler::TrialSampler(TrialSampler&&) noexcept = default;
TrialSampler& TrialSampler::operator=(TrialSampler&&) noexcept = default;

double TrialSampler::operator()(StreamKey key) { return impl_->draw(key); }

namespace {

void check_trial_capacity(std::uint64_t trials) {
  if (trials > kMaxTrials) {
    throw CapacityError("trial count " + std::to_string(trials) + " exceeds the sample buffer limit " +
                        std::to_string(kMaxTrials));
  }
}

}  // namespace

std::vector<double> draw_samples_serial(const SampleSource& source, std::uint64_t trials, std::uint64_t seed) {
  check_trial_capacity(trials);
  TrialSampler sampler(source);
  std::vector<double> out(trials);
  for (std::uint64_t i = 0; i < trials; ++i) out[i] = sampler(StreamKey{seed, i});
  return out;
}

std::vector<double> draw_samples_parallel(const SampleSource& source, std::uint64_t trials, std::uint64_t seed,
                                          int workers) {
  validate(source);
  check_trial_capacity(trials);
  std::vector<double> out(trials);
  const int threads = workers > 0 ? workers : omp_get_max_threads();
  const auto count = static_cast<std::int64_t>(trials);
#pragma omp parallel num_threads(threads)
  {
    TrialSampler sampler(source);
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < count; ++i) {
      const auto index = static_cast<std::uint64_t>(i);
      out[index] = sampler(StreamKey{seed, index});
    }
  }
  return out;
}

std::uint64_t count_at_least_serial(std::span<const double> samples, double threshold) {
  std::uint64_t count = 0;
  for (double x : samples) count += x >= threshold ? 1 : 0;
  return count;
}

std::uint64_t count_at_least_parallel(std::span<const double> samples, double threshold, int workers) {
  const int threads = workers > 0 ? workers : omp_get_max_threads();
  const auto size = static_cast<std::int64_t>(samples.size());
  std::uint64_t count = 0;
#pragma omp parallel for num_threads(threads) schedule(static) reduction(+ : count)
  for (std::int64_t i = 0; i < size; ++i) count += samples[static_cast<std::size_t>(i)] >= threshold ? 1 : 0;
  return count;
}

TailEstimate tail_estimate_from_count(double threshold, std::uint64_t exceedances, std::uint64_t trials,
                                      double ci_level) {
  TailEstimate est;
  est.threshold = threshold;
  est.exceedance_count = exceedances;
  est.trials = trials;
  est.point = static_cast<double>(exceedances) / static_cast<double>(trials);
  const Interval ci = clopper_pearson(exceedances, trials, ci_level);
  est.ci_low = std::min(ci.low, est.point);
  est.ci_high = std::max(ci.high, est.point);
  est.ci_level = ci_level;
  return est;
}

std::vector<TailEstimate> estimate_tail_curve(const SampleSource& source, std::span<const double> thresholds,
                                              std::uint64_t trials, std::uint64_t master_seed,
                                              const EstimateOptions& options) {
  if (trials == 0) throw ValidationError("trials must be at least 1");
  if (!(options.ci_level > 0.0 && options.ci_level < 1.0)) throw ValidationError("ci_level must lie in (0, 1)");
  auto samples = draw_samples_parallel(source, trials, master_seed, options.workers);
  std::sort(samples.begin(), samples.end());
  std::vector<TailEstimate> out;
  out.reserve(thresholds.size());
  for (double t : thresholds) {
    const auto below = static_cast<std::uint64_t>(std::lower_bound(samples.begin(), samples.end(), t) - samples.begin());
    out.push_back(tail_estimate_from_count(t, trials - below, trials, options.ci_level));
  }
  return out;
}

TailEstimate estimate_tail_probability(const SampleSource& source, double threshold, std::uint64_t trials,
                                       std::uint64_t master_seed, const EstimateOptions& options) {
  const double thresholds[] = {threshold};
  return estimate_tail_curve(source, thresholds, trials, master_seed, options).front();
}

std::uint64_t composition_count(std::uint64_t n, std::uint64_t S) {
  if (S == 0) return 0;
  // C(n + k, k) with k = S - 1, built as a running product of exact binomials.
  const std::uint64_t k = S - 1;
  std::uint64_t value = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // C(n + i, i) >= n + i, and value * (n + i) stays far below 2^64 past this check.
    if (n + i > kMaxCompositions) return kMaxCompositions + 1;
    value = value * (n + i) / i;
    if (value > kMaxCompositions) return kMaxCompositions + 1;
  }
  return value;
}

std::vector<double> exact_tail_curve(const SimplexVector& p, std::uint64_t n, std::span<const double> thresholds) {
  const std::size_t S = p.size();
  if (composition_count(n, S) > kMaxCompositions) {
    throw CapacityError("exact enumeration needs more than " + std::to_string(kMaxCompositions) + " outcomes");
  }
  if (n == 0) throw ValidationError("exact tail requires n >= 1");

  std::vector<double> log_factorial(n + 1);
  for (std::uint64_t k = 0; k <= n; ++k) log_factorial[k] = std::lgamma(static_cast<double>(k) + 1.0);
  std::vector<double> log_p(S);
  for (std::size_t i = 0; i < S; ++i) log_p[i] = p[i] > 0.0 ? std::log(p[i]) : -std::numeric_limits<double>::infinity();

  std::vector<double> mass(thresholds.size(), 0.0);
  std::vector<double> carry(thresholds.size(), 0.0);
  std::vector<std::uint64_t> counts(S, 0);
  std::vector<double> freq(S, 0.0);
  const double total = static_cast<double>(n);
  counts[0] = n;

  // Compositions of n into S parts; successor rule from Nijenhuis & Wilf (NEXCOM).
  while (true) {
    double log_pmf = log_factorial[n];
    bool possible = true;
    for (std::size_t i = 0; i < S; ++i) {
      if (counts[i] == 0) continue;
      if (p[i] == 0.0) {
        possible = false;
        break;
      }
      log_pmf += static_cast<double>(counts[i]) * log_p[i] - log_factorial[counts[i]];
    }
    if (possible) {
      const double pmf = std::exp(log_pmf);
      for (std::size_t i = 0; i < S; ++i) freq[i] = static_cast<double>(counts[i]) / total;
      const double dev = l1_deviation(freq, p.entries());
      for (std::size_t t = 0; t < thresholds.size(); ++t) {
        if (dev >= thresholds[t]) {
          const double sum = mass[t] + pmf;
          carry[t] += std::abs(mass[t]) >= pmf ? (mass[t] - sum) + pmf : (pmf - sum) + mass[t];
          mass[t] = sum;
        }
      }
    }
    if (counts[S - 1] == n) break;
    std::size_t h = 0;
    while (counts[h] == 0) ++h;
    const std::uint64_t value = counts[h];
    counts[h] = 0;
    counts[0] = value - 1;
    ++counts[h + 1];
  }
  for (std::size_t t = 0; t < thresholds.size(); ++t) mass[t] = std::min(1.0, mass[t] + carry[t]);
  return mass;
}

double exact_tail_small(const SimplexVector& p, std::uint64_t n, double threshold) {
  const double thresholds[] = {threshold};
  return exact_tail_curve(p, n, thresholds).front();
}

double empirical_quantile(std::span<const double> sorted_samples, double q) {
  if (sorted_samples.empty()) throw ValidationError("quantile of an empty sample");
  if (!(q > 0.0 && q <= 1.0)) throw ValidationError("quantile level must lie in (0, 1]");
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(sorted_samples.size())));
  return sorted_samples[std::max<std::size_t>(rank, 1) - 1];
}

QuantileCurve estimate_quantile_curve(const SampleSource& source, std::span<const double> grid,
                                      std::uint64_t trials, std::uint64_t master_seed, double band_level,
                                      int workers) {
  if (trials == 0) throw ValidationError("trials must be at least 1");
  if (!std::is_sorted(grid.begin(), grid.end())) throw ValidationError("quantile grid must be ascending");
  QuantileCurve curve;
  curve.grid.assign(grid.begin(), grid.end());
  curve.dkw_halfwidth = dkw_halfwidth(trials, band_level);
  curve.band_level = band_level;
  curve.trials = trials;

  auto samples = draw_samples_parallel(source, trials, master_seed, workers);
  std::sort(samples.begin(), samples.end());
  curve.cdf_estimates.reserve(grid.size());
  for (double t : grid) {
    const auto at_most = std::upper_bound(samples.begin(), samples.end(), t) - samples.begin();
    curve.cdf_estimates.push_back(static_cast<double>(at_most) / static_cast<double>(trials));
  }
  return curve;
}

std::string_view to_string(Outcome outcome) noexcept {
  switch (outcome) {
    case Outcome::Violated: return "Violated";
    case Outcome::Consistent: return "Consistent";
    case Outcome::Inconclusive: return "Inconclusive";
  }
  return "unknown";
}

std::optional<Outcome> parse_outcome(std::string_view text) noexcept {
  if (text == "Violated") return Outcome::Violated;
  if (text == "Consistent") return Outcome::Consistent;
  if (text == "Inconclusive") return Outcome::Inconclusive;
  return std::nullopt;
}

Outcome classify(const TailEstimate& estimate, double claimed_delta) noexcept {
  if (estimate.ci_low > claimed_delta) return Outcome::Violated;
  if (estimate.ci_high <= claimed_delta) return Outcome::Consistent;
  return Outcome::Inconclusive;
}

Verdict falsify_bound(const BoundSpec& spec, std::uint64_t trials, std::uint64_t master_seed,
                      const FalsifyOptions& options) {
  if (trials < 100) throw ValidationError("falsification needs at least 100 trials");
  if (options.family == SourceKind::Asymptotic) {
    throw ValidationError("bounds are stated for finite n; use the multinomial or dirichlet family");
  }
  Verdict verdict;
  verdict.bound = evaluate(spec);
  verdict.claimed_delta = spec.delta;

  SampleSource source;
  source.kind = options.family;
  source.S = spec.S;
  source.n = spec.n;
  source.statistic = Statistic::L1;
  source.p = options.p;
  verdict.estimate = estimate_tail_probability(source, verdict.bound.epsilon, trials, master_seed,
                                               EstimateOptions{options.ci_level, options.workers});
  verdict.outcome = classify(verdict.estimate, spec.delta);
  return verdict;
}

}  // namespace l1conc
