#pragma once

#include <cstdint>
#include <span>

namespace l1conc {

struct Interval {
  double low = 0.0;
  double high = 1.0;
};

/// Two-sided exact (Clopper-Pearson) interval for a binomial proportion at
/// confidence `level`, from beta quantiles. trials >= 1, successes <= trials.
Interval clopper_pearson(std::uint64_t successes, std::uint64_t trials, double level);

/// Dvoretzky-Kiefer-Wolfowitz uniform half-width sqrt(ln(2/alpha) / (2 trials)).
double dkw_halfwidth(std::uint64_t trials, double alpha);

/// Two-sample Kolmogorov-Smirnov statistic sup_x |F_a(x) - F_b(x)|.
/// Inputs must be sorted ascending.
double ks_distance_sorted(std::span<const double> a, std::span<const double> b);

/// Two-sample Kolmogorov-Smirnov statistic; sorts copies of the inputs.
double ks_distance(std::span<const double> a, std::span<const double> b);

}  // namespace l1conc
