#include "l1conc/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "l1conc/error.hpp"

namespace l1conc {
namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;

// log(k!) - [(k + 1/2) log(k + 1) - (k + 1) + log(2 pi)/2]
double stirling_tail(double k) {
  if (k <= 9.0) {
    return std::lgamma(k + 1.0) - ((k + 0.5) * std::log(k + 1.0) - (k + 1.0) + kHalfLog2Pi);
  }
  const double kp1sq = (k + 1.0) * (k + 1.0);
  return (1.0 / 12.0 - (1.0 / 360.0 - 1.0 / 1260.0 / kp1sq) / kp1sq) / (k + 1.0);
}

// Sum of geometric gaps; expected cost O(n p). Requires 0 < p <= 0.5.
std::uint64_t binomial_inversion(std::uint64_t n, double p, StreamRng& rng) {
  const double log_q = std::log1p(-p);
  std::uint64_t successes = 0;
  double position = 0.0;
  const auto limit = static_cast<double>(n);
  while (true) {
    position += std::ceil(std::log(rng.uniform_open()) / log_q);
    if (position > limit) return successes;
    ++successes;
  }
}

// W. Hörmann, "The generation of binomial random variates", 1993. Requires
// n p >= 10 and p <= 0.5.
std::uint64_t binomial_btrs(std::uint64_t n, double p, StreamRng& rng) {
  const double count = static_cast<double>(n);
  const double spq = std::sqrt(count * p * (1.0 - p));
  const double b = 1.15 + 2.53 * spq;
  const double a = -0.0873 + 0.0248 * b + 0.01 * p;
  const double c = count * p + 0.5;
  const double v_r = 0.92 - 4.2 / b;
  const double r = p / (1.0 - p);
  const double alpha = (2.83 + 5.1 / b) * spq;
  const double m = std::floor((count + 1.0) * p);
  const double m_terms = (m + 0.5) * std::log((m + 1.0) / (r * (count - m + 1.0))) + stirling_tail(m) +
                         stirling_tail(count - m);

  while (true) {
    const double u = rng.uniform() - 0.5;
    double v = rng.uniform_open();
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2.0 * a / us + b) * u + c);
    if (k < 0.0 || k > count) continue;
    if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(k);

    v = std::log(v * alpha / (a / (us * us) + b));
    const double bound = m_terms + (count + 1.0) * std::log((count - m + 1.0) / (count - k + 1.0)) +
                         (k + 0.5) * std::log(r * (count - k + 1.0) / (k + 1.0)) - stirling_tail(k) -
                         stirling_tail(count - k);
    if (v <= bound) return static_cast<std::uint64_t>(k);
  }
}

}  // namespace

std::uint64_t sample_binomial(std::uint64_t n, double p, StreamRng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("binomial probability must lie in [0, 1]");
  if (n == 0 || p == 0.0) return 0;
  if (p == 1.0) return n;
  const bool flipped = p > 0.5;
  const double q = flipped ? 1.0 - p : p;
  const std::uint64_t k =
      static_cast<double>(n) * q < 10.0 ? binomial_inversion(n, q, rng) : binomial_btrs(n, q, rng);
  return flipped ? n - k : k;
}

double sample_log_gamma(double shape, StreamRng& rng) {
  if (!(shape > 0.0) || !std::isfinite(shape)) throw ValidationError("gamma shape must be positive");
  // Shapes below 1 use Gamma(a) = Gamma(a + 1) * U^(1/a), kept in log space.
  const double boosted = shape < 1.0 ? shape + 1.0 : shape;
  // Marsaglia & Tsang (2000).
  const double d = boosted - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  double log_value = 0.0;
  while (true) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform_open();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2 || std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
      log_value = std::log(d) + std::log(v);
      break;
    }
  }
  if (shape < 1.0) log_value += std::log(rng.uniform_open()) / shape;
  return log_value;
}

CountVector sample_multinomial(const SimplexVector& p, std::uint64_t n, StreamRng& rng) {
  std::vector<std::uint64_t> counts(p.size(), 0);
  std::uint64_t remaining = n;
  double remaining_mass = 1.0;
  for (std::size_t i = 0; i + 1 < p.size() && remaining > 0; ++i) {
    const double conditional = p[i] == 0.0 ? 0.0 : (p[i] >= remaining_mass ? 1.0 : p[i] / remaining_mass);
    counts[i] = sample_binomial(remaining, conditional, rng);
    remaining -= counts[i];
    remaining_mass -= p[i];
  }
  counts.back() += remaining;
  return CountVector(std::move(counts));
}

CountVector sample_multinomial(const SimplexVector& p, std::uint64_t n, StreamKey key) {
  StreamRng rng(key);
  return sample_multinomial(p, n, rng);
}

SimplexVector empirical_frequency(const CountVector& counts) {
  if (counts.total() == 0) throw ValidationError("empirical frequency is undefined for zero trials");
  const auto n = static_cast<double>(counts.total());
  std::vector<double> freq(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) freq[i] = static_cast<double>(counts[i]) / n;
  return SimplexVector(std::move(freq));
}

SimplexVector sample_dirichlet(std::span<const double> alpha, StreamRng& rng) {
  if (alpha.empty()) throw ValidationError("dirichlet parameter vector is empty");
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (!(alpha[i] > 0.0) || !std::isfinite(alpha[i])) {
      throw ValidationError("dirichlet parameter " + std::to_string(i) + " must be positive");
    }
  }
  std::vector<double> logs(alpha.size());
  for (std::size_t i = 0; i < alpha.size(); ++i) logs[i] = sample_log_gamma(alpha[i], rng);

  const double top = *std::max_element(logs.begin(), logs.end());
  double total = 0.0;
  for (auto& x : logs) {
    x = std::exp(x - top);
    total += x;
  }
  for (auto& x : logs) x /= total;
  return SimplexVector(std::move(logs));
}

SimplexVector sample_dirichlet(std::span<const double> alpha, StreamKey key) {
  StreamRng rng(key);
  return sample_dirichlet(alpha, rng);
}

std::vector<double> sample_standard_normal_vector(std::size_t dim, StreamKey key) {
  if (dim == 0) throw ValidationError("normal vector dimension must be at least 1");
  StreamRng rng(key);
  std::vector<double> out(dim);
  for (auto& x : out) x = rng.normal();
  return out;
}

}  // namespace l1conc
