#include <doctest.h>

#include <cmath>
#include <vector>

#include "l1conc/error.hpp"
#include "l1conc/rng.hpp"
#include "l1conc/stats.hpp"

using namespace l1conc;

namespace {

double binomial_pmf(int n, int k, double p) {
  if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return k == n ? 1.0 : 0.0;
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) + k * std::log(p) +
                  (n - k) * std::log1p(-p));
}

double upper_tail(int n, int k, double p) {
  double s = 0.0;
  for (int j = k; j <= n; ++j) s += binomial_pmf(n, j, p);
  return s;
}

double lower_tail(int n, int k, double p) {
  double s = 0.0;
  for (int j = 0; j <= k; ++j) s += binomial_pmf(n, j, p);
  return s;
}

// Bisection on the defining tail equations of the exact interval.
Interval clopper_pearson_oracle(int k, int n, double level) {
  const double a = 0.5 * (1.0 - level);
  Interval out{0.0, 1.0};
  if (k > 0) {
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (upper_tail(n, k, mid) < a ? lo : hi) = mid;
    }
    out.low = 0.5 * (lo + hi);
  }
  if (k < n) {
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (lower_tail(n, k, mid) > a ? lo : hi) = mid;
    }
    out.high = 0.5 * (lo + hi);
  }
  return out;
}

double ks_brute_force(const std::vector<double>& a, const std::vector<double>& b) {
  double best = 0.0;
  const auto ecdf = [](const std::vector<double>& s, double x) {
    double c = 0.0;
    for (double v : s) c += v <= x ? 1.0 : 0.0;
    return c / double(s.size());
  };
  for (const auto* s : {&a, &b}) {
    for (double x : *s) best = std::max(best, std::abs(ecdf(a, x) - ecdf(b, x)));
  }
  return best;
}

}  // namespace

TEST_CASE("clopper_pearson matches the tail-equation oracle") {
  for (int n : {1, 7, 20, 150}) {
    for (int k = 0; k <= n; k += (n > 20 ? 13 : 1)) {
      for (double level : {0.9, 0.95, 0.99}) {
        const auto got = clopper_pearson(k, n, level);
        const auto want = clopper_pearson_oracle(k, n, level);
        CAPTURE(n);
        CAPTURE(k);
        CHECK(got.low == doctest::Approx(want.low).epsilon(1e-9).scale(1.0));
        CHECK(got.high == doctest::Approx(want.high).epsilon(1e-9).scale(1.0));
        CHECK(got.low <= double(k) / n);
        CHECK(got.high >= double(k) / n);
      }
    }
  }
}

TEST_CASE("clopper_pearson edge cases") {
  const auto none = clopper_pearson(0, 100, 0.95);
  CHECK(none.low == 0.0);
  // Upper limit for zero successes: 1 - (alpha/2)^(1/n).
  CHECK(none.high == doctest::Approx(1.0 - std::pow(0.025, 0.01)).epsilon(1e-12));
  const auto all = clopper_pearson(100, 100, 0.95);
  CHECK(all.high == 1.0);
  CHECK(all.low == doctest::Approx(std::pow(0.025, 0.01)).epsilon(1e-12));
  CHECK_THROWS_AS(clopper_pearson(1, 0, 0.95), ValidationError);
  CHECK_THROWS_AS(clopper_pearson(5, 4, 0.95), ValidationError);
  CHECK_THROWS_AS(clopper_pearson(1, 4, 1.0), ValidationError);
}

TEST_CASE("dkw_halfwidth") {
  // sqrt(ln 40 / 20000)
  CHECK(dkw_halfwidth(10000, 0.05) == doctest::Approx(0.0135810152).epsilon(1e-9));
  CHECK(dkw_halfwidth(100000, 0.01) == doctest::Approx(std::sqrt(std::log(200.0) / 200000.0)).epsilon(1e-14));
  CHECK_THROWS_AS(dkw_halfwidth(0, 0.05), ValidationError);
  CHECK_THROWS_AS(dkw_halfwidth(10, 0.0), ValidationError);
}

TEST_CASE("ks_distance matches brute force, including ties") {
  StreamRng rng(StreamKey{1, 2});
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> a(1 + rng() % 60), b(1 + rng() % 60);
    const bool discrete = rep % 2 == 0;
    for (auto& x : a) x = discrete ? double(rng() % 5) : rng.normal();
    for (auto& x : b) x = discrete ? double(rng() % 6) : rng.normal() + 0.3;
    CHECK(ks_distance(a, b) == doctest::Approx(ks_brute_force(a, b)).epsilon(1e-15));
  }
  const std::vector<double> same = {1.0, 2.0, 3.0};
  CHECK(ks_distance(same, same) == 0.0);
  const std::vector<double> left = {0.0, 0.1};
  const std::vector<double> right = {5.0};
  CHECK(ks_distance(left, right) == 1.0);
}
