#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "l1conc/asymptotic.hpp"
#include "l1conc/error.hpp"

using namespace l1conc;

namespace {

double max_abs_diff_from_identity(const SquareMatrix& m) {
  double worst = 0.0;
  for (std::size_t i = 0; i < m.size; ++i) {
    for (std::size_t j = 0; j < m.size; ++j) worst = std::max(worst, std::abs(m(i, j) - (i == j ? 1.0 : 0.0)));
  }
  return worst;
}

// Dense U^T w, written out directly as the oracle for the O(S) transform.
std::vector<double> dense_transpose_apply(const SquareMatrix& U, const std::vector<double>& w) {
  std::vector<double> out(U.size, 0.0);
  for (std::size_t i = 0; i < U.size; ++i) {
    for (std::size_t j = 0; j < U.size; ++j) out[j] += U(i, j) * w[i];
  }
  return out;
}

}  // namespace

TEST_CASE("limit_covariance") {
  const auto two = limit_covariance(2);
  CHECK(two.matrix.values == std::vector<double>{1.0, -1.0, -1.0, 1.0});
  const auto three = limit_covariance(3);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) CHECK(three.matrix(i, j) == (i == j ? 1.0 : -0.5));
  }
  for (std::size_t S : {2u, 5u, 17u, 64u}) {
    const auto cov = limit_covariance(S);
    for (std::size_t i = 0; i < S; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < S; ++j) {
        row += cov.matrix(i, j);
        CHECK(cov.matrix(i, j) == cov.matrix(j, i));
      }
      CHECK(std::abs(row) < 1e-12);
    }
  }
  CHECK_THROWS_AS(limit_covariance(1), ValidationError);
}

TEST_CASE("helmert_diagonalizer") {
  SUBCASE("S = 2 by hand") {
    const auto h = helmert_diagonalizer(2);
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(h.U(0, 0) == doctest::Approx(r).epsilon(1e-15));
    CHECK(h.U(0, 1) == doctest::Approx(-r).epsilon(1e-15));
    CHECK(h.U(1, 0) == doctest::Approx(r).epsilon(1e-15));
    CHECK(h.U(1, 1) == doctest::Approx(r).epsilon(1e-15));
  }
  SUBCASE("orthonormal and diagonalizing") {
    for (std::size_t S : {2u, 3u, 10u, 33u, 128u}) {
      const auto h = helmert_diagonalizer(S);
      CHECK(max_abs_diff_from_identity(multiply(transpose(h.U), h.U)) <= 1e-12);
      const auto d = multiply(multiply(h.U, limit_covariance(S).matrix), transpose(h.U));
      const double big = double(S) / double(S - 1);
      double worst = 0.0;
      for (std::size_t i = 0; i < S; ++i) {
        for (std::size_t j = 0; j < S; ++j) {
          const double expected = (i == j && i + 1 < S) ? big : 0.0;
          worst = std::max(worst, std::abs(d(i, j) - expected));
        }
      }
      CAPTURE(S);
      CHECK(worst <= 1e-10);
    }
  }
  CHECK_THROWS_AS(helmert_diagonalizer(1), ValidationError);
}

TEST_CASE("O(S) helmert products match dense products") {
  StreamRng rng(StreamKey{3, 3});
  for (std::size_t S : {2u, 3u, 7u, 50u, 257u}) {
    const auto dense = helmert_diagonalizer(S);
    const HelmertTransform fast(S);
    std::vector<double> w(S);
    for (auto& x : w) x = rng.normal();
    std::vector<double> out(S);
    fast.apply_transpose(w, out);
    const auto expected = dense_transpose_apply(dense.U, w);
    for (std::size_t i = 0; i < S; ++i) CHECK(out[i] == doctest::Approx(expected[i]).epsilon(1e-12));

    std::vector<double> back(S);
    fast.apply(out, back);
    for (std::size_t i = 0; i < S; ++i) CHECK(back[i] == doctest::Approx(w[i]).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("sample_limit_Y") {
  SUBCASE("W = 0 gives Y = 0") {
    const HelmertTransform h(6);
    const std::vector<double> w(6, 0.0);
    for (double y : limit_Y_from_whitened(h, w)) CHECK(y == 0.0);
  }
  SUBCASE("S = 2 hand computation") {
    const HelmertTransform h(2);
    const std::vector<double> w = {1.7, 0.0};
    const auto y = limit_Y_from_whitened(h, w);
    // U^T (w, 0) = (w, -w)/sqrt(2); times sqrt(2) gives (w, -w).
    CHECK(y[0] == doctest::Approx(1.7).epsilon(1e-15));
    CHECK(y[1] == doctest::Approx(-1.7).epsilon(1e-15));
  }
  SUBCASE("null direction") {
    for (std::uint64_t i = 0; i < 2000; ++i) {
      const auto y = sample_limit_Y(2 + i % 300, StreamKey{4, i});
      double sum = 0.0;
      for (double v : y) sum += v;
      REQUIRE(std::abs(sum) <= 1e-10);
    }
  }
  SUBCASE("S = 5 covariance matches the limit covariance") {
    constexpr int kTrials = 1000000;
    constexpr std::size_t S = 5;
    const HelmertTransform h(S);
    std::vector<double> sums(S * S, 0.0);
    std::vector<double> w(S);
    for (int t = 0; t < kTrials; ++t) {
      StreamRng rng(StreamKey{5, std::uint64_t(t)});
      for (std::size_t i = 0; i + 1 < S; ++i) w[i] = rng.normal();
      w[S - 1] = 0.0;
      const auto y = limit_Y_from_whitened(h, w);
      for (std::size_t i = 0; i < S; ++i) {
        for (std::size_t j = 0; j < S; ++j) sums[i * S + j] += y[i] * y[j];
      }
    }
    const auto cov = limit_covariance(S);
    for (std::size_t k = 0; k < S * S; ++k) CHECK(std::abs(sums[k] / kTrials - cov.matrix.values[k]) < 0.01);
  }
}

TEST_CASE("sample_Z_S") {
  SUBCASE("W = 0 gives z = 0") {
    const HelmertTransform h(4);
    CHECK(z_from_whitened(h, std::vector<double>(4, 0.0), 1.0) == 0.0);
  }
  SUBCASE("S = 2, W = (2, 0) gives z = 1") {
    const HelmertTransform h(2);
    const std::vector<double> w = {2.0, 0.0};
    CHECK(z_from_whitened(h, w, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(z_from_limit_Y(limit_Y_from_whitened(h, w), 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("both representations agree and scale with D") {
    for (std::uint64_t i = 0; i < 1000; ++i) {
      const std::size_t S = 2 + i % 60;
      const double D = 0.5 + double(i % 7);
      const auto w = sample_whitened(S, StreamKey{6, i});
      const HelmertTransform h(S);
      const double via_w = z_from_whitened(h, w, D);
      const double via_y = z_from_limit_Y(limit_Y_from_whitened(h, w), D);
      REQUIRE(std::abs(via_w - via_y) <= 1e-12 * std::max(1.0, via_w));
      REQUIRE(sample_Z_S(S, D, StreamKey{6, i}).z == via_w);
    }
  }
  SUBCASE("S = 10 mean near sqrt(9/(2 pi))") {
    constexpr int kTrials = 1000000;
    LimitSampler sampler(10, 1.0);
    double sum = 0.0;
    double squares = 0.0;
    for (int i = 0; i < kTrials; ++i) {
      const double z = sampler(StreamKey{7, std::uint64_t(i)});
      sum += z;
      squares += z * z;
    }
    const double mean = sum / kTrials;
    const double se = std::sqrt((squares / kTrials - mean * mean) / kTrials);
    CHECK(std::abs(mean - 1.196827) <= 3.0 * se);
  }
}

TEST_CASE("marginals of Y are standard normal with half-normal positive part") {
  constexpr int kTrials = 1000000;
  double sum = 0.0;
  double squares = 0.0;
  double positive = 0.0;
  double positive_sq = 0.0;
  const HelmertTransform h(8);
  std::vector<double> w(8);
  for (int t = 0; t < kTrials; ++t) {
    StreamRng rng(StreamKey{8, std::uint64_t(t)});
    for (int i = 0; i < 7; ++i) w[i] = rng.normal();
    w[7] = 0.0;
    const double y = limit_Y_from_whitened(h, w)[3];
    sum += y;
    squares += y * y;
    const double plus = std::max(y, 0.0);
    positive += plus;
    positive_sq += plus * plus;
  }
  const double mean = sum / kTrials;
  CHECK(std::abs(mean) <= 3.0 / std::sqrt(double(kTrials)));
  CHECK(std::abs(squares / kTrials - mean * mean - 1.0) <= 0.01);
  const double plus_mean = positive / kTrials;
  const double plus_se = std::sqrt((positive_sq / kTrials - plus_mean * plus_mean) / kTrials);
  CHECK(std::abs(plus_mean - 1.0 / std::sqrt(2.0 * std::numbers::pi)) <= 3.0 * plus_se);
}

TEST_CASE("g(w) = e^T (U^T w)^+ / sqrt(S) is 1-Lipschitz") {
  StreamRng rng(StreamKey{9, 0});
  for (int rep = 0; rep < 5000; ++rep) {
    const std::size_t S = 2 + rng() % 100;
    const HelmertTransform h(S);
    std::vector<double> x(S), y(S);
    const double spread = rep % 2 == 0 ? 1.0 : 1e-3;
    double dist2 = 0.0;
    for (std::size_t i = 0; i < S; ++i) {
      x[i] = rng.normal();
      y[i] = x[i] + spread * rng.normal();
      dist2 += (x[i] - y[i]) * (x[i] - y[i]);
    }
    REQUIRE(std::abs(z_from_whitened(h, x, 1.0) - z_from_whitened(h, y, 1.0)) <= std::sqrt(dist2) * (1.0 + 1e-12));
  }
}

TEST_CASE("expected_Z_S") {
  CHECK(expected_Z_S(2) == doctest::Approx(0.3989422804).epsilon(1e-9));
  CHECK(expected_Z_S(10) == doctest::Approx(1.1968268412).epsilon(1e-9));
  CHECK(expected_Z_S(50) == doctest::Approx(2.7925959628).epsilon(1e-9));
  CHECK_THROWS_AS(expected_Z_S(1), ValidationError);
}

TEST_CASE("anticoncentration_threshold") {
  // sqrt(98/pi) - sqrt(2 ln 40)
  CHECK(anticoncentration_threshold(50, 0.05) == doctest::Approx(2.8689888941).epsilon(1e-9));
  CHECK(anticoncentration_threshold(2, 0.05) == doctest::Approx(-1.9183184707).epsilon(1e-9));
  CHECK(anticoncentration_threshold(50, 1.0 - 1e-12) == doctest::Approx(4.4077819031).epsilon(1e-9));
  CHECK_THROWS_AS(anticoncentration_threshold(50, 0.0), DomainError);
  CHECK_THROWS_AS(anticoncentration_threshold(50, 1.0), DomainError);
}

TEST_CASE("anticoncentration threshold sits on the l1 scale") {
  for (std::size_t S : {10u, 50u, 200u, 1000u}) {
    CHECK(std::sqrt(2.0 * double(S - 1) / std::numbers::pi) ==
          doctest::Approx(kAnticoncentrationScale * expected_Z_S(S)).epsilon(1e-14));
  }
  // With D = 1 the threshold lies above the mean, so it cannot be a lower quantile.
  CHECK(anticoncentration_threshold(50, 0.05) > expected_Z_S(50));
  CHECK(anticoncentration_threshold(200, 0.05) > expected_Z_S(200));
}

TEST_CASE("anticoncentration holds empirically") {
  constexpr int kTrials = 200000;
  for (std::size_t S : {10u, 50u, 200u}) {
    LimitSampler sampler(S, kAnticoncentrationScale);
    std::vector<double> z(kTrials);
    for (int i = 0; i < kTrials; ++i) z[i] = sampler(StreamKey{10 + S, std::uint64_t(i)});
    for (double delta : {0.1, 0.05, 0.01}) {
      const double t = anticoncentration_threshold(S, delta);
      const double frac =
          double(std::count_if(z.begin(), z.end(), [t](double v) { return v >= t; })) / kTrials;
      CAPTURE(S);
      CAPTURE(delta);
      CHECK(frac >= 1.0 - delta - 3.0 * std::sqrt(delta * (1.0 - delta) / kTrials));
    }
  }
}

TEST_CASE("gaussian_lipschitz_tail") {
  CHECK(gaussian_lipschitz_tail(0.0) == 2.0);
  CHECK(gaussian_lipschitz_tail(std::sqrt(2.0 * std::log(2.0 / 0.05))) == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(gaussian_lipschitz_tail(2.0) == doctest::Approx(0.2706705665).epsilon(1e-9));
  CHECK_THROWS_AS(gaussian_lipschitz_tail(-0.1), DomainError);
}
