#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "l1conc/rng.hpp"

namespace l1conc {

// Large-n limit of sqrt(n) Z_n for the uniform distribution on S outcomes.
//
// The normalized count vector converges to Y ~ N(0, Sigma) with
// Sigma = I - (ee^T - I)/(S-1), a rank S-1 covariance whose null direction is
// e. With the Helmert matrix U, W = sqrt((S-1)/S) U Y has S-1 i.i.d. N(0,1)
// coordinates and a zero last coordinate, so Y is sampled from W and
//   Z_S = D sqrt((S-1)/S^2) ||Y^+||_1 = D e^T (U^T W)^+ / sqrt(S).

/// Dense row-major square matrix.
struct SquareMatrix {
  std::size_t size = 0;
  std::vector<double> values;

  double operator()(std::size_t row, std::size_t col) const { return values[row * size + col]; }
  double& operator()(std::size_t row, std::size_t col) { return values[row * size + col]; }
};

SquareMatrix multiply(const SquareMatrix& a, const SquareMatrix& b);
SquareMatrix transpose(const SquareMatrix& a);

struct LimitCovariance {
  std::size_t S = 0;
  SquareMatrix matrix;
};

/// 1 on the diagonal, -1/(S-1) elsewhere. S >= 2.
LimitCovariance limit_covariance(std::size_t S);

struct OrthogonalDiagonalizer {
  std::size_t S = 0;
  SquareMatrix U;
};

/// Dense Helmert matrix. Row k (1-based, k < S) holds 1/sqrt(k(k+1)) in its
/// first k columns and -k/sqrt(k(k+1)) in column k+1; row S is e/sqrt(S).
OrthogonalDiagonalizer helmert_diagonalizer(std::size_t S);

/// O(S) products with the Helmert matrix without materializing it.
class HelmertTransform {
 public:
  explicit HelmertTransform(std::size_t S);

  std::size_t size() const noexcept { return scale_.size() + 1; }

  /// out = U^T w.
  void apply_transpose(std::span<const double> w, std::span<double> out) const;
  /// out = U y.
  void apply(std::span<const double> y, std::span<double> out) const;

 private:
  // scale_[k-1] = 1/sqrt(k(k+1)) for k = 1..S-1
  std::vector<double> scale_;
  double last_row_ = 0.0;
};

/// Y = sqrt(S/(S-1)) U^T W. `w` has length S; its last coordinate is expected to be 0.
std::vector<double> limit_Y_from_whitened(const HelmertTransform& helmert, std::span<const double> w);

/// Draws W (S-1 standard normals, last coordinate 0) from `key` and maps it to Y.
std::vector<double> sample_limit_Y(std::size_t S, StreamKey key);

/// The whitened vector W used by sample_limit_Y / sample_Z_S for `key`.
std::vector<double> sample_whitened(std::size_t S, StreamKey key);

/// D sqrt((S-1)/S^2) sum_i max(Y_i, 0).
double z_from_limit_Y(std::span<const double> y, double D);

/// D e^T (U^T W)^+ / sqrt(S). With D = 1 this is the 1-Lipschitz map g(W).
double z_from_whitened(const HelmertTransform& helmert, std::span<const double> w, double D);

struct LimitSample {
  double z = 0.0;
  std::size_t S = 0;
  double D = 1.0;
};

/// Reusable Z_S sampler holding scratch space; one instance per worker.
class LimitSampler {
 public:
  LimitSampler(std::size_t S, double D);

  double operator()(StreamKey key);

  std::size_t S() const noexcept { return helmert_.size(); }
  double D() const noexcept { return D_; }

 private:
  HelmertTransform helmert_;
  double D_;
  std::vector<double> w_;
  std::vector<double> projected_;
};

LimitSample sample_Z_S(std::size_t S, double D, StreamKey key);

/// E[Z_S] at D = 1: sqrt((S-1) / (2 pi)).
double expected_Z_S(std::size_t S);

/// sqrt(2(S-1)/pi) - sqrt(2 ln(2/delta)), a lower (1 - delta)-quantile bound.
///
/// The leading term is E[Z_S] at D = 2, i.e. the limit of sqrt(n) ||phat - p||_1.
/// At D = 1 the mean is half as large and the threshold exceeds it for S >= 50,
/// so compare against Z_S sampled with D = 2. Negative values are returned
/// unchanged. delta must lie in (0, 1).
inline constexpr double kAnticoncentrationScale = 2.0;
double anticoncentration_threshold(std::size_t S, double delta);

/// 2 exp(-t^2/2): bound on P(|g(W) - E g(W)| >= t) for 1-Lipschitz g. t >= 0.
double gaussian_lipschitz_tail(double t);

}  // namespace l1conc
