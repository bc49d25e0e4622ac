#include "l1conc/asymptotic.hpp"

#include <cmath>
#include <numbers>

#include "l1conc/error.hpp"

namespace l1conc {
namespace {

void check_dimension(std::size_t S) {
  if (S < 2) throw ValidationError("limit law requires S >= 2");
}

void check_scale(double D) {
  if (!(D > 0.0) || !std::isfinite(D)) throw ValidationError("scale D must be positive and finite");
}

void fill_whitened(StreamRng& rng, std::span<double> w) {
  for (std::size_t i = 0; i + 1 < w.size(); ++i) w[i] = rng.normal();
  w.back() = 0.0;
}

}  // namespace

SquareMatrix multiply(const SquareMatrix& a, const SquareMatrix& b) {
  if (a.size != b.size) throw ValidationError("matrix sizes differ");
  const std::size_t n = a.size;
  SquareMatrix c{n, std::vector<double>(n * n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

SquareMatrix transpose(const SquareMatrix& a) {
  SquareMatrix t{a.size, std::vector<double>(a.values.size())};
  for (std::size_t i = 0; i < a.size; ++i) {
    for (std::size_t j = 0; j < a.size; ++j) t(j, i) = a(i, j);
  }
  return t;
}

LimitCovariance limit_covariance(std::size_t S) {
  check_dimension(S);
  const double off = -1.0 / static_cast<double>(S - 1);
  LimitCovariance cov{S, SquareMatrix{S, std::vector<double>(S * S, off)}};
  for (std::size_t i = 0; i < S; ++i) cov.matrix(i, i) = 1.0;
  return cov;
}

OrthogonalDiagonalizer helmert_diagonalizer(std::size_t S) {
  check_dimension(S);
  OrthogonalDiagonalizer out{S, SquareMatrix{S, std::vector<double>(S * S, 0.0)}};
  for (std::size_t k = 1; k < S; ++k) {
    const double kd = static_cast<double>(k);
    const double c = 1.0 / std::sqrt(kd * (kd + 1.0));
    for (std::size_t j = 0; j < k; ++j) out.U(k - 1, j) = c;
    out.U(k - 1, k) = -kd * c;
  }
  const double last = 1.0 / std::sqrt(static_cast<double>(S));
  for (std::size_t j = 0; j < S; ++j) out.U(S - 1, j) = last;
  return out;
}

HelmertTransform::HelmertTransform(std::size_t S) {
  check_dimension(S);
  scale_.resize(S - 1);
  for (std::size_t k = 1; k < S; ++k) {
    const double kd = static_cast<double>(k);
    scale_[k - 1] = 1.0 / std::sqrt(kd * (kd + 1.0));
  }
  last_row_ = 1.0 / std::sqrt(static_cast<double>(S));
}

void HelmertTransform::apply_transpose(std::span<const double> w, std::span<double> out) const {
  const std::size_t S = size();
  if (w.size() != S || out.size() != S) throw ValidationError("helmert operand has wrong length");
  // out_j = sum_{k > j} c_k w_{k-1} - j c_j w_{j-1} + w_{S-1}/sqrt(S), with 1-based k.
  const double common = w[S - 1] * last_row_;
  double suffix = 0.0;
  for (std::size_t j = S; j-- > 0;) {
    double value = suffix + common;
    if (j >= 1) value -= static_cast<double>(j) * scale_[j - 1] * w[j - 1];
    out[j] = value;
    if (j >= 1) suffix += scale_[j - 1] * w[j - 1];
  }
}

void HelmertTransform::apply(std::span<const double> y, std::span<double> out) const {
  const std::size_t S = size();
  if (y.size() != S || out.size() != S) throw ValidationError("helmert operand has wrong length");
  double prefix = 0.0;
  for (std::size_t k = 1; k < S; ++k) {
    prefix += y[k - 1];
    out[k - 1] = scale_[k - 1] * (prefix - static_cast<double>(k) * y[k]);
  }
  out[S - 1] = (prefix + y[S - 1]) * last_row_;
}

std::vector<double> limit_Y_from_whitened(const HelmertTransform& helmert, std::span<const double> w) {
  const std::size_t S = helmert.size();
  std::vector<double> y(S);
  helmert.apply_transpose(w, y);
  const double factor = std::sqrt(static_cast<double>(S) / static_cast<double>(S - 1));
  for (auto& v : y) v *= factor;
  return y;
}

std::vector<double> sample_whitened(std::size_t S, StreamKey key) {
  check_dimension(S);
  StreamRng rng(key);
  std::vector<double> w(S);
  fill_whitened(rng, w);
  return w;
}

std::vector<double> sample_limit_Y(std::size_t S, StreamKey key) {
  const HelmertTransform helmert(S);
  return limit_Y_from_whitened(helmert, sample_whitened(S, key));
}

double z_from_limit_Y(std::span<const double> y, double D) {
  check_dimension(y.size());
  check_scale(D);
  double positive = 0.0;
  for (double v : y) positive += v > 0.0 ? v : 0.0;
  const double S = static_cast<double>(y.size());
  return D * std::sqrt((S - 1.0) / (S * S)) * positive;
}

double z_from_whitened(const HelmertTransform& helmert, std::span<const double> w, double D) {
  check_scale(D);
  std::vector<double> projected(helmert.size());
  helmert.apply_transpose(w, projected);
  double positive = 0.0;
  for (double v : projected) positive += v > 0.0 ? v : 0.0;
  return D * positive / std::sqrt(static_cast<double>(helmert.size()));
}

LimitSampler::LimitSampler(std::size_t S, double D) : helmert_(S), D_(D), w_(S), projected_(S) {
  check_scale(D);
}

double LimitSampler::operator()(StreamKey key) {
  StreamRng rng(key);
  fill_whitened(rng, w_);
  helmert_.apply_transpose(w_, projected_);
  double positive = 0.0;
  for (double v : projected_) positive += v > 0.0 ? v : 0.0;
  return D_ * positive / std::sqrt(static_cast<double>(projected_.size()));
}

LimitSample sample_Z_S(std::size_t S, double D, StreamKey key) {
  LimitSampler sampler(S, D);
  return LimitSample{sampler(key), S, D};
}

double expected_Z_S(std::size_t S) {
  check_dimension(S);
  return std::sqrt(static_cast<double>(S - 1) / (2.0 * std::numbers::pi));
}

double anticoncentration_threshold(std::size_t S, double delta) {
  check_dimension(S);
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("anticoncentration requires delta in (0, 1)");
  return std::sqrt(2.0 * static_cast<double>(S - 1) / std::numbers::pi) - std::sqrt(2.0 * std::log(2.0 / delta));
}

double gaussian_lipschitz_tail(double t) {
  if (!(t >= 0.0)) throw DomainError("deviation t must be nonnegative");
  return 2.0 * std::exp(-0.5 * t * t);
}

}  // namespace l1conc
