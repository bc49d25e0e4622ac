#include "l1conc/deviation.hpp"

#include <cmath>

#include "l1conc/error.hpp"

namespace l1conc {
namespace {

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) throw ValidationError("deviation operands have different lengths");
}

void check_scale(double D) {
  if (!(D > 0.0) || !std::isfinite(D)) throw ValidationError("scale D must be positive and finite");
}

}  // namespace

double l1_deviation(std::span<const double> phat, std::span<const double> p) {
  check_lengths(phat.size(), p.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(phat[i] - p[i]);
  return sum;
}

double l1_deviation(const SimplexVector& phat, const SimplexVector& p) {
  return l1_deviation(phat.entries(), p.entries());
}

double z_n_value(const SimplexVector& phat, const SimplexVector& p, double D) {
  check_scale(D);
  return 0.5 * D * l1_deviation(phat, p);
}

std::vector<double> maximizer(const SimplexVector& phat, const SimplexVector& p, double D) {
  check_lengths(phat.size(), p.size());
  check_scale(D);
  std::vector<double> v(p.size(), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (phat[i] - p[i] > 0.0) v[i] = D;
  }
  return v;
}

DeviationResult deviation(const SimplexVector& phat, const SimplexVector& p, double D) {
  DeviationResult result;
  result.l1 = l1_deviation(phat, p);
  result.z_n = z_n_value(phat, p, D);
  result.maximizer = maximizer(phat, p, D);
  return result;
}

}  // namespace l1conc
