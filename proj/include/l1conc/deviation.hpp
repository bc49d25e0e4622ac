#pragma once

#include <span>
#include <vector>

#include "l1conc/simplex.hpp"

namespace l1conc {

/// Z_n together with the l1 distance it is derived from and the vertex of
/// [0, D]^S attaining the maximum of (phat - p)^T v.
struct DeviationResult {
  double l1 = 0.0;
  double z_n = 0.0;
  std::vector<double> maximizer;
};

/// sum_i |phat_i - p_i|, summed in index order. Result lies in [0, 2].
double l1_deviation(std::span<const double> phat, std::span<const double> p);
double l1_deviation(const SimplexVector& phat, const SimplexVector& p);

/// (D / 2) * ||phat - p||_1, the maximum of (phat - p)^T v over v in [0, D]^S.
double z_n_value(const SimplexVector& phat, const SimplexVector& p, double D);

/// v_i = D where phat_i > p_i, 0 otherwise (ties go to 0).
std::vector<double> maximizer(const SimplexVector& phat, const SimplexVector& p, double D);

DeviationResult deviation(const SimplexVector& phat, const SimplexVector& p, double D);

}  // namespace l1conc
