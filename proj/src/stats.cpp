#include "l1conc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "l1conc/error.hpp"

namespace l1conc {

Interval clopper_pearson(std::uint64_t successes, std::uint64_t trials, double level) {
  if (trials == 0) throw ValidationError("clopper-pearson interval needs at least one trial");
  if (successes > trials) throw ValidationError("successes exceed trials");
  if (!(level > 0.0 && level < 1.0)) throw ValidationError("confidence level must lie in (0, 1)");
  const double tail = 0.5 * (1.0 - level);
  const auto k = static_cast<double>(successes);
  const auto n = static_cast<double>(trials);
  Interval out;
  out.low = successes == 0 ? 0.0 : boost::math::ibeta_inv(k, n - k + 1.0, tail);
  out.high = successes == trials ? 1.0 : boost::math::ibetac_inv(k + 1.0, n - k, tail);
  return out;
}

double dkw_halfwidth(std::uint64_t trials, double alpha) {
  if (trials == 0) throw ValidationError("DKW band needs at least one trial");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("band level alpha must lie in (0, 1)");
  return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(trials)));
}

double ks_distance_sorted(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw ValidationError("KS distance needs two nonempty samples");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double best = 0.0;
  while (i < a.size() && j < b.size()) {
    // Step past every copy of the smaller value in both samples before comparing.
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    best = std::max(best, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return best;
}

double ks_distance(std::span<const double> a, std::span<const double> b) {
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  return ks_distance_sorted(sa, sb);
}

}  // namespace l1conc
