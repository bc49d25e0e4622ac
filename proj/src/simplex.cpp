#include "l1conc/simplex.hpp"

#include <cmath>
#include <string>

#include "l1conc/error.hpp"

namespace l1conc {

void validate_simplex(std::span<const double> entries) {
  if (entries.empty()) throw ValidationError("simplex vector must have at least one entry");
  // Neumaier summation keeps the check meaningful for S up to ~10^6.
  double sum = 0.0;
  double carry = 0.0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const double x = entries[i];
    if (!std::isfinite(x) || x < 0.0) {
      throw ValidationError("simplex entry " + std::to_string(i) + " is negative or not finite");
    }
    const double t = sum + x;
    carry += std::abs(sum) >= x ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  sum += carry;
  if (std::abs(sum - 1.0) > kSimplexTolerance) {
    throw ValidationError("simplex entries sum to " + std::to_string(sum) + ", expected 1");
  }
}

SimplexVector::SimplexVector(std::vector<double> entries) : entries_(std::move(entries)) {
  validate_simplex(entries_);
}

SimplexVector SimplexVector::uniform(std::size_t size) {
  if (size == 0) throw ValidationError("uniform simplex vector needs at least one entry");
  return SimplexVector(std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

CountVector::CountVector(std::vector<std::uint64_t> counts) : counts_(std::move(counts)) {
  for (auto c : counts_) total_ += c;
}

}  // namespace l1conc
