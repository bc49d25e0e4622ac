#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace l1conc {

/// Absolute tolerance on the sum of a probability vector.
inline constexpr double kSimplexTolerance = 1e-12;

/// A probability vector on the (S-1)-simplex: nonnegative entries summing to 1.
///
/// Construction validates; a SimplexVector that exists is always valid.
class SimplexVector {
 public:
  explicit SimplexVector(std::vector<double> entries);

  /// Uniform distribution over `size` outcomes.
  static SimplexVector uniform(std::size_t size);

  std::size_t size() const noexcept { return entries_.size(); }
  double operator[](std::size_t i) const noexcept { return entries_[i]; }
  std::span<const double> entries() const noexcept { return entries_; }

 private:
  std::vector<double> entries_;
};

/// Multinomial outcome counts; counts always sum to total().
class CountVector {
 public:
  explicit CountVector(std::vector<std::uint64_t> counts);

  std::size_t size() const noexcept { return counts_.size(); }
  std::uint64_t total() const noexcept { return total_; }
  std::uint64_t operator[](std::size_t i) const noexcept { return counts_[i]; }
  std::span<const std::uint64_t> counts() const noexcept { return counts_; }

 private:
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

/// Throws ValidationError unless `entries` is a valid simplex vector.
void validate_simplex(std::span<const double> entries);

}  // namespace l1conc
