#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace l1conc {

// Deviation thresholds eps(n, S, delta) such that a bound claims
// P(||phat_n - p||_1 >= eps) <= delta for phat_n ~ Multinomial(n, p) / n.

enum class BoundFamily { WeissmanUnion, WeissmanExact, Devroye, Agrawal };

enum class WeissmanForm { Union, Exact };

std::string_view to_string(BoundFamily family) noexcept;
std::optional<BoundFamily> parse_bound_family(std::string_view text) noexcept;

struct BoundSpec {
  BoundFamily family = BoundFamily::Agrawal;
  std::uint64_t n = 1;
  std::uint64_t S = 2;
  double delta = 0.05;
};

/// Throws ValidationError unless n >= 1, S >= 2 and delta in (0, 1].
void validate(const BoundSpec& spec);

struct BoundEvaluation {
  BoundSpec spec;
  double epsilon = 0.0;
  /// False only for Devroye outside delta <= 3 exp(-4S/5).
  bool valid = true;
  /// epsilon exceeds the l1 diameter 2 of the simplex; the bound says nothing.
  bool vacuous = false;
};

/// Union form sqrt(2 S ln(2/delta) / n); exact-cover form sqrt(2 ln((2^S - 2)/delta) / n).
double weissman_epsilon(std::uint64_t n, std::uint64_t S, double delta, WeissmanForm form);

/// 5 sqrt(ln(3/delta) / n), for 0 < delta <= 3.
double devroye_epsilon(std::uint64_t n, double delta);

/// delta <= 3 exp(-4S/5).
bool devroye_valid(std::uint64_t S, double delta);

/// sqrt(2 ln(1/delta) / n), for 0 < delta <= 1. Dimension free.
double agrawal_epsilon(std::uint64_t n, double delta);

BoundEvaluation evaluate(const BoundSpec& spec);

}  // namespace l1conc
