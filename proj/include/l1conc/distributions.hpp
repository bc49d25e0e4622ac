#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "l1conc/rng.hpp"
#include "l1conc/simplex.hpp"

namespace l1conc {

// Samplers are pure functions of their parameters and a StreamKey. The
// rng-taking overloads draw from an existing stream so that composite
// samplers can share one stream per trial.

/// Binomial(n, p). Geometric-gap inversion when min(p, 1-p)·n < 10, otherwise
/// Hörmann's BTRS transformed rejection.
std::uint64_t sample_binomial(std::uint64_t n, double p, StreamRng& rng);

/// Gamma(shape, 1), returned as its natural logarithm so that tiny shapes do not
/// underflow to zero.
double sample_log_gamma(double shape, StreamRng& rng);

/// Multinomial(n, p) via sequential conditional binomials.
CountVector sample_multinomial(const SimplexVector& p, std::uint64_t n, StreamRng& rng);
CountVector sample_multinomial(const SimplexVector& p, std::uint64_t n, StreamKey key);

/// counts / n. Throws ValidationError when n == 0.
SimplexVector empirical_frequency(const CountVector& counts);

/// Dirichlet(alpha) via normalized Gamma variates. Every alpha entry must be > 0.
SimplexVector sample_dirichlet(std::span<const double> alpha, StreamRng& rng);
SimplexVector sample_dirichlet(std::span<const double> alpha, StreamKey key);

/// `dim` i.i.d. standard normal variates; dim must be >= 1.
std::vector<double> sample_standard_normal_vector(std::size_t dim, StreamKey key);

}  // namespace l1conc
