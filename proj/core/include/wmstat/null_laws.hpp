#pragma once

#include <cstdint>

namespace wmstat {

// P(Binomial(n, p) >= c).
double binomial_upper_tail(std::int64_t n, double p, std::int64_t c);

// Smallest integer C in [0, n + 1] with P(Binomial(n, p) >= C) <= alpha.
std::int64_t binomial_threshold(std::int64_t n, double p, double alpha);

// x with P(Gamma(shape, 1) >= x) = alpha.
double gamma_upper_quantile(double shape, double alpha);

}  // namespace wmstat
