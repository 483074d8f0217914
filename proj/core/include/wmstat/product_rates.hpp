#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wmstat/prob.hpp"

namespace wmstat {

struct RateBounds {
  double lower = 0.0;  // tokens
  double upper = 0.0;  // tokens
};

struct RatePoint {
  std::int64_t n = 0;
  double beta = 0.0;
  double stderr_ = 0.0;  // 0 for exact values
};

struct RateCurve {
  std::vector<RatePoint> entries;  // n strictly increasing
};

// Exact Type II error of the distortion-free UMP watermark of rho0^n at level
// alpha: sum over count vectors c of multinomial(n; c) * (p_c - alpha)_+ with
// p_c = prod p_i^{c_i}, evaluated in log space with compensated summation in
// lexicographic class order. Throws ResourceLimitError when the number of
// classes C(n+k-1, k-1) exceeds kMaxClasses.
inline constexpr std::uint64_t kMaxClasses = 2'000'000;
double type2_product_exact(const DiscreteDist& rho0, std::int64_t n, double alpha);

// Two-outcome specialization as a binomial sum over the minority count.
double type2_binomial(const DiscreteDist& rho0, std::int64_t n, double alpha);

struct McEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
};

// Monte Carlo estimate of E[(1 - alpha / rho(X))_+] for X ~ rho0^n. Samples
// are split into fixed blocks, each drawing from rng_stream(seed, block), so
// the result does not depend on the worker count.
McEstimate type2_product_mc(const DiscreteDist& rho0, std::int64_t n, double alpha,
                            std::int64_t samples, std::uint64_t seed, unsigned workers = 1);

// Two-point law (1 - q0, q0) with entropy h and q0 = H_b^{-1}(h) >= 1/2.
DiscreteDist hard_instance(double h);

// Rate bound formulas for the minimum token count; require 0 < h < 1/4 and
// 0 < alpha, beta < 0.1 (std::domain_error otherwise).
double thm2_lower(double h, double alpha, double beta);
double thm2_upper(double h, double alpha, double beta, std::int64_t k);
RateBounds rate_bounds(double h, double alpha, double beta, std::int64_t k);

struct RequiredTokens {
  std::optional<std::int64_t> n_star;  // first n with beta(n) <= beta
  RateCurve curve;
};

// Scans n = 1..n_max with the exact Type II error (binomial path for k = 2)
// and reports the first crossing. The curve stops at the crossing unless
// full_scan is set.
RequiredTokens n_required_empirical(const DiscreteDist& rho0, double alpha, double beta,
                                    std::int64_t n_max, bool full_scan = false);

}  // namespace wmstat
