#include "wmstat/product_rates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "wmstat/error.hpp"
#include "wmstat/rng.hpp"

namespace wmstat {
namespace {

// Neumaier compensated accumulator.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
}

// (p - alpha)_+ scaled by the class count, given log p and log count.
double class_term(double log_count, double log_p, double log_alpha) {
  if (log_p <= log_alpha) return 0.0;
  return std::exp(log_count + log_p) * -std::expm1(log_alpha - log_p);
}

std::uint64_t class_count(std::int64_t n, std::size_t k) {
  // C(n + k - 1, k - 1) with saturation.
  long double c = 1.0L;
  for (std::size_t i = 1; i < k; ++i) {
    c = c * static_cast<long double>(n + static_cast<std::int64_t>(i)) / static_cast<long double>(i);
    if (c > 1e18L) return ~std::uint64_t{0};
  }
  return static_cast<std::uint64_t>(std::llround(c));
}

}  // namespace

double type2_product_exact(const DiscreteDist& rho0, std::int64_t n, double alpha) {
  check_alpha(alpha);
  if (n < 0) throw std::invalid_argument("type2_product_exact: n must be >= 0");
  const std::size_t k = rho0.size();
  if (class_count(n, k) > kMaxClasses) {
    throw ResourceLimitError("type2_product_exact: more than 2e6 count classes; too large, use MC");
  }
  std::vector<double> logp(k);
  for (std::size_t i = 0; i < k; ++i) {
    logp[i] = rho0[i] > 0.0 ? std::log(rho0[i]) : -INFINITY;
  }
  const double log_alpha = std::log(alpha);
  const double lg_n = std::lgamma(static_cast<double>(n) + 1.0);

  // Enumerate compositions c_0 + ... + c_{k-1} = n lexicographically (c_0
  // descending from n) by odometer.
  std::vector<std::int64_t> c(k, 0);
  c[0] = n;
  CompensatedSum acc;
  while (true) {
    double lp = 0.0;
    double lc = lg_n;
    bool possible = true;
    for (std::size_t i = 0; i < k; ++i) {
      if (c[i] == 0) continue;
      if (rho0[i] <= 0.0) {
        possible = false;
        break;
      }
      lp += static_cast<double>(c[i]) * logp[i];
      lc -= std::lgamma(static_cast<double>(c[i]) + 1.0);
    }
    if (possible) acc.add(class_term(lc, lp, log_alpha));

    if (k == 1) break;
    // Next composition: find rightmost i < k-1 with c[i] > 0, move one unit
    // to i+1 and gather the tail there.
    std::size_t i = k - 1;
    while (i-- > 0 && c[i] == 0) {
    }
    if (i >= k - 1) break;  // only c[k-1] is positive: done
    const std::int64_t tail = c[k - 1];
    c[k - 1] = 0;
    --c[i];
    c[i + 1] = tail + 1;
  }
  return std::clamp(acc.value(), 0.0, 1.0);
}

double type2_binomial(const DiscreteDist& rho0, std::int64_t n, double alpha) {
  check_alpha(alpha);
  if (rho0.size() != 2) throw std::invalid_argument("type2_binomial: needs a two-outcome law");
  if (n < 0) throw std::invalid_argument("type2_binomial: n must be >= 0");
  const double minor = std::min(rho0[0], rho0[1]);
  const double major = std::max(rho0[0], rho0[1]);
  const double log_alpha = std::log(alpha);
  if (minor <= 0.0) {
    // Point mass: the single sequence has probability 1.
    return 1.0 - alpha;
  }
  const double lmin = std::log(minor);
  const double lmaj = std::log(major);
  const double lg_n = std::lgamma(static_cast<double>(n) + 1.0);
  CompensatedSum acc;
  // Sequence probability is non-increasing in the minority count j.
  for (std::int64_t j = 0; j <= n; ++j) {
    const double lp = static_cast<double>(j) * lmin + static_cast<double>(n - j) * lmaj;
    if (lp <= log_alpha) break;
    const double lc = lg_n - std::lgamma(static_cast<double>(j) + 1.0) -
                      std::lgamma(static_cast<double>(n - j) + 1.0);
    acc.add(class_term(lc, lp, log_alpha));
  }
  return std::clamp(acc.value(), 0.0, 1.0);
}

namespace {

constexpr std::int64_t kMcBlock = 4096;

struct BlockMoments {
  std::int64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;
};

BlockMoments merge(const BlockMoments& a, const BlockMoments& b) {
  if (a.count == 0) return b;
  if (b.count == 0) return a;
  BlockMoments out;
  out.count = a.count + b.count;
  const double delta = b.mean - a.mean;
  const double nb = static_cast<double>(b.count) / static_cast<double>(out.count);
  out.mean = a.mean + delta * nb;
  out.m2 = a.m2 + b.m2 + delta * delta * static_cast<double>(a.count) * nb;
  return out;
}

BlockMoments reduce_pairwise(const std::vector<BlockMoments>& blocks, std::size_t lo,
                             std::size_t hi) {
  if (hi - lo == 1) return blocks[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return merge(reduce_pairwise(blocks, lo, mid), reduce_pairwise(blocks, mid, hi));
}

}  // namespace

McEstimate type2_product_mc(const DiscreteDist& rho0, std::int64_t n, double alpha,
                            std::int64_t samples, std::uint64_t seed, unsigned workers) {
  check_alpha(alpha);
  if (samples < 100) throw std::invalid_argument("type2_product_mc: samples must be >= 100");
  if (n < 0) throw std::invalid_argument("type2_product_mc: n must be >= 0");
  std::vector<double> logp(rho0.size());
  for (std::size_t i = 0; i < rho0.size(); ++i) {
    logp[i] = rho0[i] > 0.0 ? std::log(rho0[i]) : -INFINITY;
  }
  const double log_alpha = std::log(alpha);
  const auto nblocks = static_cast<std::size_t>((samples + kMcBlock - 1) / kMcBlock);
  std::vector<BlockMoments> blocks(nblocks);

  auto run_block = [&](std::size_t b) {
    RngStream rng = rng_stream(seed, b);
    const std::int64_t begin = static_cast<std::int64_t>(b) * kMcBlock;
    const std::int64_t end = std::min(samples, begin + kMcBlock);
    BlockMoments m;
    for (std::int64_t s = begin; s < end; ++s) {
      double lp = 0.0;
      for (std::int64_t i = 0; i < n; ++i) lp += logp[sample(rho0, rng)];
      const double v = lp > log_alpha ? -std::expm1(log_alpha - lp) : 0.0;
      ++m.count;
      const double delta = v - m.mean;
      m.mean += delta / static_cast<double>(m.count);
      m.m2 += delta * (v - m.mean);
    }
    blocks[b] = m;
  };

  const unsigned nw = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(nblocks)));
  if (nw == 1) {
    for (std::size_t b = 0; b < nblocks; ++b) run_block(b);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < nw; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t b = w; b < nblocks; b += nw) run_block(b);
      });
    }
  }
  const BlockMoments total = reduce_pairwise(blocks, 0, blocks.size());
  McEstimate out;
  out.estimate = total.mean;
  const double var = total.count > 1 ? total.m2 / static_cast<double>(total.count - 1) : 0.0;
  out.stderr_ = std::sqrt(std::max(var, 0.0) / static_cast<double>(total.count));
  return out;
}

DiscreteDist hard_instance(double h) {
  if (!(h > 0.0 && h <= std::log(2.0))) {
    throw std::domain_error("hard_instance: h must lie in (0, ln 2]");
  }
  const double q0 = inv_binary_entropy(h, EntropyBranch::kHigh);
  return DiscreteDist({1.0 - q0, q0});
}

namespace {

void check_rate_domain(double h, double alpha, double beta) {
  if (!(h > 0.0 && h < 0.25)) throw std::domain_error("rate bounds: h must lie in (0, 1/4)");
  if (!(alpha > 0.0 && alpha < 0.1)) throw std::domain_error("rate bounds: alpha must lie in (0, 0.1)");
  if (!(beta > 0.0 && beta < 0.1)) throw std::domain_error("rate bounds: beta must lie in (0, 0.1)");
}

}  // namespace

double thm2_lower(double h, double alpha, double beta) {
  check_rate_domain(h, alpha, beta);
  const double err = std::min(std::log(1.0 / (2.0 * alpha)), std::log(1.0 / (2.0 * beta)));
  const double first = std::log(std::log(2.0) / h) / (2.0 * h) * err;
  const double second = std::log(1.0 / (2.0 * alpha)) / h;
  return std::max(first, second);
}

double thm2_upper(double h, double alpha, double beta, std::int64_t k) {
  check_rate_domain(h, alpha, beta);
  if (k < 2) throw std::domain_error("rate bounds: k must be >= 2");
  const double kk = static_cast<double>(k);
  const double err = std::min(std::log(1.0 / alpha), std::log(1.0 / beta));
  const double first = 200.0 * (2.0 * std::log(9.0 * kk / h) / h * err);
  const double second = (18.0 + 4.0 * std::log(9.0 * kk)) * std::log(1.0 / alpha) / h;
  return std::max(first, second);
}

RateBounds rate_bounds(double h, double alpha, double beta, std::int64_t k) {
  return {thm2_lower(h, alpha, beta), thm2_upper(h, alpha, beta, k)};
}

RequiredTokens n_required_empirical(const DiscreteDist& rho0, double alpha, double beta,
                                    std::int64_t n_max, bool full_scan) {
  check_alpha(alpha);
  if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("beta must lie in [0, 1]");
  if (n_max < 1) throw std::invalid_argument("n_required_empirical: n_max must be >= 1");
  if (rho0.size() == 2 && n_max > 100'000) {
    throw ResourceLimitError("n_required_empirical: n_max above 1e5 on the binomial path");
  }
  RequiredTokens out;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    const double b = rho0.size() == 2 ? type2_binomial(rho0, n, alpha)
                                      : type2_product_exact(rho0, n, alpha);
    out.curve.entries.push_back({n, b, 0.0});
    if (b <= beta && !out.n_star) {
      out.n_star = n;
      if (!full_scan) break;
    }
  }
  return out;
}

}  // namespace wmstat
