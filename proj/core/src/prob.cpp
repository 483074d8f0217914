#include "wmstat/prob.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "wmstat/rng.hpp"

namespace wmstat {

DiscreteDist::DiscreteDist(std::vector<double> probs, std::vector<std::string> labels)
    : probs_(std::move(probs)), labels_(std::move(labels)) {
  if (probs_.empty()) {
    throw std::invalid_argument("DiscreteDist: needs at least one outcome");
  }
  if (!labels_.empty() && labels_.size() != probs_.size()) {
    throw std::invalid_argument("DiscreteDist: label count differs from outcome count");
  }
  cdf_.resize(probs_.size());
  double total = 0.0;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    const double p = probs_[i];
    if (!std::isfinite(p) || p < 0.0) {
      throw std::invalid_argument("DiscreteDist: entry " + std::to_string(i) +
                                  " is negative or non-finite");
    }
    total += p;
    cdf_[i] = total;
  }
  if (std::abs(total - 1.0) > kSumTolerance) {
    throw std::invalid_argument("DiscreteDist: probabilities sum to " +
                                std::to_string(total) + ", not 1");
  }
}

DiscreteDist DiscreteDist::uniform(std::size_t k) {
  if (k == 0) throw std::invalid_argument("DiscreteDist::uniform: k must be >= 1");
  return DiscreteDist(std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

DiscreteDist DiscreteDist::point_mass(std::size_t k, OutcomeId at) {
  if (at >= k) throw std::invalid_argument("DiscreteDist::point_mass: index out of range");
  std::vector<double> p(k, 0.0);
  p[at] = 1.0;
  return DiscreteDist(std::move(p));
}

DiscreteDist DiscreteDist::normalized(std::vector<double> weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw std::invalid_argument("DiscreteDist::normalized: weights must have positive finite sum");
  }
  for (double& w : weights) w /= total;
  return DiscreteDist(std::move(weights));
}

double DiscreteDist::max_prob() const {
  return *std::max_element(probs_.begin(), probs_.end());
}

double entropy(const DiscreteDist& d) {
  double h = 0.0;
  for (double p : d.probs()) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::domain_error("binary_entropy: argument outside [0, 1]");
  }
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log(x) - (1.0 - x) * std::log1p(-x);
}

double inv_binary_entropy(double h, EntropyBranch branch) {
  const double ln2 = std::log(2.0);
  if (!(h >= 0.0 && h <= ln2 + 1e-15)) {
    throw std::domain_error("inv_binary_entropy: h outside [0, ln 2]");
  }
  if (h >= ln2) return 0.5;
  if (h == 0.0) return branch == EntropyBranch::kHigh ? 1.0 : 0.0;
  // binary_entropy is increasing on [0, 1/2]; bisect there and mirror.
  double lo = 0.0;
  double hi = 0.5;
  // Runs to machine resolution, which is well inside the 1e-12 target.
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (binary_entropy(mid) < h) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double x = 0.5 * (lo + hi);
  return branch == EntropyBranch::kLow ? x : 1.0 - x;
}

double tv_distance(const DiscreteDist& a, const DiscreteDist& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("tv_distance: support sizes differ");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return std::min(1.0, 0.5 * s);
}

OutcomeId sample_with_uniform(const DiscreteDist& d, double u) {
  const auto cdf = d.cdf();
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  if (it == cdf.end()) {
    // u at or above the rounded total: fall back to the last outcome with mass.
    std::size_t j = d.size();
    while (j > 0 && d[j - 1] == 0.0) --j;
    return static_cast<OutcomeId>(j - 1);
  }
  return static_cast<OutcomeId>(it - cdf.begin());
}

OutcomeId sample(const DiscreteDist& d, RngStream& rng) {
  return sample_with_uniform(d, rng.uniform01());
}

DiscreteDist random_distribution(std::size_t k, RngStream& rng, double sharpness) {
  std::vector<double> w(k);
  for (double& v : w) v = std::pow(rng.uniform_open_closed(), sharpness);
  return DiscreteDist::normalized(std::move(w));
}

ExactRational binom_exact(std::int64_t n, std::int64_t k) {
  if (n < 0) throw std::invalid_argument("binom_exact: n must be >= 0");
  if (k < 0 || k > n) return ExactRational(0);
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return ExactRational(r);
}

}  // namespace wmstat
