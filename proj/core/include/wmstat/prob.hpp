#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wmstat/rational.hpp"

namespace wmstat {

class RngStream;

using OutcomeId = std::uint32_t;

// Finite probability distribution over outcome ids 0..k-1.
//
// Construction validates the invariants (non-negative finite entries summing
// to 1 within 1e-12, k >= 1) and throws std::invalid_argument otherwise. The
// object is immutable; the cumulative table used by sample() is built once.
class DiscreteDist {
 public:
  static constexpr double kSumTolerance = 1e-12;

  explicit DiscreteDist(std::vector<double> probs,
                        std::vector<std::string> labels = {});

  static DiscreteDist uniform(std::size_t k);
  static DiscreteDist point_mass(std::size_t k, OutcomeId at);
  // Rescales non-negative weights to sum to one.
  static DiscreteDist normalized(std::vector<double> weights);

  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const noexcept { return probs_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::span<const double> cdf() const noexcept { return cdf_; }
  double max_prob() const;

 private:
  std::vector<double> probs_;
  std::vector<std::string> labels_;
  std::vector<double> cdf_;
};

// Shannon entropy in nats with 0 ln 0 = 0.
double entropy(const DiscreteDist& d);

// H_b(x) = -x ln x - (1-x) ln(1-x); 0 at the endpoints. Throws
// std::domain_error outside [0, 1].
double binary_entropy(double x);

enum class EntropyBranch { kLow, kHigh };

// Inverse of binary_entropy on the chosen side of 1/2, by bisection to 1e-12
// in the argument (200 iterations at most).
double inv_binary_entropy(double h, EntropyBranch branch);

// Half-L1 distance, i.e. sup over events of |a(E) - b(E)|.
double tv_distance(const DiscreteDist& a, const DiscreteDist& b);

// Outcome j with probability d[j]; consumes one uniform from the stream.
OutcomeId sample(const DiscreteDist& d, RngStream& rng);
// Inverse-CDF draw for a given uniform u in [0, 1).
OutcomeId sample_with_uniform(const DiscreteDist& d, double u);

// Random law on k outcomes with weights u^sharpness, u ~ Unif(0, 1]. Larger
// sharpness concentrates the mass.
DiscreteDist random_distribution(std::size_t k, RngStream& rng, double sharpness = 1.0);

}  // namespace wmstat
