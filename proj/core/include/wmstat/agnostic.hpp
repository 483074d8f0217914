#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "wmstat/coupling.hpp"
#include "wmstat/prob.hpp"
#include "wmstat/rational.hpp"

namespace wmstat {

class RngStream;

// Region law of the minimax model-agnostic scheme: uniform over subsets of
// size m = alpha n of an n-outcome space. Requires 1 <= m <= n and m | n so
// that both alpha n and 1/alpha are integers.
class EtaStar {
 public:
  EtaStar(std::int64_t n, std::int64_t m_alpha);
  // alpha must make alpha n and 1/alpha integral.
  static EtaStar from_alpha(std::int64_t n, const ExactRational& alpha);

  std::int64_t n() const noexcept { return n_; }
  std::int64_t m_alpha() const noexcept { return m_; }
  std::int64_t inv_alpha() const noexcept { return n_ / m_; }
  ExactRational alpha() const { return make_rational(m_, static_cast<unsigned long>(n_)); }

 private:
  std::int64_t n_;
  std::int64_t m_;
};

// Integral parameters for a general (n, alpha): alpha1 = 1/ceil(1/alpha) and
// n1 = ceil(alpha1 n)/alpha1, padding the space with n1 - n dummy outcomes.
// The padded problem only approximates the original one.
EtaStar pad_to_integral(std::int64_t n, double alpha);

// gamma(eta*) = C(n - 1/alpha, alpha n) / C(n, alpha n), exactly.
ExactRational gamma_star(std::int64_t n, const ExactRational& alpha);
ExactRational gamma_star(const EtaStar& es);

// |gamma_star(n, alpha) - 1/e| evaluated from the exact rational.
double gamma_limit_check(const ExactRational& alpha, std::int64_t n);

// Uniform size-(alpha n) subset by partial Fisher-Yates.
Region eta_star_sample(const EtaStar& es, RngStream& rng);

// All size-m subsets of {0..n-1} in lexicographic order. Throws
// ResourceLimitError when C(n, m) exceeds `limit`.
std::vector<Region> enumerate_subsets(std::int64_t n, std::int64_t m,
                                      std::uint64_t limit = 100'000);

struct AgnosticFlow {
  OutcomeId outcome = 0;
  std::size_t subset = 0;
  double mass = 0.0;
};

// Coupling of rho with eta*: the outcome marginal is rho and every subset
// carries mass 1/C(n, alpha n).
struct AgnosticCoupling {
  std::vector<Region> subsets;
  std::vector<AgnosticFlow> flows;

  // Same atoms as a generic Coupling over n outcomes.
  Coupling as_coupling(std::size_t n) const;
};

struct AgnosticResult {
  AgnosticCoupling coupling;
  double loss = 0.0;  // P(X not in A) = 1 - max flow
};

// Transportation problem source -> x (capacity rho(x)) -> A containing x
// (uncapacitated) -> sink (capacity 1/C(n, alpha n)) solved by max flow; the
// unmatched mass is then paired greedily to complete both marginals.
AgnosticResult build_agnostic_coupling(const DiscreteDist& rho, const EtaStar& es);

// Exact-arithmetic max flow value for a rational rho; returns the loss
// 1 - max flow.
ExactRational agnostic_loss_exact(const std::vector<ExactRational>& rho, const EtaStar& es);

// eta*(A meets U) = 1 - C(n - |U|, alpha n) / C(n, alpha n).
ExactRational eta_star_hit_probability(const EtaStar& es, std::int64_t u_size);

// max over U of rho(U) - eta*(A meets U), by brute force over all 2^n sets
// (n <= 20).
double strassen_max_excess(const DiscreteDist& rho, const EtaStar& es);

// True iff rho(U) - eta*(A meets U) <= budget (+1e-12) for every U.
bool strassen_check(const DiscreteDist& rho, const EtaStar& es, double budget);

// gamma(eta*) + sum (rho(x) - alpha)_+.
double agnostic_budget(const DiscreteDist& rho, const EtaStar& es);

}  // namespace wmstat
