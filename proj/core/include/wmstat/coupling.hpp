#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "wmstat/prob.hpp"

namespace wmstat {

// Rejection region: a sorted, duplicate-free subset of outcome ids.
class Region {
 public:
  Region() = default;
  // Sorts and deduplicates.
  explicit Region(std::vector<OutcomeId> members);
  Region(std::initializer_list<OutcomeId> members);

  static Region singleton(OutcomeId x) { return Region({x}); }
  static Region full(std::size_t k);

  bool contains(OutcomeId x) const;
  bool empty() const noexcept { return members_.empty(); }
  std::size_t size() const noexcept { return members_.size(); }
  std::span<const OutcomeId> members() const noexcept { return members_; }
  // Every member is < k.
  bool within(std::size_t k) const;
  // Every member of this region is also in other.
  bool subset_of(const Region& other) const;

  friend bool operator==(const Region&, const Region&) = default;

 private:
  std::vector<OutcomeId> members_;
};

struct CouplingAtom {
  OutcomeId outcome = 0;
  Region region;
  double weight = 0.0;
};

// Joint law of (output X, rejection region R) as a finite list of weighted
// atoms over k outcomes. Weights are non-negative and sum to 1 within 1e-12.
class Coupling {
 public:
  static constexpr double kSumTolerance = 1e-12;

  Coupling(std::size_t k, std::vector<CouplingAtom> atoms);

  std::size_t outcome_count() const noexcept { return k_; }
  std::span<const CouplingAtom> atoms() const noexcept { return atoms_; }

  // Law of X.
  DiscreteDist output_marginal() const;

 private:
  std::size_t k_;
  std::vector<CouplingAtom> atoms_;
};

// sup over independent outputs of P(Y in R); attained at a point mass, so
// this is the largest per-outcome region inclusion probability.
double type1_exact(const Coupling& c);

// P(X not in R).
double type2_exact(const Coupling& c);

}  // namespace wmstat
