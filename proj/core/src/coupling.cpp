#include "wmstat/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wmstat {

Region::Region(std::vector<OutcomeId> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

Region::Region(std::initializer_list<OutcomeId> members)
    : Region(std::vector<OutcomeId>(members)) {}

Region Region::full(std::size_t k) {
  std::vector<OutcomeId> all(k);
  for (std::size_t i = 0; i < k; ++i) all[i] = static_cast<OutcomeId>(i);
  return Region(std::move(all));
}

bool Region::contains(OutcomeId x) const {
  return std::binary_search(members_.begin(), members_.end(), x);
}

bool Region::within(std::size_t k) const { return members_.empty() || members_.back() < k; }

bool Region::subset_of(const Region& other) const {
  return std::includes(other.members_.begin(), other.members_.end(), members_.begin(),
                       members_.end());
}

Coupling::Coupling(std::size_t k, std::vector<CouplingAtom> atoms)
    : k_(k), atoms_(std::move(atoms)) {
  if (k_ == 0) throw std::invalid_argument("Coupling: needs at least one outcome");
  double total = 0.0;
  for (const auto& a : atoms_) {
    if (a.outcome >= k_ || !a.region.within(k_)) {
      throw std::invalid_argument("Coupling: atom references an outcome out of range");
    }
    if (!std::isfinite(a.weight) || a.weight < 0.0) {
      throw std::invalid_argument("Coupling: negative or non-finite atom weight");
    }
    total += a.weight;
  }
  if (std::abs(total - 1.0) > kSumTolerance) {
    throw std::invalid_argument("Coupling: atom weights do not sum to 1");
  }
}

DiscreteDist Coupling::output_marginal() const {
  std::vector<double> m(k_, 0.0);
  for (const auto& a : atoms_) m[a.outcome] += a.weight;
  return DiscreteDist(std::move(m));
}

double type1_exact(const Coupling& c) {
  std::vector<double> inclusion(c.outcome_count(), 0.0);
  for (const auto& a : c.atoms()) {
    for (OutcomeId y : a.region.members()) inclusion[y] += a.weight;
  }
  return *std::max_element(inclusion.begin(), inclusion.end());
}

double type2_exact(const Coupling& c) {
  double miss = 0.0;
  for (const auto& a : c.atoms()) {
    if (!a.region.contains(a.outcome)) miss += a.weight;
  }
  return miss;
}

}  // namespace wmstat
