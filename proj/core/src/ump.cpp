#include "wmstat/ump.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "wmstat/error.hpp"
#include "wmstat/lp.hpp"

namespace wmstat {
namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1)");
  }
}

void check_eps(double eps) {
  if (!(eps >= 0.0)) throw std::invalid_argument("eps must be >= 0");
}

// Indices sorted by key descending, ties by index.
std::vector<std::size_t> order_desc(const std::vector<double>& key) {
  std::vector<std::size_t> idx(key.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return key[a] > key[b]; });
  return idx;
}

}  // namespace

DistortionResult optimal_distortion_detail(const DiscreteDist& rho, double alpha, double eps) {
  check_alpha(alpha);
  check_eps(eps);
  const std::size_t k = rho.size();
  std::vector<double> surplus(k, 0.0);
  std::vector<double> room(k, 0.0);
  DistortionResult out{rho, 0.0, 0.0, 0.0, 0.0};
  for (std::size_t x = 0; x < k; ++x) {
    surplus[x] = std::max(rho[x] - alpha, 0.0);
    room[x] = std::max(alpha - rho[x], 0.0);
    out.surplus += surplus[x];
    out.capacity += room[x];
  }
  out.moved = std::min({eps, out.surplus, out.capacity});

  std::vector<double> p(rho.probs().begin(), rho.probs().end());
  double left = out.moved;
  for (std::size_t x : order_desc(surplus)) {
    if (left <= 0.0 || surplus[x] <= 0.0) break;
    const double take = std::min(left, surplus[x]);
    p[x] -= take;
    left -= take;
  }
  left = out.moved;
  for (std::size_t x : order_desc(room)) {
    if (left <= 0.0 || room[x] <= 0.0) break;
    const double give = std::min(left, room[x]);
    p[x] += give;
    left -= give;
  }
  for (double& v : p) v = std::max(v, 0.0);

  out.distorted = DiscreteDist(std::move(p), rho.labels());
  out.objective = std::max(out.surplus - out.moved, 0.0);
  return out;
}

DiscreteDist optimal_distortion(const DiscreteDist& rho, double alpha, double eps) {
  return optimal_distortion_detail(rho, alpha, eps).distorted;
}

double ump_type2_closed_form(const DiscreteDist& rho, double alpha, double eps) {
  return optimal_distortion_detail(rho, alpha, eps).objective;
}

Coupling ump_build(const DiscreteDist& rho, double alpha, double eps) {
  const DiscreteDist star = optimal_distortion(rho, alpha, eps);
  std::vector<CouplingAtom> atoms;
  for (std::size_t x = 0; x < star.size(); ++x) {
    const double p = star[x];
    if (p <= 0.0) continue;
    const auto id = static_cast<OutcomeId>(x);
    atoms.push_back({id, Region::singleton(id), std::min(p, alpha)});
    if (p > alpha) atoms.push_back({id, Region{}, p - alpha});
  }
  return Coupling(star.size(), std::move(atoms));
}

double ump_oracle(const DiscreteDist& rho, double alpha) {
  check_alpha(alpha);
  const std::size_t k = rho.size();
  if (k > 4) throw ResourceLimitError("ump_oracle: k must be <= 4");

  // Variable (x, R) = P(R | x) for every non-empty R; the empty region takes
  // up the slack in sum_R P(R | x) <= 1 and affects neither objective nor
  // Type I.
  const std::size_t regions = (std::size_t{1} << k) - 1;
  const std::size_t nv = k * regions;
  auto var = [&](std::size_t x, std::size_t mask) { return x * regions + (mask - 1); };

  LpProblem lp;
  lp.objective.assign(nv, 0.0);
  lp.bounds.assign(nv, VarBounds<double>{0.0, 1.0});
  for (std::size_t x = 0; x < k; ++x) {
    for (std::size_t mask = 1; mask <= regions; ++mask) {
      if (mask >> x & 1U) lp.objective[var(x, mask)] = rho[x];
    }
  }
  for (std::size_t y = 0; y < k; ++y) {
    LpRow<double> row{std::vector<double>(nv, 0.0), alpha};
    for (std::size_t x = 0; x < k; ++x) {
      for (std::size_t mask = 1; mask <= regions; ++mask) {
        if (mask >> y & 1U) row.coeffs[var(x, mask)] = rho[x];
      }
    }
    lp.constraints.push_back(std::move(row));
  }
  for (std::size_t x = 0; x < k; ++x) {
    LpRow<double> row{std::vector<double>(nv, 0.0), 1.0};
    for (std::size_t mask = 1; mask <= regions; ++mask) row.coeffs[var(x, mask)] = 1.0;
    lp.constraints.push_back(std::move(row));
  }
  const LpSolution sol = simplex_solve(lp);
  if (sol.status != LpStatus::kOptimal) {
    throw std::logic_error("ump_oracle: LP not optimal (x = 0 is always feasible)");
  }
  return 1.0 - sol.objective;
}

}  // namespace wmstat
