#include "wmstat/agnostic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "wmstat/error.hpp"
#include "wmstat/maxflow.hpp"
#include "wmstat/rng.hpp"

namespace wmstat {

EtaStar::EtaStar(std::int64_t n, std::int64_t m_alpha) : n_(n), m_(m_alpha) {
  if (m_ < 1 || m_ > n_) throw std::invalid_argument("EtaStar: need 1 <= alpha n <= n");
  if (n_ % m_ != 0) throw std::invalid_argument("EtaStar: 1/alpha = n/(alpha n) must be an integer");
}

EtaStar EtaStar::from_alpha(std::int64_t n, const ExactRational& alpha) {
  if (n < 1) throw std::invalid_argument("EtaStar: n must be >= 1");
  if (sgn(alpha) <= 0 || alpha > 1) throw std::invalid_argument("EtaStar: alpha must lie in (0, 1]");
  const ExactRational an = alpha * n;
  const ExactRational inv = 1 / alpha;
  if (an.get_den() != 1) throw std::invalid_argument("EtaStar: alpha n is not an integer");
  if (inv.get_den() != 1) throw std::invalid_argument("EtaStar: 1/alpha is not an integer");
  if (inv > n) throw std::invalid_argument("EtaStar: need n >= 1/alpha");
  return EtaStar(n, an.get_num().get_si());
}

EtaStar pad_to_integral(std::int64_t n, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("pad_to_integral: alpha out of range");
  if (n < 1) throw std::invalid_argument("pad_to_integral: n must be >= 1");
  const auto q = static_cast<std::int64_t>(std::ceil(1.0 / alpha - 1e-12));
  const std::int64_t m1 = (n + q - 1) / q;
  return EtaStar(m1 * q, m1);
}

ExactRational gamma_star(const EtaStar& es) {
  const std::int64_t n = es.n();
  const std::int64_t m = es.m_alpha();
  return binom_exact(n - es.inv_alpha(), m) / binom_exact(n, m);
}

ExactRational gamma_star(std::int64_t n, const ExactRational& alpha) {
  return gamma_star(EtaStar::from_alpha(n, alpha));
}

double gamma_limit_check(const ExactRational& alpha, std::int64_t n) {
  return std::abs(gamma_star(n, alpha).get_d() - std::exp(-1.0));
}

Region eta_star_sample(const EtaStar& es, RngStream& rng) {
  std::vector<OutcomeId> ids(static_cast<std::size_t>(es.n()));
  std::iota(ids.begin(), ids.end(), OutcomeId{0});
  const auto n = static_cast<std::uint64_t>(es.n());
  const auto m = static_cast<std::uint64_t>(es.m_alpha());
  for (std::uint64_t i = 0; i < m; ++i) {
    const std::uint64_t j = i + rng.uniform_index(n - i);
    std::swap(ids[i], ids[j]);
  }
  ids.resize(m);
  return Region(std::move(ids));
}

std::vector<Region> enumerate_subsets(std::int64_t n, std::int64_t m, std::uint64_t limit) {
  if (m < 0 || m > n) throw std::invalid_argument("enumerate_subsets: need 0 <= m <= n");
  const ExactRational count = binom_exact(n, m);
  if (count > ExactRational(static_cast<double>(limit))) {
    throw ResourceLimitError("enumerate_subsets: C(n, alpha n) exceeds the enumeration cap");
  }
  std::vector<Region> out;
  out.reserve(count.get_num().get_ui());
  std::vector<OutcomeId> idx(static_cast<std::size_t>(m));
  std::iota(idx.begin(), idx.end(), OutcomeId{0});
  while (true) {
    out.emplace_back(idx);
    // Advance the rightmost index that still has room.
    std::int64_t i = m - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == static_cast<OutcomeId>(n - m + i)) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (auto j = static_cast<std::size_t>(i) + 1; j < idx.size(); ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

Coupling AgnosticCoupling::as_coupling(std::size_t n) const {
  std::vector<CouplingAtom> atoms;
  atoms.reserve(flows.size());
  for (const auto& f : flows) atoms.push_back({f.outcome, subsets[f.subset], f.mass});
  return Coupling(n, std::move(atoms));
}

namespace {

template <class T, class RhoAt>
T solve_transport(std::size_t n, RhoAt rho_at, const std::vector<Region>& subsets,
                  const T& subset_mass, std::vector<std::vector<T>>* flows_out) {
  const std::size_t c = subsets.size();
  const std::size_t source = 0;
  const std::size_t sink = n + c + 1;
  MaxFlow<T> mf(n + c + 2);
  for (std::size_t x = 0; x < n; ++x) mf.add_edge(source, 1 + x, rho_at(x));
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> handles(c);
  for (std::size_t a = 0; a < c; ++a) {
    for (OutcomeId x : subsets[a].members()) {
      // Capacity 1 equals the total mass, so it never binds.
      handles[a].push_back(mf.add_edge(1 + x, 1 + n + a, T(1)));
    }
    mf.add_edge(1 + n + a, sink, subset_mass);
  }
  T value = mf.solve(source, sink);
  if (flows_out != nullptr) {
    flows_out->assign(c, {});
    for (std::size_t a = 0; a < c; ++a) {
      for (const auto& h : handles[a]) (*flows_out)[a].push_back(mf.flow_on(h));
    }
  }
  return value;
}

}  // namespace

AgnosticResult build_agnostic_coupling(const DiscreteDist& rho, const EtaStar& es) {
  const auto n = static_cast<std::size_t>(es.n());
  if (rho.size() != n) throw std::invalid_argument("build_agnostic_coupling: |rho| differs from n");
  AgnosticResult out;
  out.coupling.subsets = enumerate_subsets(es.n(), es.m_alpha());
  const auto& subsets = out.coupling.subsets;
  const double subset_mass = 1.0 / static_cast<double>(subsets.size());

  std::vector<std::vector<double>> flows;
  const double value = solve_transport<double>(
      n, [&](std::size_t x) { return rho[x]; }, subsets, subset_mass, &flows);

  std::vector<double> out_left(rho.probs().begin(), rho.probs().end());
  std::vector<double> in_left(subsets.size(), subset_mass);
  for (std::size_t a = 0; a < subsets.size(); ++a) {
    const auto members = subsets[a].members();
    for (std::size_t i = 0; i < members.size(); ++i) {
      const double f = flows[a][i];
      if (f <= 0.0) continue;
      out.coupling.flows.push_back({members[i], a, f});
      out_left[members[i]] -= f;
      in_left[a] -= f;
    }
  }
  // Pair the unmatched mass in index order; any such pair has x outside A,
  // otherwise the flow would not have been maximal.
  std::size_t a = 0;
  for (std::size_t x = 0; x < n; ++x) {
    double left = out_left[x];
    while (left > 1e-15 && a < subsets.size()) {
      const double take = std::min(left, in_left[a]);
      if (take > 0.0) {
        out.coupling.flows.push_back({static_cast<OutcomeId>(x), a, take});
        left -= take;
        in_left[a] -= take;
      }
      if (in_left[a] <= 1e-15) ++a;
    }
  }
  out.loss = std::clamp(1.0 - value, 0.0, 1.0);
  return out;
}

ExactRational agnostic_loss_exact(const std::vector<ExactRational>& rho, const EtaStar& es) {
  const auto n = static_cast<std::size_t>(es.n());
  if (rho.size() != n) throw std::invalid_argument("agnostic_loss_exact: |rho| differs from n");
  const auto subsets = enumerate_subsets(es.n(), es.m_alpha());
  const ExactRational subset_mass(1, static_cast<unsigned long>(subsets.size()));
  const ExactRational value = solve_transport<ExactRational>(
      n, [&](std::size_t x) { return rho[x]; }, subsets, subset_mass, nullptr);
  return 1 - value;
}

ExactRational eta_star_hit_probability(const EtaStar& es, std::int64_t u_size) {
  if (u_size < 0 || u_size > es.n()) throw std::invalid_argument("hit probability: |U| out of range");
  return 1 - binom_exact(es.n() - u_size, es.m_alpha()) / binom_exact(es.n(), es.m_alpha());
}

double strassen_max_excess(const DiscreteDist& rho, const EtaStar& es) {
  const auto n = static_cast<std::size_t>(es.n());
  if (rho.size() != n) throw std::invalid_argument("strassen_check: |rho| differs from n");
  if (n > 20) throw ResourceLimitError("strassen_check: n must be <= 20");
  std::vector<double> hit(n + 1);
  for (std::size_t s = 0; s <= n; ++s) {
    hit[s] = eta_star_hit_probability(es, static_cast<std::int64_t>(s)).get_d();
  }
  const std::size_t total = std::size_t{1} << n;
  std::vector<double> mass(total, 0.0);
  double worst = 0.0;  // U = empty set
  for (std::size_t u = 1; u < total; ++u) {
    const auto low = static_cast<std::size_t>(std::countr_zero(u));
    mass[u] = mass[u & (u - 1)] + rho[low];
    worst = std::max(worst, mass[u] - hit[static_cast<std::size_t>(std::popcount(u))]);
  }
  return worst;
}

bool strassen_check(const DiscreteDist& rho, const EtaStar& es, double budget) {
  return strassen_max_excess(rho, es) <= budget + 1e-12;
}

double agnostic_budget(const DiscreteDist& rho, const EtaStar& es) {
  const double alpha = es.alpha().get_d();
  double excess = 0.0;
  for (double p : rho.probs()) excess += std::max(p - alpha, 0.0);
  return gamma_star(es).get_d() + excess;
}

}  // namespace wmstat
