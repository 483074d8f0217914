#include "wmstat/robust.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "wmstat/error.hpp"

namespace wmstat {

PerturbationGraph::PerturbationGraph(std::vector<std::vector<OutcomeId>> out_adj)
    : out_(std::move(out_adj)), in_(out_.size()) {
  const std::size_t n = out_.size();
  for (std::size_t v = 0; v < n; ++v) {
    auto& succ = out_[v];
    std::sort(succ.begin(), succ.end());
    succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
    if (!succ.empty() && succ.back() >= n) {
      throw std::invalid_argument("PerturbationGraph: successor id out of range");
    }
    if (!std::binary_search(succ.begin(), succ.end(), static_cast<OutcomeId>(v))) {
      throw std::invalid_argument("PerturbationGraph: vertex " + std::to_string(v) +
                                  " lacks a self-loop");
    }
    for (OutcomeId w : succ) in_[w].push_back(static_cast<OutcomeId>(v));
  }
}

PerturbationGraph PerturbationGraph::from_edges(
    std::size_t n, const std::vector<std::pair<OutcomeId, OutcomeId>>& edges,
    std::size_t* added_loops) {
  std::vector<std::vector<OutcomeId>> adj(n);
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n) throw std::invalid_argument("PerturbationGraph: edge out of range");
    adj[u].push_back(v);
  }
  std::size_t added = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (std::find(adj[v].begin(), adj[v].end(), v) == adj[v].end()) {
      adj[v].push_back(static_cast<OutcomeId>(v));
      ++added;
    }
  }
  if (added_loops != nullptr) *added_loops = added;
  return PerturbationGraph(std::move(adj));
}

PerturbationGraph PerturbationGraph::self_loops(std::size_t n) { return from_edges(n, {}); }

PerturbationGraph PerturbationGraph::complete(std::size_t n) {
  std::vector<std::vector<OutcomeId>> adj(n);
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t w = 0; w < n; ++w) adj[v].push_back(static_cast<OutcomeId>(w));
  }
  return PerturbationGraph(std::move(adj));
}

std::size_t PerturbationGraph::edge_count() const {
  std::size_t e = 0;
  for (const auto& s : out_) e += s.size();
  return e;
}

PerturbationGraph hamming_graph(std::size_t k, std::size_t n, std::size_t c) {
  if (k < 1) throw std::invalid_argument("hamming_graph: k must be >= 1");
  std::size_t count = 1;
  for (std::size_t i = 0; i < n; ++i) {
    count *= k;
    if (count > 10'000) throw ResourceLimitError("hamming_graph: k^n exceeds 10^4");
  }
  std::vector<std::vector<std::size_t>> digits(count, std::vector<std::size_t>(n));
  for (std::size_t v = 0; v < count; ++v) {
    std::size_t rest = v;
    for (std::size_t pos = n; pos-- > 0;) {
      digits[v][pos] = rest % k;
      rest /= k;
    }
  }
  std::vector<std::vector<OutcomeId>> adj(count);
  for (std::size_t u = 0; u < count; ++u) {
    for (std::size_t v = 0; v < count; ++v) {
      std::size_t d = 0;
      for (std::size_t pos = 0; pos < n && d <= c; ++pos) d += digits[u][pos] != digits[v][pos];
      if (d <= c) adj[u].push_back(static_cast<OutcomeId>(v));
    }
  }
  return PerturbationGraph(std::move(adj));
}

PerturbationGraph read_edge_list(std::istream& in, std::ostream* warnings) {
  std::string line;
  std::size_t n = 0;
  bool have_header = false;
  std::vector<std::pair<OutcomeId, OutcomeId>> edges;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (!have_header) {
      if (first != "vertices" || !(ls >> n)) {
        throw std::invalid_argument("edge list line " + std::to_string(lineno) +
                                    ": expected 'vertices N'");
      }
      have_header = true;
      continue;
    }
    std::istringstream pair_in(line);
    long long u = -1;
    long long v = -1;
    if (!(pair_in >> u >> v) || u < 0 || v < 0 || static_cast<std::size_t>(u) >= n ||
        static_cast<std::size_t>(v) >= n) {
      throw std::invalid_argument("edge list line " + std::to_string(lineno) +
                                  ": expected 'u v' with ids below " + std::to_string(n));
    }
    edges.emplace_back(static_cast<OutcomeId>(u), static_cast<OutcomeId>(v));
  }
  if (!have_header) throw std::invalid_argument("edge list: missing 'vertices N' header");
  std::size_t added = 0;
  auto g = PerturbationGraph::from_edges(n, edges, &added);
  if (added > 0 && warnings != nullptr) {
    *warnings << "warning: added " << added << " missing self-loop(s) to perturbation graph\n";
  }
  return g;
}

PerturbationGraph load_edge_list(const std::string& path, std::ostream* warnings) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open edge list '" + path + "'");
  return read_edge_list(in, warnings);
}

void write_edge_list(std::ostream& out, const PerturbationGraph& g) {
  out << "vertices " << g.size() << '\n';
  for (std::size_t v = 0; v < g.size(); ++v) {
    for (OutcomeId w : g.out(static_cast<OutcomeId>(v))) out << v << ' ' << w << '\n';
  }
}

Region shrinkage(const PerturbationGraph& g, const Region& r) {
  std::vector<OutcomeId> kept;
  for (OutcomeId x : r.members()) {
    // out(x) contains x, so only members of R can qualify.
    const auto& succ = g.out(x);
    if (std::all_of(succ.begin(), succ.end(), [&](OutcomeId y) { return r.contains(y); })) {
      kept.push_back(x);
    }
  }
  return Region(std::move(kept));
}

namespace {

template <class T, class RhoAt>
BasicLpProblem<T> build_robust_lp(std::size_t n, RhoAt rho_at, const T& alpha,
                                  const PerturbationGraph& g, bool include_sum_row) {
  if (g.size() != n) throw std::invalid_argument("robust_lp_build: graph size differs from |rho|");
  BasicLpProblem<T> lp;
  lp.objective.resize(n);
  lp.bounds.assign(n, VarBounds<T>{T(0), T(1)});
  for (std::size_t y = 0; y < n; ++y) lp.objective[y] = rho_at(y);
  for (std::size_t z = 0; z < n; ++z) {
    LpRow<T> row{std::vector<T>(n, T(0)), alpha};
    for (OutcomeId y : g.in(static_cast<OutcomeId>(z))) row.coeffs[y] = rho_at(y);
    lp.constraints.push_back(std::move(row));
  }
  if (include_sum_row) lp.constraints.push_back({std::vector<T>(n, T(1)), T(1)});
  return lp;
}

}  // namespace

LpProblem robust_lp_build(const DiscreteDist& rho, double alpha, const PerturbationGraph& g,
                          bool include_sum_row) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  return build_robust_lp<double>(rho.size(), [&](std::size_t y) { return rho[y]; }, alpha, g,
                                 include_sum_row);
}

ExactLpProblem robust_lp_build_exact(const std::vector<ExactRational>& rho,
                                     const ExactRational& alpha, const PerturbationGraph& g,
                                     bool include_sum_row) {
  return build_robust_lp<ExactRational>(
      rho.size(), [&](std::size_t y) { return rho[y]; }, alpha, g, include_sum_row);
}

RobustSolution robust_solve(const DiscreteDist& rho, double alpha, const PerturbationGraph& g,
                            bool include_sum_row) {
  RobustSolution out;
  out.lp = simplex_solve(robust_lp_build(rho, alpha, g, include_sum_row));
  if (out.lp.status != LpStatus::kOptimal) {
    // x = 0 is feasible and the box bounds the objective.
    throw std::logic_error("robust LP not optimal");
  }
  out.beta = 1.0 - out.lp.objective;
  return out;
}

Coupling robust_ump_build(const DiscreteDist& rho, double alpha, const PerturbationGraph& g) {
  const RobustSolution sol = robust_solve(rho, alpha, g, false);
  std::vector<CouplingAtom> atoms;
  for (std::size_t y = 0; y < rho.size(); ++y) {
    if (rho[y] <= 0.0) continue;
    const auto id = static_cast<OutcomeId>(y);
    const double x = std::clamp(sol.lp.x[y], 0.0, 1.0);
    const double hit = rho[y] * x;
    const double miss = rho[y] - hit;
    if (hit > 0.0) atoms.push_back({id, Region(g.out(id)), hit});
    if (miss > 0.0) atoms.push_back({id, Region{}, miss});
  }
  return Coupling(rho.size(), std::move(atoms));
}

double robust_type2_exact(const Coupling& c, const PerturbationGraph& g) {
  if (g.size() != c.outcome_count()) {
    throw std::invalid_argument("robust_type2_exact: graph size differs from coupling");
  }
  double miss = 0.0;
  for (const auto& a : c.atoms()) {
    const auto& succ = g.out(a.outcome);
    if (std::any_of(succ.begin(), succ.end(), [&](OutcomeId y) { return !a.region.contains(y); })) {
      miss += a.weight;
    }
  }
  return miss;
}

}  // namespace wmstat
