#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "wmstat/coupling.hpp"
#include "wmstat/lp.hpp"
#include "wmstat/prob.hpp"

namespace wmstat {

// Directed graph over outcomes whose edges are the edits an adversarial user
// may apply. Every vertex carries a self-loop.
class PerturbationGraph {
 public:
  // Successor lists are sorted and deduplicated; throws std::invalid_argument
  // if an id is out of range or a self-loop is missing.
  explicit PerturbationGraph(std::vector<std::vector<OutcomeId>> out_adj);

  // Builds from an edge list, adding any missing self-loops. added_loops (if
  // given) receives how many were added.
  static PerturbationGraph from_edges(std::size_t n,
                                      const std::vector<std::pair<OutcomeId, OutcomeId>>& edges,
                                      std::size_t* added_loops = nullptr);
  static PerturbationGraph self_loops(std::size_t n);
  static PerturbationGraph complete(std::size_t n);

  std::size_t size() const noexcept { return out_.size(); }
  const std::vector<OutcomeId>& out(OutcomeId v) const { return out_[v]; }
  const std::vector<OutcomeId>& in(OutcomeId v) const { return in_[v]; }
  std::size_t edge_count() const;

 private:
  std::vector<std::vector<OutcomeId>> out_;
  std::vector<std::vector<OutcomeId>> in_;
};

// Strings of length n over k symbols, u -> v iff Hamming(u, v) <= c. Vertex
// id is the base-k number with the first symbol most significant. Throws
// ResourceLimitError when k^n > 10^4.
PerturbationGraph hamming_graph(std::size_t k, std::size_t n, std::size_t c);

// Text format: "vertices N" then one "u v" pair per line; blank lines and
// '#' comments are ignored. Missing self-loops are added and reported on
// the warnings stream.
PerturbationGraph read_edge_list(std::istream& in, std::ostream* warnings = nullptr);
PerturbationGraph load_edge_list(const std::string& path, std::ostream* warnings = nullptr);
void write_edge_list(std::ostream& out, const PerturbationGraph& g);

// S_G(R) = {x : out(x) is a subset of R}.
Region shrinkage(const PerturbationGraph& g, const Region& r);

// maximize sum rho(y) x(y)  s.t.  sum_{y in in(z)} rho(y) x(y) <= alpha for
// every z, 0 <= x <= 1, plus sum_z x(z) <= 1 when include_sum_row.
LpProblem robust_lp_build(const DiscreteDist& rho, double alpha, const PerturbationGraph& g,
                          bool include_sum_row);
ExactLpProblem robust_lp_build_exact(const std::vector<ExactRational>& rho,
                                     const ExactRational& alpha, const PerturbationGraph& g,
                                     bool include_sum_row);

struct RobustSolution {
  LpSolution lp;
  double beta = 1.0;  // 1 - optimum
};

RobustSolution robust_solve(const DiscreteDist& rho, double alpha, const PerturbationGraph& g,
                            bool include_sum_row = false);

// Atoms (y, out(y), rho(y) x*(y)) and (y, empty, rho(y) (1 - x*(y))) from the
// LP solution without the sum row.
Coupling robust_ump_build(const DiscreteDist& rho, double alpha, const PerturbationGraph& g);

// E[max over Y in out(X) of 1(Y not in R)].
double robust_type2_exact(const Coupling& c, const PerturbationGraph& g);

}  // namespace wmstat
