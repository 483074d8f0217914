#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "wmstat/rational.hpp"

namespace wmstat {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

std::string_view to_string(LpStatus s);

template <class T>
struct LpRow {
  std::vector<T> coeffs;
  T rhs;
};

template <class T>
struct VarBounds {
  T lo{};
  std::optional<T> hi;  // nullopt: unbounded above
};

// maximize objective . x  s.t.  row.coeffs . x <= row.rhs,  lo <= x <= hi.
template <class T>
struct BasicLpProblem {
  std::vector<T> objective;
  std::vector<LpRow<T>> constraints;
  std::vector<VarBounds<T>> bounds;

  std::size_t num_vars() const { return objective.size(); }
  // Throws std::invalid_argument on inconsistent dimensions or lo > hi.
  void validate() const;
};

template <class T>
struct BasicLpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<T> x;
  T objective{};
};

using LpProblem = BasicLpProblem<double>;
using LpSolution = BasicLpSolution<double>;
using ExactLpProblem = BasicLpProblem<ExactRational>;
using ExactLpSolution = BasicLpSolution<ExactRational>;

// Two-phase primal simplex on a dense tableau with Bland's rule. Floating
// pivots use a 1e-11 threshold.
LpSolution simplex_solve(const LpProblem& p);
// Same algorithm with exact rational pivoting.
ExactLpSolution simplex_solve(const ExactLpProblem& p);

// Largest violation of any row or bound by x (0 when feasible).
double max_violation(const LpProblem& p, const std::vector<double>& x);

}  // namespace wmstat
