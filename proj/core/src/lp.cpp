#include "wmstat/lp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wmstat/error.hpp"

namespace wmstat {

std::string_view to_string(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
  }
  return "unknown";
}

template <class T>
void BasicLpProblem<T>::validate() const {
  const std::size_t n = objective.size();
  if (bounds.size() != n) {
    throw std::invalid_argument("LpProblem: bounds size differs from variable count");
  }
  for (const auto& row : constraints) {
    if (row.coeffs.size() != n) {
      throw std::invalid_argument("LpProblem: constraint width differs from variable count");
    }
  }
  for (const auto& b : bounds) {
    if (b.hi && *b.hi < b.lo) throw std::invalid_argument("LpProblem: lo > hi");
  }
}

template struct BasicLpProblem<double>;
template struct BasicLpProblem<ExactRational>;

namespace {

template <class T>
struct Scalar;

template <>
struct Scalar<double> {
  static bool pivot_ok(double a) { return a > 1e-11; }
  static bool nonzero(double a) { return std::abs(a) > 1e-11; }
  static bool improving(double d) { return d > 1e-12; }
  static bool infeasible_phase1(double v) { return v < -1e-9; }
  static bool less(double a, double b) { return a < b - 1e-12; }
  static bool tied(double a, double b) { return std::abs(a - b) <= 1e-12; }
  static bool negative(double a) { return a < 0.0; }
};

template <>
struct Scalar<ExactRational> {
  using T = ExactRational;
  static bool pivot_ok(const T& a) { return sgn(a) > 0; }
  static bool nonzero(const T& a) { return sgn(a) != 0; }
  static bool improving(const T& d) { return sgn(d) > 0; }
  static bool infeasible_phase1(const T& v) { return sgn(v) < 0; }
  static bool less(const T& a, const T& b) { return a < b; }
  static bool tied(const T& a, const T& b) { return a == b; }
  static bool negative(const T& a) { return sgn(a) < 0; }
};

constexpr std::size_t kMaxTableauCells = 50'000'000;
constexpr std::size_t kMaxIterations = 1'000'000;

template <class T>
class Tableau {
 public:
  using S = Scalar<T>;

  Tableau(std::size_t rows, std::size_t cols)
      : cols_(cols), a_(rows, std::vector<T>(cols + 1, T(0))), basis_(rows, 0) {}

  std::vector<T>& row(std::size_t i) { return a_[i]; }
  std::size_t rows() const { return a_.size(); }
  std::size_t cols() const { return cols_; }
  std::vector<std::size_t>& basis() { return basis_; }
  T& rhs(std::size_t i) { return a_[i][cols_]; }

  void pivot(std::size_t r, std::size_t e) {
    std::vector<T>& pr = a_[r];
    const T piv = pr[e];
    for (auto& v : pr) v /= piv;
    for (std::size_t i = 0; i < a_.size(); ++i) {
      if (i == r) continue;
      const T f = a_[i][e];
      if (!S::nonzero(f)) continue;
      for (std::size_t j = 0; j <= cols_; ++j) a_[i][j] -= f * pr[j];
      a_[i][e] = T(0);
    }
    basis_[r] = e;
  }

  // Maximizes cost . columns over the current basis. Columns with
  // allowed[j] == false never enter. Returns false when unbounded.
  bool optimize(const std::vector<T>& cost, const std::vector<bool>& allowed) {
    for (std::size_t iter = 0; iter < kMaxIterations; ++iter) {
      // Bland: lowest-index improving column.
      std::size_t enter = cols_;
      for (std::size_t j = 0; j < cols_ && enter == cols_; ++j) {
        if (!allowed[j] || is_basic(j)) continue;
        T d = cost[j];
        for (std::size_t i = 0; i < a_.size(); ++i) d -= cost[basis_[i]] * a_[i][j];
        if (S::improving(d)) enter = j;
      }
      if (enter == cols_) return true;

      std::size_t leave = a_.size();
      T best{};
      for (std::size_t i = 0; i < a_.size(); ++i) {
        const T& aie = a_[i][enter];
        if (!S::pivot_ok(aie)) continue;
        T ratio = a_[i][cols_] / aie;
        if (leave == a_.size() || S::less(ratio, best) ||
            (S::tied(ratio, best) && basis_[i] < basis_[leave])) {
          leave = i;
          best = std::move(ratio);
        }
      }
      if (leave == a_.size()) return false;
      pivot(leave, enter);
    }
    throw ResourceLimitError("simplex_solve: iteration cap reached");
  }

  bool is_basic(std::size_t j) const {
    return std::find(basis_.begin(), basis_.end(), j) != basis_.end();
  }

  void erase_row(std::size_t i) {
    a_.erase(a_.begin() + static_cast<std::ptrdiff_t>(i));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
  }

 private:
  std::size_t cols_;
  std::vector<std::vector<T>> a_;
  std::vector<std::size_t> basis_;
};

template <class T>
BasicLpSolution<T> solve_impl(const BasicLpProblem<T>& p) {
  using S = Scalar<T>;
  p.validate();
  const std::size_t n = p.num_vars();

  // Shift x = lo + y so every structural variable is y >= 0; finite upper
  // bounds become ordinary rows.
  std::vector<LpRow<T>> rows;
  rows.reserve(p.constraints.size() + n);
  for (const auto& r : p.constraints) {
    T rhs = r.rhs;
    for (std::size_t j = 0; j < n; ++j) rhs -= r.coeffs[j] * p.bounds[j].lo;
    rows.push_back({r.coeffs, std::move(rhs)});
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!p.bounds[j].hi) continue;
    std::vector<T> c(n, T(0));
    c[j] = T(1);
    rows.push_back({std::move(c), *p.bounds[j].hi - p.bounds[j].lo});
  }

  const std::size_t m = rows.size();
  std::size_t n_art = 0;
  for (const auto& r : rows) n_art += S::negative(r.rhs) ? 1 : 0;
  const std::size_t cols = n + m + n_art;
  if ((m + 1) * (cols + 1) > kMaxTableauCells) {
    throw ResourceLimitError("simplex_solve: dense tableau too large");
  }

  Tableau<T> tab(m, cols);
  std::size_t art = n + m;
  for (std::size_t i = 0; i < m; ++i) {
    auto& tr = tab.row(i);
    const bool flip = S::negative(rows[i].rhs);
    for (std::size_t j = 0; j < n; ++j) tr[j] = flip ? T(-rows[i].coeffs[j]) : rows[i].coeffs[j];
    tr[n + i] = flip ? T(-1) : T(1);
    tab.rhs(i) = flip ? T(-rows[i].rhs) : rows[i].rhs;
    if (flip) {
      tr[art] = T(1);
      tab.basis()[i] = art++;
    } else {
      tab.basis()[i] = n + i;
    }
  }

  BasicLpSolution<T> sol;
  std::vector<bool> allowed(cols, true);

  if (n_art > 0) {
    std::vector<T> phase1(cols, T(0));
    for (std::size_t j = n + m; j < cols; ++j) phase1[j] = T(-1);
    tab.optimize(phase1, allowed);
    T value(0);
    for (std::size_t i = 0; i < tab.rows(); ++i) value += phase1[tab.basis()[i]] * tab.rhs(i);
    if (S::infeasible_phase1(value)) {
      sol.status = LpStatus::kInfeasible;
      return sol;
    }
    // Drive zero-level artificials out of the basis; rows with no other
    // nonzero entry are redundant.
    for (std::size_t i = 0; i < tab.rows();) {
      if (tab.basis()[i] < n + m) {
        ++i;
        continue;
      }
      std::size_t j = 0;
      while (j < n + m && !S::nonzero(tab.row(i)[j])) ++j;
      if (j == n + m) {
        tab.erase_row(i);
      } else {
        tab.pivot(i, j);
        ++i;
      }
    }
    for (std::size_t j = n + m; j < cols; ++j) allowed[j] = false;
  }

  std::vector<T> cost(cols, T(0));
  for (std::size_t j = 0; j < n; ++j) cost[j] = p.objective[j];
  if (!tab.optimize(cost, allowed)) {
    sol.status = LpStatus::kUnbounded;
    return sol;
  }

  sol.status = LpStatus::kOptimal;
  sol.x.resize(n);
  for (std::size_t j = 0; j < n; ++j) sol.x[j] = p.bounds[j].lo;
  for (std::size_t i = 0; i < tab.rows(); ++i) {
    const std::size_t b = tab.basis()[i];
    if (b < n) sol.x[b] += tab.rhs(i);
  }
  sol.objective = T(0);
  for (std::size_t j = 0; j < n; ++j) sol.objective += p.objective[j] * sol.x[j];
  return sol;
}

}  // namespace

LpSolution simplex_solve(const LpProblem& p) { return solve_impl(p); }

ExactLpSolution simplex_solve(const ExactLpProblem& p) { return solve_impl(p); }

double max_violation(const LpProblem& p, const std::vector<double>& x) {
  double worst = 0.0;
  for (const auto& r : p.constraints) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) lhs += r.coeffs[j] * x[j];
    worst = std::max(worst, lhs - r.rhs);
  }
  for (std::size_t j = 0; j < x.size(); ++j) {
    worst = std::max(worst, p.bounds[j].lo - x[j]);
    if (p.bounds[j].hi) worst = std::max(worst, x[j] - *p.bounds[j].hi);
  }
  return worst;
}

}  // namespace wmstat
