#pragma once

#include "wmstat/coupling.hpp"
#include "wmstat/prob.hpp"

namespace wmstat {

// Result of the TV-constrained water-filling.
struct DistortionResult {
  DiscreteDist distorted;
  double objective = 0.0;   // sum over x of (rho*(x) - alpha)_+
  double surplus = 0.0;     // S = sum (rho(x) - alpha)_+
  double capacity = 0.0;    // C = sum (alpha - rho(x))_+
  double moved = 0.0;       // min(eps, S, C)
};

// A minimizer of sum (rho'(x) - alpha)_+ over the TV ball of radius eps.
// Mass moves greedily from the largest surplus to the largest spare
// capacity; the objective is order independent but the returned
// distribution is one representative of a non-unique argmin.
DistortionResult optimal_distortion_detail(const DiscreteDist& rho, double alpha, double eps);
DiscreteDist optimal_distortion(const DiscreteDist& rho, double alpha, double eps);

// Optimal Type II error value, (S - min(eps, S, C))_+.
double ump_type2_closed_form(const DiscreteDist& rho, double alpha, double eps = 0.0);

// Uniformly most powerful eps-distorted watermark of level alpha: outcome x
// is paired with {x} with weight min(rho*(x), alpha) and with the empty
// region with the remaining (rho*(x) - alpha)_+. Outcomes with rho*(x) = 0
// get no atoms.
Coupling ump_build(const DiscreteDist& rho, double alpha, double eps = 0.0);

// Minimum Type II error over every coupling with X-marginal rho and Type I
// <= alpha, by solving the full LP over P(R | x) for all 2^k regions.
// Independent of the closed form; limited to k <= 4.
double ump_oracle(const DiscreteDist& rho, double alpha);

}  // namespace wmstat
