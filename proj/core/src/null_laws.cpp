#include "wmstat/null_laws.hpp"

#include <stdexcept>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace wmstat {

double binomial_upper_tail(std::int64_t n, double p, std::int64_t c) {
  if (n < 0) throw std::invalid_argument("binomial_upper_tail: n must be >= 0");
  if (c <= 0) return 1.0;
  if (c > n) return 0.0;
  const boost::math::binomial_distribution<double> law(static_cast<double>(n), p);
  return boost::math::cdf(boost::math::complement(law, static_cast<double>(c - 1)));
}

std::int64_t binomial_threshold(std::int64_t n, double p, double alpha) {
  for (std::int64_t c = 0; c <= n; ++c) {
    if (binomial_upper_tail(n, p, c) <= alpha) return c;
  }
  return n + 1;
}

double gamma_upper_quantile(double shape, double alpha) {
  if (!(shape > 0.0)) throw std::invalid_argument("gamma_upper_quantile: shape must be > 0");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("gamma_upper_quantile: alpha in (0,1)");
  return boost::math::gamma_q_inv(shape, alpha);
}

}  // namespace wmstat
