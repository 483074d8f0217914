#pragma once

#include <cstdint>

#include <gmpxx.h>

namespace wmstat {

// Arbitrary-precision fraction, always kept in lowest terms with a positive
// denominator.
using ExactRational = mpq_class;
using BigInt = mpz_class;

// C(n, k) as an integer-valued rational; 0 when k < 0 or k > n.
ExactRational binom_exact(std::int64_t n, std::int64_t k);

inline ExactRational make_rational(long num, unsigned long den) {
  ExactRational r(num, den);
  r.canonicalize();
  return r;
}

}  // namespace wmstat
