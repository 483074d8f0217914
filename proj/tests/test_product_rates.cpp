#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "wmstat/error.hpp"
#include "wmstat/product_rates.hpp"
#include "wmstat/rng.hpp"

using namespace wmstat;

TEST(Type2ProductExact, Examples) {
  EXPECT_NEAR(type2_product_exact(DiscreteDist::uniform(2), 3, 0.2), 0.0, 1e-15);
  EXPECT_NEAR(type2_product_exact(DiscreteDist({0.9, 0.1}), 2, 0.5), 0.31, 1e-14);
  for (int n : {1, 5, 40}) {
    EXPECT_NEAR(type2_product_exact(DiscreteDist::point_mass(3, 1), n, 0.3), 0.7, 1e-14);
  }
  EXPECT_NEAR(type2_product_exact(DiscreteDist({0.9, 0.1}), 0, 0.5), 0.5, 1e-15);
}

TEST(Type2ProductExact, ClassCapIsAResourceLimit) {
  // C(n + 9, 9) classes for k = 10, n = 60 is about 4e10.
  EXPECT_THROW(type2_product_exact(DiscreteDist::uniform(10), 60, 0.1), ResourceLimitError);
}

TEST(Type2ProductExact, MatchesRationalEnumerationOnDyadicLaws) {
  struct Case {
    std::vector<ExactRational> rho;
    int n_max;
  };
  const std::vector<Case> cases = {
      {{ExactRational(1, 4), ExactRational(3, 4)}, 12},
      {{ExactRational(1, 8), ExactRational(3, 8), ExactRational(1, 2)}, 8},
      {{ExactRational(1, 16), ExactRational(3, 16), ExactRational(1, 4), ExactRational(1, 2)}, 6},
  };
  for (const auto& c : cases) {
    std::vector<double> d;
    for (const auto& q : c.rho) d.push_back(q.get_d());
    const DiscreteDist rho(d);
    for (int n = 1; n <= c.n_max; ++n) {
      for (const ExactRational alpha : {ExactRational(1, 64), ExactRational(1, 8), ExactRational(3, 1024)}) {
        const double expected = oracle::product_type2_enumerate(c.rho, n, alpha).get_d();
        EXPECT_NEAR(type2_product_exact(rho, n, alpha.get_d()), expected, 1e-12)
            << "k=" << c.rho.size() << " n=" << n << " alpha=" << alpha;
      }
    }
  }
}

TEST(Type2ProductExact, BinomialPathMatchesGenericSum) {
  for (double h : {0.05, 0.1, 0.2, 0.5}) {
    const DiscreteDist rho = hard_instance(h);
    for (int n : {1, 7, 50, 200}) {
      for (double alpha : {0.01, 0.05}) {
        EXPECT_NEAR(type2_binomial(rho, n, alpha), type2_product_exact(rho, n, alpha), 1e-12)
            << h << " " << n;
      }
    }
  }
}

TEST(Type2ProductExact, NonIncreasingInAlpha) {
  const DiscreteDist rho({0.6, 0.3, 0.1});
  for (int n : {3, 8}) {
    double prev = 2.0;
    for (int i = 1; i < 100; ++i) {
      const double b = type2_product_exact(rho, n, i / 100.0);
      EXPECT_LE(b, prev + 1e-15);
      prev = b;
    }
  }
}

TEST(Type2ProductMc, DegenerateIntegrands) {
  const auto pm = type2_product_mc(DiscreteDist::point_mass(2, 0), 5, 0.3, 1000, 1);
  EXPECT_NEAR(pm.estimate, 0.7, 1e-12);
  EXPECT_EQ(pm.stderr_, 0.0);
  const auto zero = type2_product_mc(DiscreteDist::uniform(2), 3, 0.2, 1000, 1);
  EXPECT_EQ(zero.estimate, 0.0);
  EXPECT_EQ(zero.stderr_, 0.0);
  EXPECT_THROW(type2_product_mc(DiscreteDist::uniform(2), 3, 0.2, 99, 1), std::invalid_argument);
}

TEST(Type2ProductMc, AgreesWithExactValue) {
  const auto mc = type2_product_mc(DiscreteDist({0.9, 0.1}), 2, 0.5, 100'000, 4);
  EXPECT_GT(mc.stderr_, 0.0);
  EXPECT_NEAR(mc.estimate, 0.31, 4 * mc.stderr_);
}

TEST(Type2ProductMc, IndependentOfWorkerCount) {
  const DiscreteDist rho({0.5, 0.3, 0.2});
  const auto a = type2_product_mc(rho, 6, 0.01, 50'000, 9, 1);
  const auto b = type2_product_mc(rho, 6, 0.01, 50'000, 9, 4);
  EXPECT_EQ(a.estimate, b.estimate);
  EXPECT_EQ(a.stderr_, b.stderr_);
}

TEST(HardInstance, EntropyAndOrientation) {
  const auto half = hard_instance(std::numbers::ln2);
  EXPECT_NEAR(half[0], 0.5, 1e-12);
  const auto d = hard_instance(0.325083);
  EXPECT_NEAR(d[0], 0.1, 1e-6);
  EXPECT_NEAR(d[1], 0.9, 1e-6);
  double prev_q = 0.5;
  for (double h = 0.6; h > 1e-4; h *= 0.7) {
    const auto r = hard_instance(h);
    EXPECT_NEAR(entropy(r), h, 1e-9);
    EXPECT_GE(r[1], 0.5);
    EXPECT_GT(r[1], prev_q);
    prev_q = r[1];
  }
  EXPECT_GT(prev_q, 0.9999);
  EXPECT_THROW(hard_instance(0.0), std::domain_error);
  EXPECT_THROW(hard_instance(0.8), std::domain_error);
}

TEST(RateBounds, FormulaValues) {
  EXPECT_NEAR(thm2_lower(0.1, 0.05, 0.05), std::log(10.0) / 0.1, 1e-12);
  EXPECT_NEAR(thm2_lower(0.1, 0.05, 0.05), 23.026, 1e-3);
  // min(ln 50, ln 10) = ln 10 in the first branch; the second branch wins.
  const double first = std::log(std::numbers::ln2 / 0.1) / 0.2 * std::log(10.0);
  EXPECT_NEAR(thm2_lower(0.1, 0.01, 0.05), std::max(first, std::log(50.0) / 0.1), 1e-12);
  EXPECT_NEAR(thm2_lower(0.1, 0.05, 0.01), std::max(first, std::log(10.0) / 0.1), 1e-12);
  EXPECT_NEAR(thm2_upper(0.1, 0.05, 0.05, 2), 200 * (2 * std::log(180.0) / 0.1) * std::log(20.0), 1e-8);
  EXPECT_NEAR(thm2_upper(0.1, 0.05, 0.05, 2), 62226.8337, 1e-3);
}

TEST(RateBounds, UpperDominatesLowerOnGrid) {
  for (int i = 2; i <= 24; i += 2) {
    const double h = i / 100.0;
    for (double a : {0.01, 0.05}) {
      const RateBounds b = rate_bounds(h, a, a, 2);
      EXPECT_GT(b.lower, 0.0);
      EXPECT_LE(b.lower, b.upper);
    }
  }
}

TEST(RateBounds, UpperGrowsLogarithmicallyInK) {
  for (double h : {0.02, 0.1, 0.2}) {
    const double ratio = thm2_upper(h, 0.05, 0.05, 1024) / thm2_upper(h, 0.05, 0.05, 2);
    const double term1 = std::log(9.0 * 1024 / h) / std::log(18.0 / h);
    const double term2 = (18 + 4 * std::log(9.0 * 1024)) / (18 + 4 * std::log(18.0));
    EXPECT_GT(ratio, 1.0);
    EXPECT_LE(ratio, std::max(term1, term2) + 1e-12);
  }
}

TEST(RateBounds, DomainErrors) {
  EXPECT_THROW(thm2_lower(0.3, 0.05, 0.05), std::domain_error);
  EXPECT_THROW(thm2_lower(0.1, 0.2, 0.05), std::domain_error);
  EXPECT_THROW(thm2_upper(0.1, 0.05, 0.1, 2), std::domain_error);
  EXPECT_THROW(thm2_upper(0.1, 0.05, 0.05, 1), std::domain_error);
}

TEST(RequiredTokens, PointMassNeverCrosses) {
  const auto r = n_required_empirical(DiscreteDist::point_mass(2, 0), 0.05, 0.05, 200);
  EXPECT_FALSE(r.n_star.has_value());
  ASSERT_EQ(r.curve.entries.size(), 200u);
  for (const auto& e : r.curve.entries) EXPECT_NEAR(e.beta, 0.95, 1e-14);
}

TEST(RequiredTokens, FairCoinCrossesAtFive) {
  const auto r = n_required_empirical(DiscreteDist::uniform(2), 0.05, 0.05, 100);
  ASSERT_TRUE(r.n_star.has_value());
  EXPECT_EQ(*r.n_star, 5);
  EXPECT_NEAR(r.curve.entries[3].beta, 0.2, 1e-14);
}

TEST(RequiredTokens, HardInstanceSandwich) {
  const RateBounds b = rate_bounds(0.1, 0.01, 0.01, 2);
  const auto r = n_required_empirical(hard_instance(0.1), 0.01, 0.01, 100'000);
  ASSERT_TRUE(r.n_star.has_value());
  EXPECT_EQ(*r.n_star, 189);  // regression baseline
  EXPECT_LE(b.lower, static_cast<double>(*r.n_star));
  EXPECT_LE(static_cast<double>(*r.n_star), b.upper);
  for (const auto& e : r.curve.entries) {
    if (static_cast<double>(e.n) < b.lower) EXPECT_GT(e.beta, 0.01) << e.n;
  }
}

TEST(RequiredTokens, CurveIsStrictlyIncreasingInN) {
  const auto r = n_required_empirical(DiscreteDist({0.3, 0.7}), 0.05, 0.01, 80, true);
  ASSERT_EQ(r.curve.entries.size(), 80u);
  for (std::size_t i = 0; i < r.curve.entries.size(); ++i) {
    EXPECT_EQ(r.curve.entries[i].n, static_cast<std::int64_t>(i + 1));
    EXPECT_GE(r.curve.entries[i].beta, 0.0);
    EXPECT_LE(r.curve.entries[i].beta, 1.0);
  }
}
