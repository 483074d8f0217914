#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "wmstat/prob.hpp"
#include "wmstat/rational.hpp"
#include "wmstat/rng.hpp"

using namespace wmstat;

TEST(DiscreteDist, RejectsInvalidEntries) {
  EXPECT_THROW(DiscreteDist(std::vector<double>{}), std::invalid_argument);
  EXPECT_THROW(DiscreteDist({0.5, 0.6}), std::invalid_argument);
  EXPECT_THROW(DiscreteDist({-0.1, 1.1}), std::invalid_argument);
  EXPECT_THROW(DiscreteDist({NAN, 1.0}), std::invalid_argument);
  EXPECT_NO_THROW(DiscreteDist({0.5, 0.5 + 5e-13}));
}

TEST(Entropy, Values) {
  EXPECT_NEAR(entropy(DiscreteDist::uniform(4)), std::log(4.0), 1e-15);
  EXPECT_EQ(entropy(DiscreteDist::point_mass(3, 1)), 0.0);
  EXPECT_NEAR(entropy(DiscreteDist({0.9, 0.1})), 0.325083, 1e-6);
  EXPECT_NEAR(entropy(DiscreteDist({0.9, 0.1})), binary_entropy(0.1), 1e-15);
}

TEST(BinaryEntropy, ValuesAndDomain) {
  EXPECT_NEAR(binary_entropy(0.5), std::numbers::ln2, 1e-15);
  EXPECT_EQ(binary_entropy(0.0), 0.0);
  EXPECT_EQ(binary_entropy(1.0), 0.0);
  EXPECT_NEAR(binary_entropy(0.1), 0.325083, 1e-6);
  EXPECT_NEAR(binary_entropy(0.3), binary_entropy(0.7), 1e-15);
  EXPECT_THROW(binary_entropy(-0.01), std::domain_error);
  EXPECT_THROW(binary_entropy(1.01), std::domain_error);
}

TEST(InvBinaryEntropy, Values) {
  EXPECT_DOUBLE_EQ(inv_binary_entropy(std::numbers::ln2, EntropyBranch::kHigh), 0.5);
  EXPECT_EQ(inv_binary_entropy(0.0, EntropyBranch::kHigh), 1.0);
  EXPECT_EQ(inv_binary_entropy(0.0, EntropyBranch::kLow), 0.0);
  EXPECT_NEAR(inv_binary_entropy(0.325083, EntropyBranch::kHigh), 0.9, 1e-6);
  EXPECT_NEAR(inv_binary_entropy(binary_entropy(0.1), EntropyBranch::kHigh), 0.9, 1e-9);
  EXPECT_THROW(inv_binary_entropy(-1e-3, EntropyBranch::kLow), std::domain_error);
  EXPECT_THROW(inv_binary_entropy(0.7, EntropyBranch::kLow), std::domain_error);
}

TEST(InvBinaryEntropy, RoundTripOnGrid) {
  for (int i = 1; i < 100; ++i) {
    const double x = i / 100.0;
    const auto branch = x <= 0.5 ? EntropyBranch::kLow : EntropyBranch::kHigh;
    const double h = binary_entropy(x);
    const double y = inv_binary_entropy(h, branch);
    EXPECT_NEAR(y, x, 1e-9) << x;
    EXPECT_NEAR(binary_entropy(y), h, 1e-12) << x;
  }
}

// Topsoe's bounds hold with the entropy measured in bits; in nats the lower
// one already fails at x = 1/2.
TEST(BinaryEntropy, TopsoeBoundsInBits) {
  for (int i = 1; i < 200; ++i) {
    const double x = i / 200.0;
    const double q = 4.0 * x * (1.0 - x);
    const double bits = binary_entropy(x) / std::numbers::ln2;
    EXPECT_LE(q, bits + 1e-15) << x;
    EXPECT_LE(bits, std::pow(q, 1.0 / std::log(4.0)) + 1e-15) << x;
  }
  EXPECT_GT(4.0 * 0.5 * 0.5, binary_entropy(0.5));
}

TEST(InvBinaryEntropy, TailMassBounds) {
  for (double h = 0.01; h <= 0.25; h += 0.01) {
    const double tail = 1.0 - inv_binary_entropy(h, EntropyBranch::kHigh);
    EXPECT_LE(h / (9.0 * std::log(9.0 * 2.0 * std::log(9.0 * 2.0) / h)), tail) << h;
    EXPECT_LE(tail, h / std::log(std::numbers::ln2 / h)) << h;
  }
}

TEST(TvDistance, ValuesAndMetric) {
  const DiscreteDist a({0.7, 0.3}), b({0.5, 0.5});
  EXPECT_EQ(tv_distance(a, a), 0.0);
  EXPECT_EQ(tv_distance(DiscreteDist({1.0, 0.0}), DiscreteDist({0.0, 1.0})), 1.0);
  EXPECT_NEAR(tv_distance(a, b), 0.2, 1e-15);
  EXPECT_THROW(tv_distance(a, DiscreteDist::uniform(3)), std::invalid_argument);

  RngStream rng(11, 0);
  for (int t = 0; t < 200; ++t) {
    const auto p = random_distribution(5, rng), q = random_distribution(5, rng),
               r = random_distribution(5, rng);
    EXPECT_DOUBLE_EQ(tv_distance(p, q), tv_distance(q, p));
    EXPECT_LE(tv_distance(p, r), tv_distance(p, q) + tv_distance(q, r) + 1e-15);
    EXPECT_GE(tv_distance(p, q), 0.0);
    EXPECT_LE(tv_distance(p, q), 1.0);
  }
}

TEST(BinomExact, ValuesAndPascal) {
  EXPECT_EQ(binom_exact(4, 2), 6);
  EXPECT_EQ(binom_exact(0, 1), 0);
  EXPECT_EQ(binom_exact(9, 3), 84);
  EXPECT_EQ(binom_exact(5, -1), 0);
  for (int n = 0; n <= 40; ++n) {
    for (int k = 0; k <= n; ++k) {
      EXPECT_EQ(binom_exact(n, k), ExactRational(oracle::pascal_binomial(n, k))) << n << "," << k;
    }
  }
  EXPECT_THROW(binom_exact(-1, 0), std::invalid_argument);
}

TEST(Sample, PointMassAndDeterminism) {
  RngStream rng(5, 0);
  const auto pm = DiscreteDist::point_mass(4, 2);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sample(pm, rng), 2u);

  const auto d = DiscreteDist({0.2, 0.3, 0.5});
  RngStream a(9, 3), b(9, 3);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(sample(d, a), sample(d, b));
}

TEST(Sample, FairCoinFrequency) {
  RngStream rng(7, 0);
  const auto d = DiscreteDist::uniform(2);
  const int n = 1'000'000;
  int zeros = 0;
  for (int i = 0; i < n; ++i) zeros += sample(d, rng) == 0;
  const double sigma = std::sqrt(0.25 / n);
  EXPECT_NEAR(static_cast<double>(zeros) / n, 0.5, 4 * sigma);
}

TEST(Sample, SkipsZeroMassOutcomes) {
  const DiscreteDist d({0.5, 0.0, 0.5, 0.0});
  EXPECT_EQ(sample_with_uniform(d, 0.0), 0u);
  EXPECT_EQ(sample_with_uniform(d, 0.5), 2u);
  EXPECT_EQ(sample_with_uniform(d, std::nextafter(1.0, 0.0)), 2u);
}

TEST(RngStream, ReproducibleAndDistinct) {
  RngStream a(42, 0), b(42, 0), c(42, 1);
  int differ = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a(), y = b(), z = c();
    EXPECT_EQ(x, y);
    differ += x != z;
  }
  EXPECT_GE(differ, 990);
}

TEST(RngStream, UniformRangesAndEquidistribution) {
  RngStream rng(3, 9);
  std::vector<int> bins(10, 0);
  const int n = 100'000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ++bins[static_cast<std::size_t>(u * 10)];
    const double v = rng.uniform_open_closed();
    ASSERT_GT(v, 0.0);
    ASSERT_LE(v, 1.0);
    const double w = rng.uniform_open01();
    ASSERT_GT(w, 0.0);
    ASSERT_LT(w, 1.0);
    ASSERT_LT(rng.uniform_index(7), 7u);
  }
  const double sigma = std::sqrt(0.1 * 0.9 * n);
  for (int b : bins) EXPECT_NEAR(b, n / 10.0, 4 * sigma);
}
