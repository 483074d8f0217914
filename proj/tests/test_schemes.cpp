#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "wmstat/rng.hpp"
#include "wmstat/schemes.hpp"

using namespace wmstat;

namespace {

SchemeConfig srl(double delta, double alpha, std::int64_t n, double gamma = 0.5) {
  return {SoftRedListParams{gamma, delta}, alpha, n};
}
SchemeConfig christ(double lambda, double alpha, std::int64_t n) {
  return {ChristBinaryParams{lambda}, alpha, n};
}
SchemeConfig its(std::int64_t T, std::int64_t k, double alpha, std::int64_t n) {
  return {InverseTransformParams{T, k, true}, alpha, n};
}

double four_sigma(double p, double n) { return 4.0 * std::sqrt(p * (1.0 - p) / n); }

// Null rejection rate of a detector over independent LM text and fresh keys.
template <class Detect>
double null_rejection_rate(const ToyLM& lm, std::int64_t n, int trials, std::uint64_t seed, Detect detect) {
  int rejects = 0;
  for (int t = 0; t < trials; ++t) {
    RngStream text_rng = rng_stream(seed, static_cast<std::uint64_t>(t));
    const auto text = sample_sequence(lm, static_cast<std::size_t>(n), text_rng);
    rejects += detect(WatermarkKey{derive_seed(seed + 1, static_cast<std::uint64_t>(t))}, text) ? 1 : 0;
  }
  return static_cast<double>(rejects) / trials;
}

}  // namespace

TEST(SchemeConfig, Validation) {
  EXPECT_THROW(srl(2, 0.0, 10).validate(), std::invalid_argument);
  EXPECT_THROW(srl(2, 0.05, -1).validate(), std::invalid_argument);
  EXPECT_THROW(srl(-1, 0.05, 10).validate(), std::invalid_argument);
  EXPECT_THROW(srl(2, 0.05, 10, 1.0).validate(), std::invalid_argument);
  EXPECT_THROW(christ(-1, 0.05, 10).validate(), std::invalid_argument);
  EXPECT_THROW(its(0, 5, 0.05, 10).validate(), std::invalid_argument);
  EXPECT_THROW(its(9, 0, 0.05, 10).validate(), std::invalid_argument);
  EXPECT_EQ(scheme_name(its(9, 3, 0.05, 10)), "inverse_transform");
}

TEST(SoftRedList, GreenListSize) {
  EXPECT_EQ(green_list_size(8, 0.5), 4u);
  EXPECT_EQ(green_list_size(2, 0.01), 1u);
  EXPECT_EQ(green_list_size(2, 0.99), 1u);
  EXPECT_EQ(green_list_size(10, 0.25), 3u);
}

TEST(SoftRedList, DeterministicGivenKey) {
  const auto lm = ToyLM::random_markov(6, 2.0, 5);
  const auto cfg = srl(2.0, 0.05, 40);
  EXPECT_EQ(srl_generate(lm, {77}, cfg), srl_generate(lm, {77}, cfg));
  EXPECT_NE(srl_generate(lm, {77}, cfg), srl_generate(lm, {78}, cfg));
}

TEST(SoftRedList, ZeroDeltaIsUndistorted) {
  const auto lm = ToyLM::random_markov(3, 2.0, 8);
  const int n = 3, keys = 100'000;
  const auto law = oracle::sequence_law(lm, n);
  std::vector<std::int64_t> counts(law.size(), 0);
  for (int k = 0; k < keys; ++k) {
    counts[oracle::sequence_index(srl_generate(lm, {static_cast<std::uint64_t>(k)}, srl(0.0, 0.05, n)), 3)]++;
  }
  const auto r = oracle::empirical_tv(counts, law);
  EXPECT_LE(r.tv, 3 * r.tolerance);
}

TEST(SoftRedList, BoostFavoursGreenTokens) {
  const auto lm = ToyLM::uniform(8);
  const int n = 5, keys = 20'000;
  std::int64_t green = 0;
  for (int k = 0; k < keys; ++k) {
    const WatermarkKey key{static_cast<std::uint64_t>(k)};
    const auto cfg = srl(2.0, 0.05, n);
    green += srl_detect(key, srl_generate(lm, key, cfg), cfg, 8).green_count;
  }
  const double freq = static_cast<double>(green) / (static_cast<double>(keys) * n);
  const double boosted = 0.5 * std::exp(2.0) / (0.5 * std::exp(2.0) + 0.5);
  EXPECT_GT(freq, 0.5 + 0.05);
  EXPECT_NEAR(freq, boosted, 4 * std::sqrt(boosted * (1 - boosted) / (keys * n)));
}

// Key-averaged output law moves away from the model as delta grows. Common
// random numbers make the delta = 0 run the unwatermarked baseline itself.
TEST(SoftRedList, DistortionGrowsWithDelta) {
  const auto lm = ToyLM::unigram(DiscreteDist({0.7, 0.2, 0.1}));
  const int n = 2, keys = 20'000;
  auto law_at = [&](double delta) {
    std::vector<std::int64_t> counts(9, 0);
    for (int k = 0; k < keys; ++k) {
      counts[oracle::sequence_index(srl_generate(lm, {static_cast<std::uint64_t>(k)}, srl(delta, 0.05, n)), 3)]++;
    }
    return counts;
  };
  const auto base = law_at(0.0);
  double prev = -1.0;
  for (double delta : {0.0, 0.5, 1.0, 2.0, 4.0}) {
    const auto c = law_at(delta);
    double tv = 0.0;
    for (std::size_t i = 0; i < 9; ++i) tv += 0.5 * std::abs(double(c[i] - base[i])) / keys;
    if (delta == 0.0) EXPECT_EQ(tv, 0.0);
    EXPECT_GT(tv, prev);
    prev = tv;
  }
}

TEST(SoftRedList, NullCalibration) {
  const auto lm = ToyLM::uniform(8);
  const auto cfg = srl(2.0, 0.05, 50);
  const int trials = 10'000;
  const double rate = null_rejection_rate(lm, 50, trials, 101, [&](WatermarkKey k, const auto& text) {
    return srl_detect(k, text, cfg, 8).reject;
  });
  EXPECT_LE(rate, 0.05 + four_sigma(0.05, trials));
}

TEST(SoftRedList, PowerRegression) {
  const auto lm = ToyLM::uniform(8);
  const auto cfg = srl(5.0, 0.01, 200);
  int hits = 0;
  for (std::uint64_t k = 0; k < 300; ++k) {
    hits += srl_detect({k}, srl_generate(lm, {k}, cfg), cfg, 8).reject;
  }
  EXPECT_GE(hits / 300.0, 0.9);
}

TEST(SoftRedList, EmptyText) {
  const auto d = srl_detect({1}, {}, srl(2.0, 0.05, 0), 8);
  EXPECT_EQ(d.green_count, 0);
  EXPECT_FALSE(d.reject);
}

TEST(ChristBinary, DeterministicModelNeverKeys) {
  const auto g = christ_generate(ToyLM::deterministic(2), {3}, christ(4.0, 0.05, 30));
  EXPECT_EQ(g.start, 30u);
  const auto d = christ_detect({3}, g.tokens, g.start, christ(4.0, 0.05, 30));
  EXPECT_EQ(d.statistic, 0.0);
  EXPECT_FALSE(d.reject);
}

TEST(ChristBinary, FairCoinPrefixLength) {
  const auto cfg = christ(10 * std::numbers::ln2, 0.05, 40);
  for (std::uint64_t k = 0; k < 200; ++k) EXPECT_EQ(christ_generate(ToyLM::fair_coin(), {k}, cfg).start, 10u);
  EXPECT_EQ(christ_generate(ToyLM::fair_coin(), {1}, christ(0.0, 0.05, 40)).start, 0u);
}

TEST(ChristBinary, DistortionFree) {
  for (const ToyLM& lm : {ToyLM::fair_coin(), ToyLM::random_markov(2, 2.0, 12)}) {
    const int n = 8, keys = 100'000;
    const auto law = oracle::sequence_law(lm, n);
    std::vector<std::int64_t> counts(law.size(), 0);
    for (int k = 0; k < keys; ++k) {
      counts[oracle::sequence_index(christ_generate(lm, {static_cast<std::uint64_t>(k)}, christ(1.0, 0.05, n)).tokens, 2)]++;
    }
    const auto r = oracle::empirical_tv(counts, law);
    EXPECT_LE(r.tv, 3 * r.tolerance);
  }
}

TEST(ChristBinary, NullCalibration) {
  const auto lm = ToyLM::fair_coin();
  const int trials = 10'000;
  for (double alpha : {0.01, 0.05}) {
    const auto cfg = christ(4.0, alpha, 60);
    const double rate = null_rejection_rate(lm, 60, trials, 103, [&](WatermarkKey k, const auto& text) {
      return christ_detect(k, text, 6, cfg).reject;
    });
    EXPECT_LE(rate, alpha + four_sigma(alpha, trials));
  }
}

TEST(ChristBinary, PowerRegression) {
  const auto cfg = christ(10 * std::numbers::ln2, 0.01, 110);
  int hits = 0;
  for (std::uint64_t k = 0; k < 500; ++k) {
    const auto g = christ_generate(ToyLM::fair_coin(), {k}, cfg);
    ASSERT_EQ(g.tokens.size() - g.start, 100u);
    hits += christ_detect({k}, g.tokens, g.start, cfg).reject;
  }
  EXPECT_GE(hits / 500.0, 0.95);
}

TEST(ChristBinary, EmptyKeyedSuffixAndBadStart) {
  const std::vector<OutcomeId> tokens{0, 1, 1};
  const auto d = christ_detect({1}, tokens, 3, christ(1.0, 0.05, 3));
  EXPECT_EQ(d.statistic, 0.0);
  EXPECT_FALSE(d.reject);
  EXPECT_THROW(christ_detect({1}, tokens, 4, christ(1.0, 0.05, 3)), std::invalid_argument);
}

TEST(InverseTransform, TokenByHand) {
  const DiscreteDist mu({0.5, 0.5});
  const std::vector<OutcomeId> identity{0, 1}, swapped{1, 0};
  EXPECT_EQ(inverse_transform_token(mu, identity, 0.999), 1u);
  EXPECT_EQ(inverse_transform_token(mu, identity, 0.5), 0u);
  EXPECT_EQ(inverse_transform_token(mu, swapped, 0.3), 1u);
  EXPECT_EQ(inverse_transform_token(mu, identity, 1.0), 1u);
  EXPECT_EQ(inverse_transform_token(DiscreteDist({0.5, 0.5, 0.0}), std::vector<OutcomeId>{0, 1, 2}, 1.0), 1u);
}

TEST(InverseTransform, DeterministicGivenKey) {
  const auto lm = ToyLM::random_markov(5, 1.0, 3);
  const auto cfg = its(9, 4, 0.1, 30);
  EXPECT_EQ(its_generate(lm, {5}, cfg).tokens, its_generate(lm, {5}, cfg).tokens);
}

TEST(InverseTransform, DistortionFree) {
  struct Case {
    ToyLM lm;
    int n;
    bool shared;
  };
  const std::vector<Case> cases = {{ToyLM::fair_coin(), 4, true},
                                   {ToyLM::random_markov(2, 2.0, 4), 4, true},
                                   {ToyLM::random_markov(3, 2.0, 6), 4, false}};
  for (const auto& c : cases) {
    const int keys = 100'000;
    const auto law = oracle::sequence_law(c.lm, c.n);
    std::vector<std::int64_t> counts(law.size(), 0);
    SchemeConfig cfg = its(9, 2, 0.1, c.n);
    std::get<InverseTransformParams>(cfg.variant).shared_permutation = c.shared;
    for (int k = 0; k < keys; ++k) {
      counts[oracle::sequence_index(its_generate(c.lm, {static_cast<std::uint64_t>(k)}, cfg).tokens,
                                    c.lm.vocab_size())]++;
    }
    const auto r = oracle::empirical_tv(counts, law);
    EXPECT_LE(r.tv, 3 * r.tolerance);
  }
}

TEST(InverseTransform, AlignmentTakesFirstMinimizer) {
  ItsKeyStream xi;
  xi.u = {0.0, 1.0, 0.0, 1.0};
  xi.ranks = {{0, 1}};
  // tokens 0,1 align perfectly at even key offsets; both text windows tie.
  const std::vector<OutcomeId> tokens{0, 1, 0};
  const Alignment a = its_alignment(tokens, xi, 2, 2);
  EXPECT_EQ(a.cost, 0.0);
  EXPECT_EQ(a.text_offset, 0u);
  EXPECT_EQ(a.key_offset, 0u);
  EXPECT_THROW(its_alignment(tokens, xi, 2, 4), std::invalid_argument);
}

TEST(InverseTransform, AlignmentMatchesDirectSum) {
  RngStream rng(7, 7);
  const InverseTransformParams p{5, 4, false};
  const ItsKeyStream xi = its_key_stream({9}, 12, 5, p);
  std::vector<OutcomeId> tokens(15);
  for (auto& t : tokens) t = static_cast<OutcomeId>(rng.uniform_index(5));
  double best = INFINITY;
  for (std::size_t i = 0; i + 4 <= tokens.size(); ++i) {
    for (std::size_t s = 0; s < 12; ++s) {
      double c = 0.0;
      for (std::size_t j = 0; j < 4; ++j) {
        const std::size_t kp = (i + j + s) % 12;
        c += std::abs(xi.u[kp] - xi.rank_at(kp)[tokens[i + j]] / 4.0);
      }
      best = std::min(best, c);
    }
  }
  EXPECT_NEAR(its_alignment(tokens, xi, 5, 4).cost, best, 1e-12);
}

TEST(InverseTransform, NullCalibration) {
  const auto lm = ToyLM::uniform(8);
  const int trials = 10'000;
  const auto cfg = its(19, 10, 0.05, 30);
  const double rate = null_rejection_rate(lm, 30, trials, 107, [&](WatermarkKey k, const auto& text) {
    return its_detect(k, text, cfg, 8).reject;
  });
  EXPECT_LE(rate, 0.05 + four_sigma(0.05, trials));
}

TEST(InverseTransform, PValueIsSuperUniform) {
  const auto lm = ToyLM::random_markov(6, 1.0, 2);
  const auto cfg = its(19, 5, 0.05, 20);
  const int trials = 2000;
  std::vector<int> below(20, 0);
  for (int t = 0; t < trials; ++t) {
    RngStream text_rng = rng_stream(211, static_cast<std::uint64_t>(t));
    const auto text = sample_sequence(lm, 20, text_rng);
    const double p = its_detect({static_cast<std::uint64_t>(t) + 5000}, text, cfg, 6).p_value;
    for (int j = 1; j <= 20; ++j) below[j - 1] += p <= j / 20.0;
  }
  for (int j = 1; j <= 20; ++j) {
    const double q = j / 20.0;
    EXPECT_LE(below[j - 1] / double(trials), q + four_sigma(std::min(q, 0.5), trials));
  }
}

TEST(InverseTransform, PowerRegression) {
  const auto lm = ToyLM::uniform(8);
  const auto cfg = its(99, 10, 0.01, 100);
  int hits = 0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    hits += its_detect({k}, its_generate(lm, {k}, cfg).tokens, cfg, 8).reject;
  }
  EXPECT_GE(hits / 100.0, 0.8);
}

TEST(InverseTransform, TooFewResamplesCannotReject) {
  const auto lm = ToyLM::uniform(8);
  const auto cfg = its(9, 5, 0.05, 40);
  const auto g = its_generate(lm, {3}, cfg);
  const auto d = its_detect({3}, g.tokens, cfg, 8);
  EXPECT_TRUE(d.cannot_reject);
  EXPECT_FALSE(d.reject);
  EXPECT_GE(d.p_value, 0.1);
  // (T + 1) alpha = 1 still allows p = alpha.
  EXPECT_FALSE(its_detect({3}, g.tokens, its(19, 5, 0.05, 40), 8).cannot_reject);
  EXPECT_THROW(its_detect({3}, std::vector<OutcomeId>{1, 2}, cfg, 8), std::invalid_argument);
}

TEST(UmpBaseline, RegionAndDetection) {
  const auto lm = ToyLM::deterministic(3);
  const SchemeConfig cfg{UmpBaselineParams{}, 0.2, 10};
  int nonempty = 0;
  for (std::uint64_t k = 0; k < 5000; ++k) {
    const auto g = ump_generate(lm, {k}, cfg);
    nonempty += g.region_nonempty;
    EXPECT_EQ(ump_detect(lm, {k}, g.tokens, cfg), g.region_nonempty);
  }
  EXPECT_NEAR(nonempty / 5000.0, 0.2, four_sigma(0.2, 5000));
  // Low-probability texts always keep their singleton region.
  const auto u = ToyLM::uniform(4);
  for (std::uint64_t k = 0; k < 50; ++k) EXPECT_TRUE(ump_generate(u, {k}, cfg).region_nonempty);
}

TEST(EstimateErrors, WorkerCountInvariant) {
  const auto lm = ToyLM::random_markov(4, 1.0, 9);
  for (const SchemeConfig& cfg : {srl(2.0, 0.05, 30), its(19, 5, 0.05, 30), SchemeConfig{UmpBaselineParams{}, 0.05, 30}}) {
    const auto a = estimate_errors(lm, cfg, 200, 17, 1);
    const auto b = estimate_errors(lm, cfg, 200, 17, 4);
    EXPECT_EQ(a.type1, b.type1);
    EXPECT_EQ(a.type2, b.type2);
    EXPECT_EQ(a.type2_stderr, b.type2_stderr);
  }
  EXPECT_THROW(estimate_errors(lm, srl(2.0, 0.05, 30), 99, 1), std::invalid_argument);
}

TEST(EstimateErrors, DeterministicModelMissesAtOneMinusAlpha) {
  const double alpha = 0.05;
  const int trials = 2000;
  const double sigma = std::sqrt(alpha * (1 - alpha) / trials);
  const auto binary = ToyLM::deterministic(2);
  const std::vector<SchemeConfig> cfgs = {srl(2.0, alpha, 50), christ(4.0, alpha, 50), its(19, 10, alpha, 50),
                                          SchemeConfig{UmpBaselineParams{}, alpha, 50}};
  for (const auto& cfg : cfgs) {
    const auto e = estimate_errors(binary, cfg, trials, 23);
    EXPECT_GE(e.type2, 1 - alpha - 4 * sigma) << scheme_name(cfg);
  }
  const auto ump = estimate_errors(binary, cfgs.back(), trials, 23);
  EXPECT_NEAR(ump.type2, 1 - alpha, 4 * sigma);
}
