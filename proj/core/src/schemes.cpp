#include "wmstat/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <thread>

#include "wmstat/null_laws.hpp"
#include "wmstat/rng.hpp"

namespace wmstat {
namespace {

// Stream ids under a key seed. Each purpose owns one sequential stream.
enum StreamTag : std::uint64_t {
  kSrlGreen = 1,
  kSrlSample = 2,
  kChristPrefix = 3,
  kChristUniform = 4,
  kItsUniform = 5,
  kItsPermutation = 6,
  kUmpSample = 7,
  kUmpCoin = 8,
};

constexpr std::uint64_t kItsResampleBase = std::uint64_t{1} << 32;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

const char* kNames[] = {"soft_red_list", "christ_binary", "inverse_transform", "ump"};

// Random permutation as ranks: rank[v] = position of v.
std::vector<OutcomeId> random_ranks(std::size_t vocab, RngStream& rng) {
  std::vector<OutcomeId> order(vocab);
  std::iota(order.begin(), order.end(), OutcomeId{0});
  for (std::size_t i = vocab; i > 1; --i) {
    std::swap(order[i - 1], order[rng.uniform_index(i)]);
  }
  std::vector<OutcomeId> rank(vocab);
  for (std::size_t r = 0; r < vocab; ++r) rank[order[r]] = static_cast<OutcomeId>(r);
  return rank;
}

// Green membership for one position: the first g picks of a partial shuffle.
void draw_green(RngStream& rng, std::size_t g, std::vector<OutcomeId>& scratch,
                std::vector<char>& green) {
  const std::size_t vocab = scratch.size();
  std::iota(scratch.begin(), scratch.end(), OutcomeId{0});
  std::fill(green.begin(), green.end(), 0);
  for (std::size_t i = 0; i < g; ++i) {
    const std::size_t j = i + rng.uniform_index(vocab - i);
    std::swap(scratch[i], scratch[j]);
    green[scratch[i]] = 1;
  }
}

}  // namespace

void SchemeConfig::validate() const {
  if (!(target_alpha > 0.0 && target_alpha < 1.0)) {
    throw std::invalid_argument("SchemeConfig: target_alpha must lie in (0, 1)");
  }
  if (length < 0) throw std::invalid_argument("SchemeConfig: length must be >= 0");
  std::visit(Overloaded{
                 [](const SoftRedListParams& p) {
                   if (!(p.gamma > 0.0 && p.gamma < 1.0)) {
                     throw std::invalid_argument("SoftRedList: gamma must lie in (0, 1)");
                   }
                   if (!(p.delta >= 0.0)) throw std::invalid_argument("SoftRedList: delta must be >= 0");
                 },
                 [](const ChristBinaryParams& p) {
                   if (!(p.lambda >= 0.0)) throw std::invalid_argument("ChristBinary: lambda must be >= 0");
                 },
                 [](const InverseTransformParams& p) {
                   if (p.resamples < 1) throw std::invalid_argument("InverseTransform: T must be >= 1");
                   if (p.block_k < 1) throw std::invalid_argument("InverseTransform: block_k must be >= 1");
                 },
                 [](const UmpBaselineParams&) {},
             },
             variant);
}

std::string_view scheme_name(const SchemeConfig& cfg) { return kNames[cfg.variant.index()]; }

// --- soft red list -----------------------------------------------------------

std::size_t green_list_size(std::size_t vocab, double gamma) {
  const auto g = static_cast<std::size_t>(std::llround(gamma * static_cast<double>(vocab)));
  return std::clamp<std::size_t>(g, 1, vocab - 1);
}

std::vector<OutcomeId> srl_generate(const ToyLM& lm, WatermarkKey key, const SchemeConfig& cfg) {
  cfg.validate();
  const auto& p = std::get<SoftRedListParams>(cfg.variant);
  const std::size_t vocab = lm.vocab_size();
  const std::size_t g = green_list_size(vocab, p.gamma);
  const double boost = std::exp(p.delta);
  RngStream green_rng = rng_stream(key.seed, kSrlGreen);
  RngStream sample_rng = rng_stream(key.seed, kSrlSample);
  std::vector<OutcomeId> scratch(vocab);
  std::vector<char> green(vocab);
  std::vector<double> weights(vocab);

  std::vector<OutcomeId> out;
  out.reserve(static_cast<std::size_t>(cfg.length));
  std::optional<OutcomeId> prev;
  for (std::int64_t i = 0; i < cfg.length; ++i) {
    const DiscreteDist& mu = lm.next(prev);
    draw_green(green_rng, g, scratch, green);
    const double u = sample_rng.uniform01();
    OutcomeId tok = 0;
    if (p.delta == 0.0) {
      tok = sample_with_uniform(mu, u);
    } else {
      double z = 0.0;
      for (std::size_t v = 0; v < vocab; ++v) {
        weights[v] = mu[v] * (green[v] ? boost : 1.0);
        z += weights[v];
      }
      const double target = u * z;
      double cum = 0.0;
      tok = static_cast<OutcomeId>(vocab);
      for (std::size_t v = 0; v < vocab; ++v) {
        cum += weights[v];
        if (cum > target && weights[v] > 0.0) {
          tok = static_cast<OutcomeId>(v);
          break;
        }
      }
      if (tok == vocab) {
        std::size_t v = vocab;
        while (v > 0 && weights[v - 1] == 0.0) --v;
        tok = static_cast<OutcomeId>(v - 1);
      }
    }
    out.push_back(tok);
    prev = tok;
  }
  return out;
}

SrlDetection srl_detect(WatermarkKey key, std::span<const OutcomeId> tokens,
                        const SchemeConfig& cfg, std::size_t vocab) {
  cfg.validate();
  const auto& p = std::get<SoftRedListParams>(cfg.variant);
  if (vocab < 2) throw std::invalid_argument("srl_detect: vocab must be >= 2");
  const std::size_t g = green_list_size(vocab, p.gamma);
  RngStream green_rng = rng_stream(key.seed, kSrlGreen);
  std::vector<OutcomeId> scratch(vocab);
  std::vector<char> green(vocab);
  SrlDetection d;
  for (OutcomeId t : tokens) {
    if (t >= vocab) throw std::invalid_argument("srl_detect: token id outside vocabulary");
    draw_green(green_rng, g, scratch, green);
    d.green_count += green[t] ? 1 : 0;
  }
  const auto n = static_cast<std::int64_t>(tokens.size());
  d.threshold = binomial_threshold(n, static_cast<double>(g) / static_cast<double>(vocab),
                                   cfg.target_alpha);
  d.reject = d.green_count >= d.threshold;
  return d;
}

// --- binary threshold sampling ----------------------------------------------

ChristGeneration christ_generate(const ToyLM& lm, WatermarkKey key, const SchemeConfig& cfg) {
  cfg.validate();
  const auto& p = std::get<ChristBinaryParams>(cfg.variant);
  if (lm.vocab_size() != 2) throw std::invalid_argument("christ_generate: needs a binary LM");
  const auto n = static_cast<std::size_t>(cfg.length);
  RngStream prefix_rng = rng_stream(key.seed, kChristPrefix);
  RngStream u_rng = rng_stream(key.seed, kChristUniform);

  ChristGeneration out;
  out.tokens.reserve(n);
  out.start = n;
  // Slack absorbs rounding when lambda is an exact multiple of the
  // per-token surprisal.
  const double budget = p.lambda - 1e-12;
  double surprisal = 0.0;
  bool keyed = surprisal >= budget;
  if (keyed) out.start = 0;
  std::optional<OutcomeId> prev;
  for (std::size_t j = 0; j < n; ++j) {
    const DiscreteDist& mu = lm.next(prev);
    const double u = u_rng.uniform_open01();
    OutcomeId x = 0;
    if (keyed) {
      x = u <= mu[1] ? 1 : 0;
    } else {
      x = sample(mu, prefix_rng);
      surprisal -= std::log(mu[x]);
      if (surprisal >= budget) {
        keyed = true;
        out.start = j + 1;
      }
    }
    out.tokens.push_back(x);
    prev = x;
  }
  return out;
}

ChristDetection christ_detect(WatermarkKey key, std::span<const OutcomeId> tokens,
                              std::size_t start, const SchemeConfig& cfg) {
  cfg.validate();
  if (start > tokens.size()) {
    throw std::invalid_argument("christ_detect: start index beyond the text length");
  }
  RngStream u_rng = rng_stream(key.seed, kChristUniform);
  ChristDetection d;
  for (std::size_t j = 0; j < tokens.size(); ++j) {
    const double u = u_rng.uniform_open01();
    if (j < start) continue;
    if (tokens[j] > 1) throw std::invalid_argument("christ_detect: non-binary token");
    d.statistic -= std::log(tokens[j] == 1 ? u : 1.0 - u);
  }
  const std::size_t keyed = tokens.size() - start;
  if (keyed == 0) {
    d.threshold = 0.0;
    d.reject = false;
    return d;
  }
  d.threshold = gamma_upper_quantile(static_cast<double>(keyed), cfg.target_alpha);
  d.reject = d.statistic >= d.threshold;
  return d;
}

// --- inverse transform sampling ---------------------------------------------

OutcomeId inverse_transform_token(const DiscreteDist& mu, std::span<const OutcomeId> rank,
                                  double u) {
  const std::size_t vocab = mu.size();
  if (rank.size() != vocab) throw std::invalid_argument("inverse_transform_token: rank size mismatch");
  std::vector<OutcomeId> order(vocab);
  for (std::size_t v = 0; v < vocab; ++v) order[rank[v]] = static_cast<OutcomeId>(v);
  double cum = 0.0;
  OutcomeId last_positive = order[0];
  for (std::size_t r = 0; r < vocab; ++r) {
    const OutcomeId v = order[r];
    if (mu[v] <= 0.0) continue;
    cum += mu[v];
    last_positive = v;
    if (cum >= u) return v;
  }
  return last_positive;
}

ItsKeyStream its_key_stream(WatermarkKey key, std::size_t length, std::size_t vocab,
                            const InverseTransformParams& p) {
  RngStream u_rng = rng_stream(key.seed, kItsUniform);
  RngStream perm_rng = rng_stream(key.seed, kItsPermutation);
  ItsKeyStream xi;
  xi.u.resize(length);
  for (double& u : xi.u) u = u_rng.uniform_open_closed();
  const std::size_t perms = p.shared_permutation ? 1 : length;
  for (std::size_t j = 0; j < std::max<std::size_t>(perms, 1); ++j) {
    xi.ranks.push_back(random_ranks(vocab, perm_rng));
  }
  return xi;
}

ItsKeyStream its_resample_stream(WatermarkKey key, std::int64_t t, std::size_t length,
                                 std::size_t vocab, const InverseTransformParams& p,
                                 const ItsKeyStream& original) {
  RngStream rng = rng_stream(key.seed, kItsResampleBase + static_cast<std::uint64_t>(t));
  ItsKeyStream xi;
  xi.u.resize(length);
  for (double& u : xi.u) u = rng.uniform_open_closed();
  if (p.shared_permutation) {
    xi.ranks = original.ranks;
  } else {
    for (std::size_t j = 0; j < std::max<std::size_t>(length, 1); ++j) {
      xi.ranks.push_back(random_ranks(vocab, rng));
    }
  }
  return xi;
}

ItsGeneration its_generate(const ToyLM& lm, WatermarkKey key, const SchemeConfig& cfg) {
  cfg.validate();
  const auto& p = std::get<InverseTransformParams>(cfg.variant);
  const auto n = static_cast<std::size_t>(cfg.length);
  ItsGeneration out{{}, its_key_stream(key, n, lm.vocab_size(), p)};
  out.tokens.reserve(n);
  std::optional<OutcomeId> prev;
  for (std::size_t j = 0; j < n; ++j) {
    const OutcomeId t = inverse_transform_token(lm.next(prev), out.xi.rank_at(j), out.xi.u[j]);
    out.tokens.push_back(t);
    prev = t;
  }
  return out;
}

Alignment its_alignment(std::span<const OutcomeId> tokens, const ItsKeyStream& xi,
                        std::size_t vocab, std::size_t block_k) {
  const std::size_t len = tokens.size();
  const std::size_t m = xi.u.size();
  if (block_k == 0 || len < block_k) throw std::invalid_argument("its_alignment: text shorter than block");
  if (m == 0) throw std::invalid_argument("its_alignment: empty key stream");
  const double scale = vocab > 1 ? 1.0 / static_cast<double>(vocab - 1) : 0.0;

  Alignment best{INFINITY, 0, 0};
  std::vector<double> prefix(len + 1);
  for (std::size_t shift = 0; shift < m; ++shift) {
    // Text position t is aligned with key position (t + shift) mod m; window
    // costs along this diagonal are differences of prefix sums.
    prefix[0] = 0.0;
    for (std::size_t t = 0; t < len; ++t) {
      const std::size_t kp = (t + shift) % m;
      const double r = static_cast<double>(xi.rank_at(kp)[tokens[t]]) * scale;
      prefix[t + 1] = prefix[t] + std::abs(xi.u[kp] - r);
    }
    for (std::size_t i = 0; i + block_k <= len; ++i) {
      const double c = prefix[i + block_k] - prefix[i];
      const std::size_t key_off = (i + shift) % m;
      if (c < best.cost || (c == best.cost && (i < best.text_offset ||
                                               (i == best.text_offset && key_off < best.key_offset)))) {
        best = {c, i, key_off};
      }
    }
  }
  return best;
}

ItsDetection its_detect(WatermarkKey key, std::span<const OutcomeId> tokens,
                        const SchemeConfig& cfg, std::size_t vocab) {
  cfg.validate();
  const auto& p = std::get<InverseTransformParams>(cfg.variant);
  const auto k = static_cast<std::size_t>(p.block_k);
  if (tokens.size() < k) throw std::invalid_argument("its_detect: text shorter than block_k");
  for (OutcomeId t : tokens) {
    if (t >= vocab) throw std::invalid_argument("its_detect: token id outside vocabulary");
  }
  const ItsKeyStream xi = its_key_stream(key, tokens.size(), vocab, p);
  ItsDetection d;
  d.statistic = its_alignment(tokens, xi, vocab, k).cost;
  std::int64_t as_small = 0;
  for (std::int64_t t = 1; t <= p.resamples; ++t) {
    const ItsKeyStream alt = its_resample_stream(key, t, tokens.size(), vocab, p, xi);
    if (its_alignment(tokens, alt, vocab, k).cost <= d.statistic) ++as_small;
  }
  const double total = static_cast<double>(p.resamples + 1);
  d.p_value = static_cast<double>(1 + as_small) / total;
  d.cannot_reject = total * cfg.target_alpha < 1.0;
  d.reject = !d.cannot_reject && static_cast<double>(1 + as_small) <= cfg.target_alpha * total + 1e-9;
  return d;
}

// --- UMP baseline -----------------------------------------------------------

namespace {

struct UmpDraw {
  std::vector<OutcomeId> tokens;
  bool region_nonempty = false;
};

UmpDraw ump_draw(const ToyLM& lm, WatermarkKey key, const SchemeConfig& cfg) {
  RngStream sample_rng = rng_stream(key.seed, kUmpSample);
  RngStream coin_rng = rng_stream(key.seed, kUmpCoin);
  UmpDraw d;
  d.tokens = sample_sequence(lm, static_cast<std::size_t>(cfg.length), sample_rng);
  const double lp = lm.log_prob(d.tokens);
  const double keep = std::exp(std::min(0.0, std::log(cfg.target_alpha) - lp));
  d.region_nonempty = coin_rng.uniform01() < keep;
  return d;
}

}  // namespace

UmpGeneration ump_generate(const ToyLM& lm, WatermarkKey key, const SchemeConfig& cfg) {
  cfg.validate();
  UmpDraw d = ump_draw(lm, key, cfg);
  return {std::move(d.tokens), d.region_nonempty};
}

bool ump_detect(const ToyLM& lm, WatermarkKey key, std::span<const OutcomeId> tokens,
                const SchemeConfig& cfg) {
  cfg.validate();
  const UmpDraw d = ump_draw(lm, key, cfg);
  return d.region_nonempty && std::equal(tokens.begin(), tokens.end(), d.tokens.begin(), d.tokens.end());
}

// --- shared surface ---------------------------------------------------------

Generated scheme_generate(const ToyLM& lm, WatermarkKey key, const SchemeConfig& cfg) {
  return std::visit(
      Overloaded{
          [&](const SoftRedListParams&) { return Generated{srl_generate(lm, key, cfg), 0}; },
          [&](const ChristBinaryParams&) {
            auto g = christ_generate(lm, key, cfg);
            return Generated{std::move(g.tokens), g.start};
          },
          [&](const InverseTransformParams&) {
            return Generated{its_generate(lm, key, cfg).tokens, 0};
          },
          [&](const UmpBaselineParams&) { return Generated{ump_generate(lm, key, cfg).tokens, 0}; },
      },
      cfg.variant);
}

bool scheme_detect(const ToyLM& lm, WatermarkKey key, const Generated& side,
                   std::span<const OutcomeId> tokens, const SchemeConfig& cfg) {
  return std::visit(
      Overloaded{
          [&](const SoftRedListParams&) {
            return srl_detect(key, tokens, cfg, lm.vocab_size()).reject;
          },
          [&](const ChristBinaryParams&) {
            return christ_detect(key, tokens, side.start, cfg).reject;
          },
          [&](const InverseTransformParams&) {
            return its_detect(key, tokens, cfg, lm.vocab_size()).reject;
          },
          [&](const UmpBaselineParams&) { return ump_detect(lm, key, tokens, cfg); },
      },
      cfg.variant);
}

ErrorEstimate estimate_errors(const ToyLM& lm, const SchemeConfig& cfg, std::int64_t trials,
                              std::uint64_t seed, unsigned workers) {
  cfg.validate();
  if (trials < 100) throw std::invalid_argument("estimate_errors: trials must be >= 100");
  const auto nt = static_cast<std::size_t>(trials);
  std::vector<char> false_alarm(nt, 0);
  std::vector<char> miss(nt, 0);
  const std::uint64_t null_seed = derive_seed(seed, 0x6e756c6c);  // "null"

  auto run_trial = [&](std::size_t t) {
    const WatermarkKey key{derive_seed(seed, t)};
    const Generated wm = scheme_generate(lm, key, cfg);
    RngStream text_rng = rng_stream(null_seed, t);
    const auto independent = sample_sequence(lm, static_cast<std::size_t>(cfg.length), text_rng);
    false_alarm[t] = scheme_detect(lm, key, wm, independent, cfg) ? 1 : 0;
    miss[t] = scheme_detect(lm, key, wm, wm.tokens, cfg) ? 0 : 1;
  };

  const unsigned nw = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(nt)));
  if (nw == 1) {
    for (std::size_t t = 0; t < nt; ++t) run_trial(t);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < nw; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t t = w; t < nt; t += nw) run_trial(t);
      });
    }
  }
  const auto fa = std::accumulate(false_alarm.begin(), false_alarm.end(), std::int64_t{0});
  const auto ms = std::accumulate(miss.begin(), miss.end(), std::int64_t{0});
  ErrorEstimate e;
  e.trials = trials;
  const double n = static_cast<double>(trials);
  e.type1 = static_cast<double>(fa) / n;
  e.type2 = static_cast<double>(ms) / n;
  e.type1_stderr = std::sqrt(e.type1 * (1.0 - e.type1) / n);
  e.type2_stderr = std::sqrt(e.type2 * (1.0 - e.type2) / n);
  return e;
}

}  // namespace wmstat
