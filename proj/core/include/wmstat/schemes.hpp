#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "wmstat/prob.hpp"
#include "wmstat/toy_lm.hpp"

namespace wmstat {

class RngStream;

// Shared secret between generator and detector. Every keyed quantity is a
// deterministic function of the seed.
struct WatermarkKey {
  std::uint64_t seed = 0;
};

// Per-position keyed green/red partition with an exp(delta) boost on green
// tokens.
struct SoftRedListParams {
  double gamma = 0.5;
  double delta = 2.0;
};

// Binary tokens: unkeyed prefix until the accrued surprisal reaches lambda,
// then keyed threshold sampling.
struct ChristBinaryParams {
  double lambda = 4.0;
};

// Keyed inverse transform sampling with a permutation test detector.
struct InverseTransformParams {
  std::int64_t resamples = 99;  // T
  std::int64_t block_k = 10;
  bool shared_permutation = true;
};

// Sequence-level UMP coupling: R = {X} with probability min(1, alpha/rho(X)).
struct UmpBaselineParams {};

using SchemeVariant =
    std::variant<SoftRedListParams, ChristBinaryParams, InverseTransformParams, UmpBaselineParams>;

struct SchemeConfig {
  SchemeVariant variant;
  double target_alpha = 0.05;
  std::int64_t length = 100;

  // Throws std::invalid_argument on out-of-range parameters.
  void validate() const;
};

std::string_view scheme_name(const SchemeConfig& cfg);

// --- soft red list ---------------------------------------------------------

// Green-list size for a vocabulary: round(gamma * V) clamped to [1, V - 1].
std::size_t green_list_size(std::size_t vocab, double gamma);

std::vector<OutcomeId> srl_generate(const ToyLM& lm, WatermarkKey key, const SchemeConfig& cfg);

struct SrlDetection {
  std::int64_t green_count = 0;
  std::int64_t threshold = 0;
  bool reject = false;
};

SrlDetection srl_detect(WatermarkKey key, std::span<const OutcomeId> tokens,
                        const SchemeConfig& cfg, std::size_t vocab);

// --- binary threshold sampling ----------------------------------------------

struct ChristGeneration {
  std::vector<OutcomeId> tokens;
  std::size_t start = 0;  // i: tokens [0, i) are the unkeyed prefix
};

ChristGeneration christ_generate(const ToyLM& lm, WatermarkKey key, const SchemeConfig& cfg);

struct ChristDetection {
  double statistic = 0.0;
  double threshold = 0.0;
  bool reject = false;
};

// Throws std::invalid_argument when start exceeds the token count.
ChristDetection christ_detect(WatermarkKey key, std::span<const OutcomeId> tokens,
                              std::size_t start, const SchemeConfig& cfg);

// --- inverse transform sampling ---------------------------------------------

// Keyed randomness for one text: u_j in (0, 1] and permutations stored as
// ranks (rank[v] = pi(v), 0-based). A single shared permutation has
// ranks.size() == 1.
struct ItsKeyStream {
  std::vector<double> u;
  std::vector<std::vector<OutcomeId>> ranks;

  const std::vector<OutcomeId>& rank_at(std::size_t j) const {
    return ranks.size() == 1 ? ranks[0] : ranks[j];
  }
};

// First token in permutation order whose cumulative mass reaches u.
OutcomeId inverse_transform_token(const DiscreteDist& mu, std::span<const OutcomeId> rank, double u);

ItsKeyStream its_key_stream(WatermarkKey key, std::size_t length, std::size_t vocab,
                            const InverseTransformParams& p);
// Resample t (1-based) used by the permutation test.
ItsKeyStream its_resample_stream(WatermarkKey key, std::int64_t t, std::size_t length,
                                 std::size_t vocab, const InverseTransformParams& p,
                                 const ItsKeyStream& original);

struct ItsGeneration {
  std::vector<OutcomeId> tokens;
  ItsKeyStream xi;
};

ItsGeneration its_generate(const ToyLM& lm, WatermarkKey key, const SchemeConfig& cfg);

struct Alignment {
  double cost = 0.0;
  std::size_t text_offset = 0;  // first minimizing window start
  std::size_t key_offset = 0;
};

// Minimum over text windows of length k and cyclic key shifts of
// sum |u - rank(y) / (N - 1)|.
Alignment its_alignment(std::span<const OutcomeId> tokens, const ItsKeyStream& xi,
                        std::size_t vocab, std::size_t block_k);

struct ItsDetection {
  double p_value = 1.0;
  double statistic = 0.0;
  bool reject = false;
  bool cannot_reject = false;  // (T + 1) * alpha < 1
};

// Throws std::invalid_argument when tokens are shorter than block_k.
ItsDetection its_detect(WatermarkKey key, std::span<const OutcomeId> tokens,
                        const SchemeConfig& cfg, std::size_t vocab);

// --- UMP baseline -----------------------------------------------------------

struct UmpGeneration {
  std::vector<OutcomeId> tokens;
  bool region_nonempty = false;
};

UmpGeneration ump_generate(const ToyLM& lm, WatermarkKey key, const SchemeConfig& cfg);
bool ump_detect(const ToyLM& lm, WatermarkKey key, std::span<const OutcomeId> tokens,
                const SchemeConfig& cfg);

// --- shared generate/detect surface -----------------------------------------

struct Generated {
  std::vector<OutcomeId> tokens;
  std::size_t start = 0;  // only meaningful for the binary threshold scheme
};

Generated scheme_generate(const ToyLM& lm, WatermarkKey key, const SchemeConfig& cfg);
// `side` is the generation whose region the detector observes.
bool scheme_detect(const ToyLM& lm, WatermarkKey key, const Generated& side,
                   std::span<const OutcomeId> tokens, const SchemeConfig& cfg);

struct ErrorEstimate {
  double type1 = 0.0;
  double type1_stderr = 0.0;
  double type2 = 0.0;
  double type2_stderr = 0.0;
  std::int64_t trials = 0;
};

// Type I against independent text from the same LM, Type II as the miss
// rate on watermarked text, each over `trials` fresh keys. Results do not
// depend on the worker count.
ErrorEstimate estimate_errors(const ToyLM& lm, const SchemeConfig& cfg, std::int64_t trials,
                              std::uint64_t seed, unsigned workers = 1);

}  // namespace wmstat
