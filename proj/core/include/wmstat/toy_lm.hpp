#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wmstat/prob.hpp"

namespace wmstat {

class RngStream;

// First-order Markov language model over a vocabulary of size >= 2.
class ToyLM {
 public:
  ToyLM(DiscreteDist initial, std::vector<DiscreteDist> transitions);

  static ToyLM fair_coin();
  static ToyLM deterministic(std::size_t vocab);
  static ToyLM uniform(std::size_t vocab);
  // Rows drawn from normalized powers of uniforms: larger `sharpness` gives
  // lower per-token entropy.
  static ToyLM random_markov(std::size_t vocab, double sharpness, std::uint64_t seed);
  // Stationary unigram: every row equals dist.
  static ToyLM unigram(DiscreteDist dist);

  std::size_t vocab_size() const noexcept { return initial_.size(); }
  const DiscreteDist& initial() const noexcept { return initial_; }
  const DiscreteDist& transition(OutcomeId prev) const { return transitions_.at(prev); }
  // Next-token law given the previous token, or the initial law.
  const DiscreteDist& next(std::optional<OutcomeId> prev) const {
    return prev ? transitions_[*prev] : initial_;
  }

  // ln P(tokens); -inf for impossible sequences.
  double log_prob(std::span<const OutcomeId> tokens) const;

 private:
  DiscreteDist initial_;
  std::vector<DiscreteDist> transitions_;
};

// Draws n tokens, one uniform per token, by inverse CDF in token order.
std::vector<OutcomeId> sample_sequence(const ToyLM& lm, std::size_t n, RngStream& rng);

// Text format: line 1 "vocab N", line 2 the N initial probabilities, then N
// transition rows. '#' starts a comment.
ToyLM read_toy_lm(std::istream& in);
ToyLM load_toy_lm(const std::string& path);
void write_toy_lm(std::ostream& out, const ToyLM& lm);

}  // namespace wmstat
