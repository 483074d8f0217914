#include "wmstat/toy_lm.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "wmstat/rng.hpp"

namespace wmstat {

ToyLM::ToyLM(DiscreteDist initial, std::vector<DiscreteDist> transitions)
    : initial_(std::move(initial)), transitions_(std::move(transitions)) {
  if (initial_.size() < 2) throw std::invalid_argument("ToyLM: vocab_size must be >= 2");
  if (transitions_.size() != initial_.size()) {
    throw std::invalid_argument("ToyLM: need one transition row per token");
  }
  for (const auto& row : transitions_) {
    if (row.size() != initial_.size()) {
      throw std::invalid_argument("ToyLM: transition row has the wrong width");
    }
  }
}

ToyLM ToyLM::fair_coin() { return unigram(DiscreteDist({0.5, 0.5})); }

ToyLM ToyLM::deterministic(std::size_t vocab) {
  return unigram(DiscreteDist::point_mass(vocab, 0));
}

ToyLM ToyLM::uniform(std::size_t vocab) { return unigram(DiscreteDist::uniform(vocab)); }

ToyLM ToyLM::unigram(DiscreteDist dist) {
  std::vector<DiscreteDist> rows(dist.size(), dist);
  return ToyLM(std::move(dist), std::move(rows));
}

ToyLM ToyLM::random_markov(std::size_t vocab, double sharpness, std::uint64_t seed) {
  RngStream rng = rng_stream(seed, 0);
  auto row = [&] { return random_distribution(vocab, rng, sharpness); };
  DiscreteDist init = row();
  std::vector<DiscreteDist> rows;
  rows.reserve(vocab);
  for (std::size_t i = 0; i < vocab; ++i) rows.push_back(row());
  return ToyLM(std::move(init), std::move(rows));
}

double ToyLM::log_prob(std::span<const OutcomeId> tokens) const {
  double lp = 0.0;
  std::optional<OutcomeId> prev;
  for (OutcomeId t : tokens) {
    const double p = next(prev)[t];
    if (p <= 0.0) return -std::numeric_limits<double>::infinity();
    lp += std::log(p);
    prev = t;
  }
  return lp;
}

std::vector<OutcomeId> sample_sequence(const ToyLM& lm, std::size_t n, RngStream& rng) {
  std::vector<OutcomeId> out;
  out.reserve(n);
  std::optional<OutcomeId> prev;
  for (std::size_t i = 0; i < n; ++i) {
    const OutcomeId t = sample(lm.next(prev), rng);
    out.push_back(t);
    prev = t;
  }
  return out;
}

namespace {

bool next_content_line(std::istream& in, std::string& line, std::size_t& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

std::vector<double> parse_row(const std::string& line, std::size_t width, std::size_t lineno) {
  std::istringstream ls(line);
  std::vector<double> row;
  double v = 0.0;
  while (ls >> v) row.push_back(v);
  if (!ls.eof() || row.size() != width) {
    throw std::invalid_argument("toy LM line " + std::to_string(lineno) + ": expected " +
                                std::to_string(width) + " probabilities");
  }
  return row;
}

}  // namespace

ToyLM read_toy_lm(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!next_content_line(in, line, lineno)) throw std::invalid_argument("toy LM: empty input");
  std::istringstream header(line);
  std::string word;
  std::size_t vocab = 0;
  if (!(header >> word >> vocab) || word != "vocab") {
    throw std::invalid_argument("toy LM line " + std::to_string(lineno) + ": expected 'vocab N'");
  }
  if (!next_content_line(in, line, lineno)) throw std::invalid_argument("toy LM: missing initial row");
  DiscreteDist initial(parse_row(line, vocab, lineno));
  std::vector<DiscreteDist> rows;
  for (std::size_t i = 0; i < vocab; ++i) {
    if (!next_content_line(in, line, lineno)) {
      throw std::invalid_argument("toy LM: expected " + std::to_string(vocab) + " transition rows");
    }
    rows.emplace_back(parse_row(line, vocab, lineno));
  }
  return ToyLM(std::move(initial), std::move(rows));
}

ToyLM load_toy_lm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open toy LM file '" + path + "'");
  return read_toy_lm(in);
}

void write_toy_lm(std::ostream& out, const ToyLM& lm) {
  const auto old = out.precision(17);
  auto row = [&](const DiscreteDist& d) {
    for (std::size_t i = 0; i < d.size(); ++i) out << (i ? " " : "") << d[i];
    out << '\n';
  };
  out << "vocab " << lm.vocab_size() << '\n';
  row(lm.initial());
  for (std::size_t i = 0; i < lm.vocab_size(); ++i) row(lm.transition(static_cast<OutcomeId>(i)));
  out.precision(old);
}

}  // namespace wmstat
