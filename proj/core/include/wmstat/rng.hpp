#pragma once

#include <cstdint>
#include <random>

namespace wmstat {

// Deterministic pseudo-random stream identified by (seed, stream_id).
//
// Every source of randomness in the library is one of these. The same pair
// always reproduces the same sequence; distinct stream ids give
// independent-looking sequences, which is how parallel Monte Carlo blocks and
// watermark keys obtain their own substreams.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01();
  // Uniform on (0, 1].
  double uniform_open_closed();
  // Uniform on (0, 1), never touching either endpoint.
  double uniform_open01();
  // Uniform integer in [0, bound); bound > 0.
  std::uint64_t uniform_index(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

RngStream rng_stream(std::uint64_t seed, std::uint64_t stream_id);

// SplitMix64 finalizer; used to derive child seeds and stream ids.
std::uint64_t mix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace wmstat
