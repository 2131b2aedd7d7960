#pragma once

#include <cstdint>
#include <random>

namespace stein {

/// Deterministic random stream addressed by (master seed, stream id, block).
///
/// Every coordinate of the address feeds a seed_seq, so two streams that
/// differ anywhere are statistically independent while the same address
/// always reproduces the same draws. Parallel code hands out one block per
/// unit of work; the decomposition into blocks, not the worker count,
/// determines the numbers.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0, std::uint64_t block = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_; }
  std::uint64_t block_id() const { return block_; }

  /// Child stream: hashes `child` into the stream id, resets the block.
  RngStream substream(std::uint64_t child) const;
  /// Same stream, different block counter.
  RngStream block(std::uint64_t b) const;

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  std::uint64_t bits() { return engine_(); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// splitmix64 finalizer; used for stream-id hashing.
std::uint64_t mix64(std::uint64_t x);

}  // namespace stein
