#include "stein/rng.hpp"

#include <array>

namespace stein {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream, std::uint64_t block) {
  const auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffULL); };
  const auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo(seed), hi(seed), lo(stream), hi(stream), lo(block), hi(block)};
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t block)
    : seed_(seed), stream_(stream), block_(block), engine_(make_engine(seed, stream, block)) {}

RngStream RngStream::substream(std::uint64_t child) const {
  return RngStream(seed_, mix64(stream_ ^ mix64(child + 1)), 0);
}

RngStream RngStream::block(std::uint64_t b) const { return RngStream(seed_, stream_, b); }

}  // namespace stein
