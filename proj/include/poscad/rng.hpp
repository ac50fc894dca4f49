#pragma once

#include <cstdint>
#include <random>

namespace poscad {

using Rng = std::mt19937_64;

/// Purpose tags keep the random streams of one entity independent.
enum class StreamTag : std::uint64_t {
  arrivals = 1,
  prediction_error = 2,
  tie_break = 3,
  window_size = 4,
  topology = 5,
  replication = 6,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for the stream (master, tag, index). Stable across platforms.
constexpr std::uint64_t derive_seed(std::uint64_t master, StreamTag tag, std::uint64_t index = 0) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ static_cast<std::uint64_t>(tag));
  return splitmix64(h ^ (index * 0xd6e8feb86659fd93ULL));
}

inline Rng make_rng(std::uint64_t master, StreamTag tag, std::uint64_t index = 0) {
  return Rng(derive_seed(master, tag, index));
}

/// Master seed of sweep replication `replication`.
constexpr std::uint64_t replication_seed(std::uint64_t master, std::uint64_t replication) {
  return derive_seed(master, StreamTag::replication, replication);
}

}  // namespace poscad
