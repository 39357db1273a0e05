#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace blindep::detail {

// splitmix64 step, the usual constants.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives a child seed from a master seed and a path of indices. Every
// randomized routine in the library draws from an engine keyed this way, so
// results do not depend on evaluation order or thread scheduling.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = mix64(master);
  for (std::uint64_t p : path) h = mix64(h ^ mix64(p + 0x517cc1b727220a95ULL));
  return h;
}

inline std::mt19937_64 make_engine(std::uint64_t master,
                                   std::initializer_list<std::uint64_t> path = {}) {
  return std::mt19937_64(derive_seed(master, path));
}

// Stream tags used as the first path component, one per consumer, so that
// unrelated draws never share an engine state.
enum StreamTag : std::uint64_t {
  kStreamSample = 1,
  kStreamKmeans = 2,
  kStreamGmm = 3,
  kStreamDegrees = 4,
  kStreamWiring = 5,
  kStreamTrial = 6,
  kStreamFilter = 7,
};

}  // namespace blindep::detail
