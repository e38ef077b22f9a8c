#pragma once

#include <cstdint>
#include <initializer_list>

namespace sgrasp {

// splitmix64 mixing step
inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent per-task RNG streams from (base seed, tags). Parallel and
/// serial schedules of the same work items draw identical numbers.
inline uint64_t derive_seed(uint64_t base, std::initializer_list<uint64_t> tags) {
  uint64_t s = mix64(base);
  for (uint64_t t : tags) s = mix64(s ^ t);
  return s;
}

}  // namespace sgrasp
