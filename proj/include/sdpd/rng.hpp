#pragma once

#include <cstdint>

namespace sdpd {

// SplitMix64 finalizer. Stable across platforms and releases; benchmark
// reproducibility depends on this exact function, so it must not change.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Derives the seed of an independent stream (replication r, sub-draw k, ...)
// from a master seed. derive_seed(m, i) != derive_seed(m, j) for i != j in
// any realistic use; collisions would need ~2^32 indices.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master + 0x9E3779B97F4A7C15ull * (index + 1));
}

}  // namespace sdpd
