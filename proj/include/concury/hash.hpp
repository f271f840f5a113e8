#pragma once

#include <cstddef>
#include <cstdint>

namespace concury {

/// Seeded 32-bit hash over a byte buffer (murmur3 finalization). One seed
/// fully determines the function; independent seeds give independent hashes.
inline uint32_t hash32(const void* data, size_t len, uint32_t seed) {
  const uint8_t* key = static_cast<const uint8_t*>(data);
  uint32_t h = seed;
  size_t n = len >> 2;
  for (size_t i = 0; i < n; ++i) {
    uint32_t k;
    __builtin_memcpy(&k, key + 4 * i, 4);
    k *= 0xcc9e2d51u;
    k = (k << 15) | (k >> 17);
    k *= 0x1b873593u;
    h ^= k;
    h = (h << 13) | (h >> 19);
    h = h * 5 + 0xe6546b64u;
  }
  uint32_t k = 0;
  switch (len & 3) {
    case 3: k ^= uint32_t(key[len - (len & 3) + 2]) << 16; [[fallthrough]];
    case 2: k ^= uint32_t(key[len - (len & 3) + 1]) << 8; [[fallthrough]];
    case 1:
      k ^= uint32_t(key[len - (len & 3)]);
      k *= 0xcc9e2d51u;
      k = (k << 15) | (k >> 17);
      k *= 0x1b873593u;
      h ^= k;
  }
  h ^= uint32_t(len);
  h ^= h >> 16;
  h *= 0x85ebca6bu;
  h ^= h >> 13;
  h *= 0xc2b2ae35u;
  h ^= h >> 16;
  return h;
}

/// Seeded 64-bit hash, composed of two 32-bit computations (used for key
/// digests; the cost model charges it as two hash computations).
inline uint64_t hash64(const void* data, size_t len, uint32_t seed) {
  uint64_t lo = hash32(data, len, seed);
  uint64_t hi = hash32(data, len, seed ^ 0x9e3779b9u);
  return (hi << 32) | lo;
}

/// The pair of seeds that determines (h_a, h_b) of one lookup structure.
struct HashSeedPair {
  uint32_t seed_a = 0;
  uint32_t seed_b = 0;

  friend bool operator==(const HashSeedPair&, const HashSeedPair&) = default;
};

}  // namespace concury
