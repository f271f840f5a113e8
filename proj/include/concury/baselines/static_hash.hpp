#pragma once

#include <cstdint>

#include "concury/flow_key.hpp"

namespace concury {

/// Stateless baseline: h(key) mod pool size, nothing stored. A pool-size
/// change recomputes the mapping, so live connections move (the consistency
/// violation this baseline exists to demonstrate).
class StaticHashLb {
 public:
  explicit StaticHashLb(uint32_t pool_size, uint32_t seed = 0x7f4a7c15)
      : pool_size_(pool_size), seed_(seed) {}

  uint32_t lookup(const FlowKey& key) const {
    return hash32(&key, sizeof(key), seed_) % pool_size_;
  }

  /// Raw 32-bit hash, exposed so tests can reason about the normalized
  /// hash value in [0, 1).
  uint32_t raw_hash(const FlowKey& key) const {
    return hash32(&key, sizeof(key), seed_);
  }

  void set_pool_size(uint32_t t) { pool_size_ = t; }
  uint32_t pool_size() const { return pool_size_; }

 private:
  uint32_t pool_size_;
  uint32_t seed_;
};

}  // namespace concury
