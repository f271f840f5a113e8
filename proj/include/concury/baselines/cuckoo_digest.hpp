#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "concury/flow_key.hpp"

namespace concury {

/// (2,4) cuckoo hash table storing key digests plus DIP indices, the
/// connection-table design used by digest-based load balancers. Keys are
/// never stored: a colliding digest falsely hits, and deleting a digest may
/// take a live state with it. Both hazards are measured, not prevented.
///
/// Lookups are instrumented with the per-operation cost counters used in
/// the data-plane cost comparison (hash computations, slot reads, digest
/// compares; the 64-bit digest is charged as two 32-bit hash computations).
class CuckooDigestTable {
 public:
  static constexpr unsigned kSlotsPerBucket = 4;
  static constexpr int kEvictionCap = 500;

  struct Stats {
    uint64_t lookups = 0;
    uint64_t hashes = 0;
    uint64_t reads = 0;
    uint64_t compares = 0;
  };

  /// Sized for `capacity_hint` keys at 0.9 target load. `digest_bits` of 64
  /// matches the accounting model; 16 makes collisions observable at desk
  /// scale.
  explicit CuckooDigestTable(size_t capacity_hint, unsigned digest_bits = 64,
                             uint64_t seed = 1);

  /// False when the eviction chain exceeds its cap (table full).
  bool insert(const FlowKey& key, uint16_t dip_index);
  std::optional<uint16_t> lookup(const FlowKey& key) const;
  /// As lookup, also accumulating the cost counters.
  std::optional<uint16_t> lookup_counted(const FlowKey& key) const;
  /// Removes the first slot matching the key's digest; a collision here
  /// drops a live state (the digest-deletion hazard).
  bool erase(const FlowKey& key);

  uint64_t digest_of(const FlowKey& key) const;

  size_t size() const { return size_; }
  size_t slot_capacity() const { return buckets_.size() * kSlotsPerBucket; }

  const Stats& stats() const { return stats_; }
  void reset_stats() { stats_ = Stats{}; }

  /// Closed-form accounting at 0.9 load: 1.1*(64+l_v)*n bits.
  static double memory_bits(uint64_t states, unsigned lv) {
    return 1.1 * (64.0 + lv) * double(states);
  }
  /// Bits held by the allocated slots (digest + dip per slot).
  uint64_t measured_payload_bits() const {
    return uint64_t(slot_capacity()) * (digest_bits_ + 16);
  }

 private:
  struct Slot {
    uint64_t digest = 0;
    uint16_t dip_index = 0;
  };
  struct Bucket {
    Slot slots[kSlotsPerBucket];
    uint8_t occupied = 0;  // bitmask
  };

  uint32_t bucket1(const FlowKey& key) const;
  uint32_t alt_bucket(uint32_t bucket, uint64_t digest) const;
  int scan(const Bucket& b, uint64_t digest) const;
  int free_slot(const Bucket& b) const;

  std::vector<Bucket> buckets_;
  uint32_t mask_;
  unsigned digest_bits_;
  uint32_t digest_seed_, bucket_seed_, alt_seed_;
  size_t size_ = 0;
  std::mt19937 rng_;
  mutable Stats stats_;
};

}  // namespace concury
