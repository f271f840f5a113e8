#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "concury/flow_key.hpp"

namespace concury {

/// A cascade of equal-size digest tables probed in order, first match wins;
/// inserts land in the first level with a free slot. Shares the digest
/// hazards of the cuckoo table and the same instrumentation.
class MultilevelDigestTable {
 public:
  static constexpr unsigned kSlotsPerBucket = 4;

  struct Stats {
    uint64_t lookups = 0;
    uint64_t hashes = 0;
    uint64_t reads = 0;
    uint64_t compares = 0;
  };

  explicit MultilevelDigestTable(size_t capacity_hint,
                                 unsigned digest_bits = 64,
                                 unsigned levels = 4, uint64_t seed = 1);

  /// False when every level's bucket is full.
  bool insert(const FlowKey& key, uint16_t dip_index);
  std::optional<uint16_t> lookup(const FlowKey& key) const;
  /// As lookup, also accumulating the cost counters.
  std::optional<uint16_t> lookup_counted(const FlowKey& key) const;
  bool erase(const FlowKey& key);

  size_t size() const { return size_; }
  unsigned levels() const { return unsigned(levels_.size()); }

  const Stats& stats() const { return stats_; }
  void reset_stats() { stats_ = Stats{}; }

  uint64_t measured_payload_bits() const;

 private:
  struct Slot {
    uint64_t digest = 0;
    uint16_t dip_index = 0;
  };
  struct Bucket {
    Slot slots[kSlotsPerBucket];
    uint8_t occupied = 0;
  };
  struct Level {
    std::vector<Bucket> buckets;
    uint32_t mask = 0;
    uint32_t seed = 0;
  };

  uint64_t digest_of(const FlowKey& key) const;
  static int scan(const Bucket& b, uint64_t digest);
  static int free_slot(const Bucket& b);

  std::vector<Level> levels_;
  unsigned digest_bits_;
  uint32_t digest_seed_;
  size_t size_ = 0;
  mutable Stats stats_;
};

}  // namespace concury
