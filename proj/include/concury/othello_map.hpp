#pragma once

#include <cstdint>
#include <vector>

#include "concury/flow_key.hpp"
#include "concury/othello.hpp"

namespace concury {

/// Control-plane dynamic map of one VIP's states: a dense record array C
/// paired with an Othello mapping key -> index into C. Query, insert and
/// delete are O(1) expected, and the acyclic graph can be re-used to
/// regenerate the data-plane lookup structure without re-hashing.
///
/// Single writer; concurrent readers only between mutations.
class OthelloMap {
 public:
  struct Record {
    FlowKey key;
    uint16_t dip_index;
    uint16_t dcode;
  };

  // Record accounting width: 104-bit key + 16-bit dip index.
  static constexpr unsigned kRecordKeyBits = 104 + 16;
  static constexpr unsigned kMinIndexWidth = 8;

  /// `initial_m` floors the othello array size; a data-plane structure
  /// regenerated from a near-empty map still needs m*m pair coverage of the
  /// dcode space to act as a usable randomizer.
  explicit OthelloMap(uint64_t rng_seed = 1, uint32_t initial_m = 8);

  /// Key's record, or nullptr for not-exist. The full-key comparison defeats
  /// the arbitrary value an Othello returns for unknown keys.
  const Record* query(const FlowKey& key) const;

  /// Appends a new record (returns true) or overwrites an existing key's
  /// record in place (returns false).
  bool insert(const FlowKey& key, uint16_t dip_index, uint16_t dcode);

  /// Removes a key, moving the last record into its slot. Absent keys are a
  /// silent no-op (returns false). By-value key: callers may pass a
  /// reference into the record array itself.
  bool erase(FlowKey key);

  size_t size() const { return records_.size(); }
  const std::vector<Record>& records() const { return records_; }

  /// Rewrites one record's dcode in place (pool-change reassignment); the
  /// key -> index mapping is untouched.
  void set_dcode(size_t index, uint16_t dcode) {
    records_[index].dcode = dcode;
  }

  /// Data-plane structure over the same graph and seeds with each key's
  /// value set to its record's dcode: one value-assignment pass, no
  /// re-hashing, no cycle risk.
  Othello generate_dataplane(unsigned dcode_width);

  unsigned index_width() const { return kv_.value_width(); }
  uint64_t rebuild_count() const { return kv_.rebuild_count() + rebuilds_; }

  /// Accounting per the control-plane cost model:
  /// 2.33*l_i*n + (l_k + l_d)*n bits.
  double memory_bits(unsigned dcode_width) const;

  /// Othello snapshot followed by u32 record count and the packed records
  /// (key 13B, dip_index u16, dcode u16, little-endian).
  std::vector<uint8_t> snapshot() const;
  static OthelloMap restore(const uint8_t* data, size_t len,
                            uint64_t rng_seed = 1);

 private:
  void widen_index();

  OthelloKv<FlowKey> kv_;
  std::vector<Record> records_;
  size_t index_capacity_;
  uint64_t rng_seed_;
  uint64_t rebuilds_ = 0;
};

}  // namespace concury
