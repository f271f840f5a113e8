#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "concury/flow_key.hpp"

namespace concury {

/// Authoritative state -> DIP record, written at each state's first lookup
/// and append-only for its lifetime. Every later observation of the state is
/// checked against it; disagreements are counted, never repaired.
class ConsistencyOracle {
 public:
  struct Entry {
    uint8_t vip = 0;
    uint16_t dip_index = 0;
  };

  void set_pool(uint8_t vip, const std::vector<uint16_t>& dips) {
    auto& pool = pools_[vip];
    pool.assign(size_t(1) << 16, false);
    for (uint16_t d : dips) pool[d] = true;
  }

  /// Records or checks one lookup. `table_hit` distinguishes a match found
  /// in a lookup table from a miss routed by the stateless path; a hit for
  /// a state the oracle never saw is a false hit (digest collision).
  void observe(uint8_t vip, const FlowKey& key, uint16_t dip_index,
               bool table_hit) {
    auto pool = pools_.find(vip);
    if (pool != pools_.end() && !pool->second[dip_index]) {
      ++cross_vip_hits_;
    }
    auto [it, inserted] = states_.try_emplace(key, Entry{vip, dip_index});
    if (inserted) {
      if (table_hit) ++false_hits_;
      return;
    }
    if (it->second.dip_index != dip_index || it->second.vip != vip) {
      ++pcc_violations_;
    }
  }

  /// Termination: the state's lifetime ends, later sightings start fresh.
  void forget(const FlowKey& key) { states_.erase(key); }

  /// A DIP left its pool: states recorded on it must restart, so their
  /// records end here too.
  void drop_dip(uint8_t vip, uint16_t dip_index) {
    for (auto it = states_.begin(); it != states_.end();) {
      if (it->second.vip == vip && it->second.dip_index == dip_index) {
        it = states_.erase(it);
      } else {
        ++it;
      }
    }
  }

  const Entry* recorded(const FlowKey& key) const {
    auto it = states_.find(key);
    return it == states_.end() ? nullptr : &it->second;
  }

  size_t states() const { return states_.size(); }
  uint64_t pcc_violations() const { return pcc_violations_; }
  uint64_t false_hits() const { return false_hits_; }
  uint64_t cross_vip_hits() const { return cross_vip_hits_; }

  /// Live state counts per DIP of one VIP (for normalized-load series).
  std::unordered_map<uint16_t, uint64_t> states_per_dip(uint8_t vip) const {
    std::unordered_map<uint16_t, uint64_t> counts;
    for (const auto& [key, entry] : states_) {
      if (entry.vip == vip) counts[entry.dip_index] += 1;
    }
    return counts;
  }

 private:
  std::unordered_map<FlowKey, Entry, FlowKeyHash> states_;
  std::unordered_map<uint8_t, std::vector<bool>> pools_;
  uint64_t pcc_violations_ = 0;
  uint64_t false_hits_ = 0;
  uint64_t cross_vip_hits_ = 0;
};

}  // namespace concury
