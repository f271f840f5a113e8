#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "concury/dataplane.hpp"
#include "concury/othello_map.hpp"
#include "concury/update_message.hpp"

namespace concury {

/// One VIP's backend pool: DIP addresses with non-negative capacity weights.
struct DipPool {
  struct Entry {
    DipAddress dip;
    double weight = 1.0;
  };
  std::vector<Entry> dips;
};

/// Weighted many-to-one Dcode -> DIP assignment: contiguous runs in DIP-index
/// order, counts apportioned to weights by largest remainder.
struct DcodePartition {
  struct Run {
    uint16_t dip_index = 0;  // global DIP table index
    uint32_t first = 0;
    uint32_t count = 0;
  };
  std::vector<uint16_t> mapping;  // 2^l_d entries, dcode -> dip index
  std::vector<Run> runs;          // one per pool DIP, index-ordered

  const Run* run_of(uint16_t dip_index) const {
    for (const Run& r : runs) {
      if (r.dip_index == dip_index) return &r;
    }
    return nullptr;
  }
};

/// Largest-remainder apportionment of 2^l_d dcodes over weights; ties go to
/// the lowest position. Throws on an all-zero weight vector.
std::vector<uint32_t> apportion_dcodes(const std::vector<double>& weights,
                                       unsigned ld);

/// State arrival/termination report from a backend host agent.
struct HostAgentReport {
  enum class Kind : uint8_t { arrival = 0, termination = 1 };
  Kind kind = Kind::arrival;
  uint8_t vip_index = 0;
  FlowKey key;
  uint16_t dip_index = 0;  // arrivals only

  /// Length-prefixed-free fixed binary record: kind u8, vip u8, key 13B,
  /// dip u16 little-endian (17 bytes).
  static constexpr size_t kWireSize = 17;
  void encode(std::vector<uint8_t>& out) const;
  static HostAgentReport decode(const uint8_t* data);
  /// CSV form: kind,vip,key-hex,dip.
  std::string to_csv() const;
  static std::optional<HostAgentReport> from_csv(const std::string& line);
};

/// Per-VIP OthelloMaps plus the procedures that keep the data plane
/// consistent: report ingestion (no update emitted), weighted Dcode
/// partitioning, and the DIP-pool-change path that reassigns stored states
/// and emits one UpdateMessage per changed VIP.
///
/// Mutations for one VIP are serialized by the caller; emission is
/// asynchronous with respect to data-plane readers.
class ControlPlane {
 public:
  struct Config {
    uint32_t vip_prefix = 0x0a8000;
    unsigned max_vips = 128;
    unsigned ld = 12;
    unsigned lv = 12;
    uint64_t rng_seed = 1;
    /// Floor on every per-VIP othello size: the weighted randomizer draws
    /// from m*m array pairs, so m*m must stay well above 2^l_d.
    uint32_t min_m = 1024;
  };

  explicit ControlPlane(const Config& config);

  // Local channel to the data plane. Updates travel as encoded wire bytes.
  using UpdateSink = std::function<void(const std::vector<uint8_t>&)>;
  using DipSink = std::function<void(uint16_t, DipAddress)>;
  using VipRemovedSink = std::function<void(uint8_t)>;
  void set_update_sink(UpdateSink sink) { update_sink_ = std::move(sink); }
  void set_dip_sink(DipSink sink) { dip_sink_ = std::move(sink); }
  void set_vip_removed_sink(VipRemovedSink sink) {
    vip_removed_sink_ = std::move(sink);
  }

  /// Installs a new VIP with its pool and emits its first update.
  void add_vip(uint8_t vip_index, const DipPool& pool);
  void remove_vip(uint8_t vip_index);
  bool vip_active(uint8_t vip_index) const;

  /// Arrival inserts the state with a dcode drawn uniformly from the
  /// reported DIP's dcodes; termination deletes it. Never emits an update.
  /// Returns false for rejected reports (unknown VIP, DIP not in pool, or
  /// DIP holding no dcodes).
  bool on_report(const HostAgentReport& report);

  /// Binary report stream (concatenated 17-byte records). Returns the number
  /// accepted.
  size_t ingest_binary(const uint8_t* data, size_t len);
  /// CSV report stream, one record per line.
  size_t ingest_csv(std::istream& in);

  /// Recomputes the partition for the new pool, reassigns stored states
  /// whose dcode would resolve to the wrong DIP (dropping states whose DIP
  /// left), regenerates the lookup structure from the OthelloMap graph, and
  /// emits the update.
  void handle_pool_change(uint8_t vip_index, const DipPool& new_pool);

  const OthelloMap& map(uint8_t vip_index) const;
  const DipPool& pool(uint8_t vip_index) const;
  const DcodePartition& partition(uint8_t vip_index) const;

  uint16_t dip_index_of(DipAddress dip) const;
  DipAddress dip_of(uint16_t index) const { return dip_registry_[index]; }

  uint64_t updates_emitted() const { return updates_emitted_; }
  uint64_t reports_rejected() const { return reports_rejected_; }
  uint64_t states_dropped() const { return states_dropped_; }

  unsigned ld() const { return ld_; }
  unsigned lv() const { return lv_; }

  /// Control-plane accounting: sum of the per-VIP OthelloMap formulas.
  double memory_bits() const;

 private:
  struct Vip {
    bool active = false;
    OthelloMap map;
    DipPool pool;
    DcodePartition partition;

    Vip(uint64_t seed, uint32_t min_m) : map(seed, min_m) {}
  };

  DcodePartition make_partition(const DipPool& pool);
  uint16_t register_dip(DipAddress dip);
  uint16_t draw_dcode(const DcodePartition::Run& run);
  void emit_update(uint8_t vip_index);
  Vip& active_vip(uint8_t vip_index);
  const Vip& active_vip(uint8_t vip_index) const;

  uint32_t vip_prefix_;
  unsigned max_vips_;
  unsigned ld_;
  unsigned lv_;
  uint32_t min_m_;
  std::vector<Vip> vips_;
  std::vector<DipAddress> dip_registry_;
  std::unordered_map<uint64_t, uint16_t> dip_lookup_;  // packed addr -> index
  std::mt19937_64 rng_;
  UpdateSink update_sink_;
  DipSink dip_sink_;
  VipRemovedSink vip_removed_sink_;
  uint64_t updates_emitted_ = 0;
  uint64_t reports_rejected_ = 0;
  uint64_t states_dropped_ = 0;
};

/// Wires a control plane to an in-process data plane through the wire
/// formats: updates are encoded, decoded, then applied.
void connect_local(ControlPlane& cp, DataPlane& dp);

}  // namespace concury
