#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "concury/flow_key.hpp"
#include "concury/update_message.hpp"

namespace concury {

/// Backend address: 32-bit address plus 16-bit port (48 bits of payload).
struct DipAddress {
  uint32_t addr = 0;
  uint16_t port = 0;

  friend bool operator==(const DipAddress&, const DipAddress&) = default;
};

/// The packet-facing lookup pipeline: VIP index -> per-VIP Othello -> Dcode
/// -> DIP array -> DIP. Lookups run concurrently on any number of reader
/// threads; exactly one writer at a time applies updates.
///
/// Updates copy the per-VIP arrays in place under 1024-bit sequence-locked
/// blocks, so a lookup blocks (retries) only while the specific block it
/// touches is being copied; lookups on other VIPs are never affected. An
/// update whose sizing or seeds differ from the installed structure is
/// applied by atomically swapping in a freshly built per-VIP table instead;
/// superseded tables are kept through two further swaps before being freed,
/// which outlives any in-flight lookup by a wide margin.
class DataPlane {
 public:
  struct Config {
    uint32_t vip_prefix = 0x0a8000;  // top 24 bits of every VIP address
    unsigned max_vips = 128;         // M, at most 256
    unsigned lv = 12;                // DIP index width
  };

  struct PacketPath {
    DipAddress dip;
    uint16_t dcode = 0;
    uint16_t dip_index = 0;
  };

  explicit DataPlane(const Config& config);

  /// Full pipeline lookup; nullopt is the drop signal (unknown VIP prefix,
  /// index out of range, or VIP not installed).
  std::optional<PacketPath> lookup_packet(uint32_t vip_addr,
                                          const FlowKey& key) const {
    if ((vip_addr >> 8) != vip_prefix_) [[unlikely]] {
      drops_.fetch_add(1, std::memory_order_relaxed);
      return std::nullopt;
    }
    uint32_t index = vip_addr & 0xff;  // the VIP index is the low 8 bits
    if (index >= max_vips_) [[unlikely]] {
      drops_.fetch_add(1, std::memory_order_relaxed);
      return std::nullopt;
    }
    const VipTables* t = slots_[index].tables.load(std::memory_order_acquire);
    if (t == nullptr) [[unlikely]] {
      drops_.fetch_add(1, std::memory_order_relaxed);
      return std::nullopt;
    }
    uint32_t ha = hash32(&key, sizeof(key), t->seeds.seed_a) & (t->m - 1);
    uint32_t hb = hash32(&key, sizeof(key), t->seeds.seed_b) & (t->m - 1);
    uint16_t dcode = read_dcode(*t, ha, hb);
    uint16_t dip_index = read_da(*t, dcode);
    PacketPath out;
    out.dip =
        unpack_dip(dip_table_[dip_index].load(std::memory_order_acquire));
    out.dcode = dcode;
    out.dip_index = dip_index;
    return out;
  }

  /// Replaces VIP i's A, B arrays and DA row. Single writer.
  void apply_update(const UpdateMessage& msg);

  /// Drops VIP i's tables; subsequent packets to it drop.
  void remove_vip(uint8_t vip_index);
  bool vip_installed(uint8_t vip_index) const;

  /// Publishes one DIP table entry. Entries referenced by a DA row must be
  /// set before the update naming them is applied.
  void set_dip(uint16_t dip_index, DipAddress dip);
  DipAddress dip_at(uint16_t dip_index) const;

  unsigned max_vips() const { return max_vips_; }
  unsigned lv() const { return lv_; }
  uint32_t vip_prefix() const { return vip_prefix_; }

  uint64_t drop_count() const {
    return drops_.load(std::memory_order_relaxed);
  }
  /// Lookups that observed an in-flight block copy and retried: the packets
  /// racing an update (surfaced as a counter, not prevented).
  uint64_t contended_reads() const {
    return retries_.load(std::memory_order_relaxed);
  }

  /// Closed-form accounting: 2.33*l_d*n + 64*M + 2^l_d*l_v*M + 48*2^l_v
  /// bits, with n the total state count and l_d the common Dcode width.
  static double memory_bits(uint64_t states, unsigned ld, unsigned max_vips,
                            unsigned lv);
  /// Bits actually held by installed tables (array payloads, DA rows, VIP
  /// array, DIP table).
  uint64_t measured_payload_bits() const;

  /// Per-lookup cost of the pipeline by construction: reads counted per the
  /// breakdown VIP array + structure header + A + B + DA + DIP table.
  struct CostModel {
    int hashes = 2;
    int reads = 6;
    int xors = 1;
  };
  static constexpr CostModel lookup_cost() { return CostModel{}; }

 private:
  static constexpr size_t kWordsPerBlock = 16;  // 1024 bits
  static constexpr size_t kDaPerBlock = 64;     // 64 * 16 bits = 1024 bits

  struct VipTables {
    unsigned ld = 0;
    uint32_t m = 0;
    HashSeedPair seeds;
    size_t words_per_side = 0;
    size_t word_count = 0;  // 2 * words_per_side, A then B
    size_t da_count = 0;    // 1 << ld
    std::unique_ptr<std::atomic<uint64_t>[]> words;
    std::unique_ptr<std::atomic<uint32_t>[]> word_seq;  // per 1024-bit block
    std::unique_ptr<std::atomic<uint16_t>[]> da;
    std::unique_ptr<std::atomic<uint32_t>[]> da_seq;  // per 64-entry block
  };

  struct VipSlot {
    std::atomic<VipTables*> tables{nullptr};
    std::unique_ptr<VipTables> owner;       // the published generation
    std::unique_ptr<VipTables> retired[2];  // grace period for readers
  };

  static uint64_t pack_dip(DipAddress d) {
    return uint64_t(d.addr) << 16 | d.port;
  }
  static DipAddress unpack_dip(uint64_t packed) {
    return DipAddress{uint32_t(packed >> 16), uint16_t(packed)};
  }

  /// Both array elements read and validated under one pass over the 1024-bit
  /// block versions they touch.
  uint16_t read_dcode(const VipTables& t, uint32_t ha, uint32_t hb) const {
    size_t bit_a = size_t(ha) * t.ld;
    size_t bit_b = size_t(hb) * t.ld + t.words_per_side * 64;
    size_t wa = bit_a >> 6, wb = bit_b >> 6;
    unsigned oa = unsigned(bit_a & 63), ob = unsigned(bit_b & 63);
    bool sa = oa + t.ld > 64, sb = ob + t.ld > 64;
    size_t ba0 = wa / kWordsPerBlock, ba1 = (wa + sa) / kWordsPerBlock;
    size_t bb0 = wb / kWordsPerBlock, bb1 = (wb + sb) / kWordsPerBlock;
    for (;;) {
      uint32_t va0 = t.word_seq[ba0].load(std::memory_order_acquire);
      uint32_t va1 = t.word_seq[ba1].load(std::memory_order_acquire);
      uint32_t vb0 = t.word_seq[bb0].load(std::memory_order_acquire);
      uint32_t vb1 = t.word_seq[bb1].load(std::memory_order_acquire);
      if (((va0 | va1 | vb0 | vb1) & 1) == 0) [[likely]] {
        uint64_t a0 = t.words[wa].load(std::memory_order_relaxed);
        uint64_t a1 =
            sa ? t.words[wa + 1].load(std::memory_order_relaxed) : 0;
        uint64_t b0 = t.words[wb].load(std::memory_order_relaxed);
        uint64_t b1 =
            sb ? t.words[wb + 1].load(std::memory_order_relaxed) : 0;
        std::atomic_thread_fence(std::memory_order_acquire);
        if (t.word_seq[ba0].load(std::memory_order_relaxed) == va0 &&
            t.word_seq[ba1].load(std::memory_order_relaxed) == va1 &&
            t.word_seq[bb0].load(std::memory_order_relaxed) == vb0 &&
            t.word_seq[bb1].load(std::memory_order_relaxed) == vb1)
            [[likely]] {
          return uint16_t(extract_bits(a0, a1, oa, t.ld) ^
                          extract_bits(b0, b1, ob, t.ld));
        }
      }
      retries_.fetch_add(1, std::memory_order_relaxed);
    }
  }

  uint16_t read_da(const VipTables& t, uint32_t dcode) const {
    size_t blk = dcode / kDaPerBlock;
    for (;;) {
      uint32_t s = t.da_seq[blk].load(std::memory_order_acquire);
      if ((s & 1) == 0) [[likely]] {
        uint16_t v = t.da[dcode].load(std::memory_order_relaxed);
        std::atomic_thread_fence(std::memory_order_acquire);
        if (t.da_seq[blk].load(std::memory_order_relaxed) == s) [[likely]] {
          return v;
        }
      }
      retries_.fetch_add(1, std::memory_order_relaxed);
    }
  }

  static std::unique_ptr<VipTables> build_tables(const UpdateMessage& msg);
  void swap_install(VipSlot& slot, std::unique_ptr<VipTables> next);

  uint32_t vip_prefix_;
  unsigned max_vips_;
  unsigned lv_;
  std::vector<VipSlot> slots_;
  std::unique_ptr<std::atomic<uint64_t>[]> dip_table_;  // packed addr|port
  mutable std::atomic<uint64_t> drops_{0};
  mutable std::atomic<uint64_t> retries_{0};
};

}  // namespace concury
