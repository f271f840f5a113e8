#include "concury/dataplane.hpp"

#include <cassert>
#include <stdexcept>

namespace concury {

DataPlane::DataPlane(const Config& config)
    : vip_prefix_(config.vip_prefix & 0xffffff),
      max_vips_(config.max_vips),
      lv_(config.lv),
      slots_(config.max_vips) {
  if (max_vips_ < 1 || max_vips_ > 256) {
    throw std::invalid_argument("dataplane: max_vips must be 1..256");
  }
  if (lv_ < 1 || lv_ > 16) {
    throw std::invalid_argument("dataplane: lv must be 1..16");
  }
  size_t dips = size_t(1) << lv_;
  dip_table_ = std::make_unique<std::atomic<uint64_t>[]>(dips);
  for (size_t i = 0; i < dips; ++i) {
    dip_table_[i].store(0, std::memory_order_relaxed);
  }
}

std::unique_ptr<DataPlane::VipTables> DataPlane::build_tables(
    const UpdateMessage& msg) {
  auto t = std::make_unique<VipTables>();
  t->ld = msg.ld;
  t->m = msg.m;
  t->seeds = msg.seeds;
  t->words_per_side = (size_t(msg.m) * msg.ld + 63) / 64;
  t->word_count = 2 * t->words_per_side;
  t->da_count = size_t(1) << msg.ld;
  t->words = std::make_unique<std::atomic<uint64_t>[]>(t->word_count);
  size_t word_blocks = (t->word_count + kWordsPerBlock - 1) / kWordsPerBlock;
  t->word_seq = std::make_unique<std::atomic<uint32_t>[]>(word_blocks);
  for (size_t i = 0; i < word_blocks; ++i) {
    t->word_seq[i].store(0, std::memory_order_relaxed);
  }
  t->da = std::make_unique<std::atomic<uint16_t>[]>(t->da_count);
  size_t da_blocks = (t->da_count + kDaPerBlock - 1) / kDaPerBlock;
  t->da_seq = std::make_unique<std::atomic<uint32_t>[]>(da_blocks);
  for (size_t i = 0; i < da_blocks; ++i) {
    t->da_seq[i].store(0, std::memory_order_relaxed);
  }
  for (size_t w = 0; w < t->words_per_side; ++w) {
    t->words[w].store(msg.a.words()[w], std::memory_order_relaxed);
    t->words[t->words_per_side + w].store(msg.b.words()[w],
                                          std::memory_order_relaxed);
  }
  for (size_t i = 0; i < t->da_count; ++i) {
    t->da[i].store(msg.da_row[i], std::memory_order_relaxed);
  }
  return t;
}

void DataPlane::swap_install(VipSlot& slot, std::unique_ptr<VipTables> next) {
  slot.retired[1] = std::move(slot.retired[0]);
  slot.retired[0] = std::move(slot.owner);
  slot.owner = std::move(next);
  slot.tables.store(slot.owner.get(), std::memory_order_release);
}

void DataPlane::apply_update(const UpdateMessage& msg) {
  if (msg.vip_index >= max_vips_) {
    throw std::invalid_argument("dataplane: vip index out of range");
  }
  if (msg.a.size() != msg.m || msg.b.size() != msg.m ||
      msg.da_row.size() != size_t(1) << msg.ld) {
    throw std::invalid_argument("dataplane: update payload inconsistent");
  }
  VipSlot& slot = slots_[msg.vip_index];
  VipTables* cur = slot.tables.load(std::memory_order_relaxed);
  if (cur == nullptr || cur->ld != msg.ld || cur->m != msg.m ||
      !(cur->seeds == msg.seeds)) {
    // Sizing metadata changed: whole-table swap, atomic per VIP.
    swap_install(slot, build_tables(msg));
    return;
  }
  // In-place copy, 1024 bits locked at a time. Lookups touching a block
  // being copied retry; everything else proceeds.
  for (size_t w = 0; w < cur->word_count; w += kWordsPerBlock) {
    size_t blk = w / kWordsPerBlock;
    uint32_t s = cur->word_seq[blk].load(std::memory_order_relaxed);
    cur->word_seq[blk].store(s + 1, std::memory_order_relaxed);
    std::atomic_thread_fence(std::memory_order_release);
    size_t end = std::min(w + kWordsPerBlock, cur->word_count);
    for (size_t i = w; i < end; ++i) {
      uint64_t v = i < cur->words_per_side
                       ? msg.a.words()[i]
                       : msg.b.words()[i - cur->words_per_side];
      cur->words[i].store(v, std::memory_order_relaxed);
    }
    cur->word_seq[blk].store(s + 2, std::memory_order_release);
  }
  for (size_t d = 0; d < cur->da_count; d += kDaPerBlock) {
    size_t blk = d / kDaPerBlock;
    uint32_t s = cur->da_seq[blk].load(std::memory_order_relaxed);
    cur->da_seq[blk].store(s + 1, std::memory_order_relaxed);
    std::atomic_thread_fence(std::memory_order_release);
    size_t end = std::min(d + kDaPerBlock, cur->da_count);
    for (size_t i = d; i < end; ++i) {
      cur->da[i].store(msg.da_row[i], std::memory_order_relaxed);
    }
    cur->da_seq[blk].store(s + 2, std::memory_order_release);
  }
}

void DataPlane::remove_vip(uint8_t vip_index) {
  if (vip_index >= max_vips_) {
    throw std::invalid_argument("dataplane: vip index out of range");
  }
  VipSlot& slot = slots_[vip_index];
  slot.retired[1] = std::move(slot.retired[0]);
  slot.retired[0] = std::move(slot.owner);
  slot.tables.store(nullptr, std::memory_order_release);
}

bool DataPlane::vip_installed(uint8_t vip_index) const {
  return vip_index < max_vips_ &&
         slots_[vip_index].tables.load(std::memory_order_acquire) != nullptr;
}

void DataPlane::set_dip(uint16_t dip_index, DipAddress dip) {
  assert(dip_index < (size_t(1) << lv_));
  dip_table_[dip_index].store(pack_dip(dip), std::memory_order_release);
}

DipAddress DataPlane::dip_at(uint16_t dip_index) const {
  return unpack_dip(dip_table_[dip_index].load(std::memory_order_acquire));
}

double DataPlane::memory_bits(uint64_t states, unsigned ld, unsigned max_vips,
                              unsigned lv) {
  return 2.33 * ld * double(states) + 64.0 * max_vips +
         double(uint64_t(1) << ld) * lv * max_vips +
         48.0 * double(uint64_t(1) << lv);
}

uint64_t DataPlane::measured_payload_bits() const {
  uint64_t bits = 64ull * max_vips_;     // VIP array of table handles
  bits += 48ull * (uint64_t(1) << lv_);  // DIP table
  for (const VipSlot& slot : slots_) {
    const VipTables* t = slot.tables.load(std::memory_order_acquire);
    if (t == nullptr) continue;
    bits += 2ull * t->m * t->ld;          // A and B payload
    bits += uint64_t(t->da_count) * lv_;  // DA row
  }
  return bits;
}

}  // namespace concury
