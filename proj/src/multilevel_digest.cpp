#include "concury/baselines/multilevel_digest.hpp"

#include <bit>
#include <random>

namespace concury {

MultilevelDigestTable::MultilevelDigestTable(size_t capacity_hint,
                                             unsigned digest_bits,
                                             unsigned levels, uint64_t seed)
    : digest_bits_(digest_bits) {
  std::mt19937_64 seeder(seed);
  digest_seed_ = uint32_t(seeder());
  size_t want_slots =
      size_t(double(std::max<size_t>(capacity_hint, 8)) / 0.9);
  size_t per_level = (want_slots + levels - 1) / levels;
  size_t buckets =
      std::bit_ceil((per_level + kSlotsPerBucket - 1) / kSlotsPerBucket);
  levels_.resize(levels);
  for (Level& level : levels_) {
    level.buckets.resize(buckets);
    level.mask = uint32_t(buckets - 1);
    level.seed = uint32_t(seeder());
  }
}

uint64_t MultilevelDigestTable::digest_of(const FlowKey& key) const {
  uint64_t d = hash64(&key, sizeof(key), digest_seed_);
  if (digest_bits_ < 64) d &= (uint64_t(1) << digest_bits_) - 1;
  return d;
}

int MultilevelDigestTable::scan(const Bucket& b, uint64_t digest) {
  for (unsigned i = 0; i < kSlotsPerBucket; ++i) {
    if ((b.occupied >> i & 1) && b.slots[i].digest == digest) return int(i);
  }
  return -1;
}

int MultilevelDigestTable::free_slot(const Bucket& b) {
  for (unsigned i = 0; i < kSlotsPerBucket; ++i) {
    if (!(b.occupied >> i & 1)) return int(i);
  }
  return -1;
}

std::optional<uint16_t> MultilevelDigestTable::lookup(
    const FlowKey& key) const {
  uint64_t digest = digest_of(key);
  for (const Level& level : levels_) {
    const Bucket& b =
        level.buckets[hash32(&key, sizeof(key), level.seed) & level.mask];
    if (int s = scan(b, digest); s >= 0) return b.slots[s].dip_index;
  }
  return std::nullopt;
}

std::optional<uint16_t> MultilevelDigestTable::lookup_counted(
    const FlowKey& key) const {
  stats_.lookups += 1;
  stats_.hashes += 2;  // digest
  stats_.reads += 1;   // table metadata
  uint64_t digest = digest_of(key);
  for (const Level& level : levels_) {
    stats_.hashes += 1;
    stats_.reads += kSlotsPerBucket;
    stats_.compares += kSlotsPerBucket;
    const Bucket& b =
        level.buckets[hash32(&key, sizeof(key), level.seed) & level.mask];
    if (int s = scan(b, digest); s >= 0) return b.slots[s].dip_index;
  }
  return std::nullopt;
}

bool MultilevelDigestTable::insert(const FlowKey& key, uint16_t dip_index) {
  uint64_t digest = digest_of(key);
  for (Level& level : levels_) {
    Bucket& b =
        level.buckets[hash32(&key, sizeof(key), level.seed) & level.mask];
    if (int s = scan(b, digest); s >= 0) {
      b.slots[s].dip_index = dip_index;
      return true;
    }
  }
  for (Level& level : levels_) {
    Bucket& b =
        level.buckets[hash32(&key, sizeof(key), level.seed) & level.mask];
    if (int f = free_slot(b); f >= 0) {
      b.slots[f] = Slot{digest, dip_index};
      b.occupied |= uint8_t(1u << f);
      ++size_;
      return true;
    }
  }
  return false;  // every level full at this key's positions
}

bool MultilevelDigestTable::erase(const FlowKey& key) {
  uint64_t digest = digest_of(key);
  for (Level& level : levels_) {
    Bucket& b =
        level.buckets[hash32(&key, sizeof(key), level.seed) & level.mask];
    if (int s = scan(b, digest); s >= 0) {
      b.occupied &= uint8_t(~(1u << s));
      --size_;
      return true;
    }
  }
  return false;
}

uint64_t MultilevelDigestTable::measured_payload_bits() const {
  uint64_t bits = 0;
  for (const Level& level : levels_) {
    bits += uint64_t(level.buckets.size()) * kSlotsPerBucket *
            (digest_bits_ + 16);
  }
  return bits;
}

}  // namespace concury
