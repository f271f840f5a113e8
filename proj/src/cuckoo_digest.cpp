#include "concury/baselines/cuckoo_digest.hpp"

#include <bit>

namespace concury {

CuckooDigestTable::CuckooDigestTable(size_t capacity_hint,
                                     unsigned digest_bits, uint64_t seed)
    : digest_bits_(digest_bits), rng_(uint32_t(seed)) {
  size_t want_slots = size_t(double(std::max<size_t>(capacity_hint, 8)) / 0.9);
  size_t buckets = std::bit_ceil((want_slots + kSlotsPerBucket - 1) /
                                 kSlotsPerBucket);
  buckets_.resize(buckets);
  mask_ = uint32_t(buckets - 1);
  std::mt19937_64 seeder(seed);
  digest_seed_ = uint32_t(seeder());
  bucket_seed_ = uint32_t(seeder());
  alt_seed_ = uint32_t(seeder());
}

uint64_t CuckooDigestTable::digest_of(const FlowKey& key) const {
  uint64_t d = hash64(&key, sizeof(key), digest_seed_);
  if (digest_bits_ < 64) d &= (uint64_t(1) << digest_bits_) - 1;
  return d;
}

uint32_t CuckooDigestTable::bucket1(const FlowKey& key) const {
  return hash32(&key, sizeof(key), bucket_seed_) & mask_;
}

uint32_t CuckooDigestTable::alt_bucket(uint32_t bucket,
                                       uint64_t digest) const {
  uint32_t delta = hash32(&digest, sizeof(digest), alt_seed_) & mask_;
  if (delta == 0) delta = 1;
  return bucket ^ delta;
}

int CuckooDigestTable::scan(const Bucket& b, uint64_t digest) const {
  for (unsigned i = 0; i < kSlotsPerBucket; ++i) {
    if ((b.occupied >> i & 1) && b.slots[i].digest == digest) return int(i);
  }
  return -1;
}

int CuckooDigestTable::free_slot(const Bucket& b) const {
  for (unsigned i = 0; i < kSlotsPerBucket; ++i) {
    if (!(b.occupied >> i & 1)) return int(i);
  }
  return -1;
}

std::optional<uint16_t> CuckooDigestTable::lookup(const FlowKey& key) const {
  uint64_t digest = digest_of(key);
  uint32_t b1 = bucket1(key);
  int slot = scan(buckets_[b1], digest);
  if (slot >= 0) return buckets_[b1].slots[slot].dip_index;
  uint32_t b2 = alt_bucket(b1, digest);
  slot = scan(buckets_[b2], digest);
  if (slot >= 0) return buckets_[b2].slots[slot].dip_index;
  return std::nullopt;
}

std::optional<uint16_t> CuckooDigestTable::lookup_counted(
    const FlowKey& key) const {
  // Cost model: 2 hashes for the 64-bit digest, 1 per bucket located; 1
  // read of table metadata plus 4 slot reads and 4 digest compares per
  // probed bucket.
  stats_.lookups += 1;
  stats_.hashes += 3;
  stats_.reads += 1 + kSlotsPerBucket;
  stats_.compares += kSlotsPerBucket;
  uint64_t digest = digest_of(key);
  uint32_t b1 = bucket1(key);
  int slot = scan(buckets_[b1], digest);
  if (slot >= 0) return buckets_[b1].slots[slot].dip_index;
  stats_.hashes += 1;
  stats_.reads += kSlotsPerBucket;
  stats_.compares += kSlotsPerBucket;
  uint32_t b2 = alt_bucket(b1, digest);
  slot = scan(buckets_[b2], digest);
  if (slot >= 0) return buckets_[b2].slots[slot].dip_index;
  return std::nullopt;
}

bool CuckooDigestTable::insert(const FlowKey& key, uint16_t dip_index) {
  uint64_t digest = digest_of(key);
  uint32_t b1 = bucket1(key);
  uint32_t b2 = alt_bucket(b1, digest);

  // A matching digest is this state as far as the table can tell.
  if (int s = scan(buckets_[b1], digest); s >= 0) {
    buckets_[b1].slots[s].dip_index = dip_index;
    return true;
  }
  if (int s = scan(buckets_[b2], digest); s >= 0) {
    buckets_[b2].slots[s].dip_index = dip_index;
    return true;
  }

  // Fresh placement: pick randomly between the candidates when both have
  // room so residency splits evenly across first and second buckets.
  int f1 = free_slot(buckets_[b1]);
  int f2 = free_slot(buckets_[b2]);
  uint32_t bucket;
  int slot;
  if (f1 >= 0 && f2 >= 0) {
    bucket = (rng_() & 1) ? b1 : b2;
    slot = bucket == b1 ? f1 : f2;
  } else if (f1 >= 0) {
    bucket = b1;
    slot = f1;
  } else if (f2 >= 0) {
    bucket = b2;
    slot = f2;
  } else {
    // Evict a random victim and push it to its alternate bucket.
    bucket = (rng_() & 1) ? b1 : b2;
    uint64_t cur_digest = digest;
    uint16_t cur_dip = dip_index;
    for (int chain = 0; chain < kEvictionCap; ++chain) {
      unsigned victim = rng_() % kSlotsPerBucket;
      Slot& vs = buckets_[bucket].slots[victim];
      std::swap(cur_digest, vs.digest);
      std::swap(cur_dip, vs.dip_index);
      bucket = alt_bucket(bucket, cur_digest);
      int f = free_slot(buckets_[bucket]);
      if (f >= 0) {
        buckets_[bucket].slots[f] = Slot{cur_digest, cur_dip};
        buckets_[bucket].occupied |= uint8_t(1u << f);
        ++size_;
        return true;
      }
    }
    return false;  // table full
  }
  buckets_[bucket].slots[slot] = Slot{digest, dip_index};
  buckets_[bucket].occupied |= uint8_t(1u << slot);
  ++size_;
  return true;
}

bool CuckooDigestTable::erase(const FlowKey& key) {
  uint64_t digest = digest_of(key);
  uint32_t b1 = bucket1(key);
  if (int s = scan(buckets_[b1], digest); s >= 0) {
    buckets_[b1].occupied &= uint8_t(~(1u << s));
    --size_;
    return true;
  }
  uint32_t b2 = alt_bucket(b1, digest);
  if (int s = scan(buckets_[b2], digest); s >= 0) {
    buckets_[b2].occupied &= uint8_t(~(1u << s));
    --size_;
    return true;
  }
  return false;
}

}  // namespace concury
