#include "concury/othello_map.hpp"

#include <bit>
#include <cstring>
#include <stdexcept>

namespace concury {

OthelloMap::OthelloMap(uint64_t rng_seed, uint32_t initial_m)
    : kv_(kMinIndexWidth, initial_m, rng_seed),
      index_capacity_(size_t(1) << kMinIndexWidth),
      rng_seed_(rng_seed) {}

const OthelloMap::Record* OthelloMap::query(const FlowKey& key) const {
  uint64_t i = kv_.lookup(key);
  if (i < records_.size() && records_[i].key == key) return &records_[i];
  return nullptr;
}

bool OthelloMap::insert(const FlowKey& key, uint16_t dip_index,
                        uint16_t dcode) {
  uint64_t i = kv_.lookup(key);
  if (i < records_.size() && records_[i].key == key) {
    records_[i].dip_index = dip_index;
    records_[i].dcode = dcode;
    return false;
  }
  if (records_.size() == index_capacity_) widen_index();
  kv_.add(key, records_.size());
  records_.push_back(Record{key, dip_index, dcode});
  return true;
}

bool OthelloMap::erase(FlowKey key) {
  uint64_t j = kv_.lookup(key);
  if (j >= records_.size() || !(records_[j].key == key)) return false;
  kv_.remove(key);
  size_t last = records_.size() - 1;
  if (j != last) {
    records_[j] = records_[last];
    kv_.set_value(records_[j].key, j);
  }
  records_.pop_back();
  return true;
}

Othello OthelloMap::generate_dataplane(unsigned dcode_width) {
  return kv_.remap_structure(dcode_width, [this](uint64_t index) {
    return uint64_t(records_[index].dcode);
  });
}

double OthelloMap::memory_bits(unsigned dcode_width) const {
  double n = double(records_.size());
  return 2.33 * index_width() * n + (kRecordKeyBits + dcode_width) * n;
}

void OthelloMap::widen_index() {
  index_capacity_ *= 2;
  std::vector<std::pair<FlowKey, uint64_t>> pairs;
  pairs.reserve(records_.size());
  for (size_t i = 0; i < records_.size(); ++i) {
    pairs.emplace_back(records_[i].key, i);
  }
  uint64_t old_rebuilds = kv_.rebuild_count();
  kv_ = OthelloKv<FlowKey>(pairs, unsigned(std::countr_zero(index_capacity_)),
                           kv_.m(), rng_seed_ + index_capacity_);
  rebuilds_ += old_rebuilds;
}

std::vector<uint8_t> OthelloMap::snapshot() const {
  std::vector<uint8_t> out = kv_.structure().serialize();
  put_u32(out, uint32_t(records_.size()));
  for (const Record& r : records_) {
    out.insert(out.end(), r.key.bytes.begin(), r.key.bytes.end());
    put_u16(out, r.dip_index);
    put_u16(out, r.dcode);
  }
  return out;
}

OthelloMap OthelloMap::restore(const uint8_t* data, size_t len,
                               uint64_t rng_seed) {
  Othello o = Othello::deserialize(data, len);
  size_t head = 16 + 2 * ((size_t(o.m) * o.l + 7) / 8);
  if (len < head + 4) throw std::invalid_argument("othellomap: truncated");
  uint32_t count = get_u32(data + head);
  size_t need = head + 4 + size_t(count) * 17;
  if (len < need) throw std::invalid_argument("othellomap: truncated");

  OthelloMap map(rng_seed);
  map.records_.reserve(count);
  std::vector<std::pair<FlowKey, uint64_t>> pairs;
  pairs.reserve(count);
  const uint8_t* p = data + head + 4;
  for (uint32_t i = 0; i < count; ++i, p += 17) {
    Record r;
    std::memcpy(r.key.bytes.data(), p, 13);
    r.dip_index = get_u16(p + 13);
    r.dcode = get_u16(p + 15);
    map.records_.push_back(r);
    pairs.emplace_back(r.key, i);
  }
  while (map.index_capacity_ < count) map.index_capacity_ *= 2;
  map.kv_ = OthelloKv<FlowKey>(
      pairs, unsigned(std::countr_zero(map.index_capacity_)), o.m, rng_seed,
      &o.seeds);
  return map;
}

}  // namespace concury
