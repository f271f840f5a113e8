#include "concury/bits.hpp"

#include <cassert>
#include <cstring>

namespace concury {

BitArray::BitArray(size_t count, unsigned width)
    : count_(count), width_(width), words_((count * width + 63) / 64, 0) {
  assert(width >= 1 && width <= 32);
}

void BitArray::set(size_t index, uint64_t value) {
  assert(index < count_);
  uint64_t mask = (uint64_t(1) << width_) - 1;
  value &= mask;
  size_t bit = index * width_;
  size_t w = bit >> 6;
  unsigned off = unsigned(bit & 63);
  words_[w] = (words_[w] & ~(mask << off)) | (value << off);
  if (off + width_ > 64) {
    unsigned spill = off + width_ - 64;
    uint64_t hi_mask = (uint64_t(1) << spill) - 1;
    words_[w + 1] = (words_[w + 1] & ~hi_mask) | (value >> (width_ - spill));
  }
}

std::vector<uint8_t> BitArray::to_bytes() const {
  std::vector<uint8_t> out((size_bits() + 7) / 8, 0);
  for (size_t i = 0; i < out.size(); ++i) {
    size_t w = i >> 3;
    out[i] = uint8_t(words_[w] >> (8 * (i & 7)));
  }
  return out;
}

BitArray BitArray::from_bytes(const uint8_t* bytes, size_t count,
                              unsigned width) {
  BitArray a(count, width);
  size_t nbytes = (a.size_bits() + 7) / 8;
  for (size_t i = 0; i < nbytes; ++i) {
    a.words_[i >> 3] |= uint64_t(bytes[i]) << (8 * (i & 7));
  }
  // Clear padding bits above the payload so equality is well defined.
  unsigned tail = unsigned(a.size_bits() & 63);
  if (tail != 0 && !a.words_.empty()) {
    a.words_.back() &= (uint64_t(1) << tail) - 1;
  }
  return a;
}

void put_u8(std::vector<uint8_t>& out, uint8_t v) { out.push_back(v); }

void put_u16(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(uint8_t(v));
  out.push_back(uint8_t(v >> 8));
}

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  out.push_back(uint8_t(v));
  out.push_back(uint8_t(v >> 8));
  out.push_back(uint8_t(v >> 16));
  out.push_back(uint8_t(v >> 24));
}

uint16_t get_u16(const uint8_t* p) {
  return uint16_t(p[0]) | uint16_t(p[1]) << 8;
}

uint32_t get_u32(const uint8_t* p) {
  return uint32_t(p[0]) | uint32_t(p[1]) << 8 | uint32_t(p[2]) << 16 |
         uint32_t(p[3]) << 24;
}

}  // namespace concury
