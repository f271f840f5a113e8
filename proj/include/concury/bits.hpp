#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace concury {

/// Extract a `width`-bit value starting at bit `off` (0..63) of w0, spilling
/// into w1 when the value straddles the word boundary. LSB-first bit order.
inline uint64_t extract_bits(uint64_t w0, uint64_t w1, unsigned off,
                             unsigned width) {
  uint64_t v = w0 >> off;
  if (off + width > 64) v |= w1 << (64 - off);
  return v & ((uint64_t(1) << width) - 1);
}

/// Fixed element count array of `width`-bit values (width 1..32), packed into
/// 64-bit words. Element j occupies bits [j*width, (j+1)*width) of the
/// bitstream, least-significant-bit first; serializing the words little-endian
/// yields the same bitstream over bytes.
class BitArray {
 public:
  BitArray() = default;
  BitArray(size_t count, unsigned width);

  uint64_t get(size_t index) const {
    size_t bit = index * width_;
    size_t w = bit >> 6;
    unsigned off = unsigned(bit & 63);
    uint64_t w1 = (off + width_ > 64) ? words_[w + 1] : 0;
    return extract_bits(words_[w], w1, off, width_);
  }

  void set(size_t index, uint64_t value);

  size_t size() const { return count_; }
  unsigned width() const { return width_; }
  size_t size_bits() const { return count_ * width_; }

  const std::vector<uint64_t>& words() const { return words_; }
  std::vector<uint64_t>& words() { return words_; }

  /// Bytes of the packed payload, padded to a byte boundary.
  std::vector<uint8_t> to_bytes() const;
  /// Rebuild from a little-endian packed payload; `bytes` must hold at least
  /// ceil(count*width/8) bytes.
  static BitArray from_bytes(const uint8_t* bytes, size_t count,
                             unsigned width);

  friend bool operator==(const BitArray&, const BitArray&) = default;

 private:
  size_t count_ = 0;
  unsigned width_ = 0;
  std::vector<uint64_t> words_;
};

// Little-endian scalar I/O used by every wire format in this project.
void put_u8(std::vector<uint8_t>& out, uint8_t v);
void put_u16(std::vector<uint8_t>& out, uint16_t v);
void put_u32(std::vector<uint8_t>& out, uint32_t v);
uint16_t get_u16(const uint8_t* p);
uint32_t get_u32(const uint8_t* p);

}  // namespace concury
