#pragma once

#include <cstdint>
#include <vector>

#include "concury/bits.hpp"
#include "concury/hash.hpp"
#include "concury/othello.hpp"

namespace concury {

/// Control-plane to data-plane update for one VIP: replacement lookup arrays
/// plus the VIP's DIP-array row.
///
/// Wire format (little-endian): magic "CNCU" (4B), version u8, vip_index u8,
/// l_d u8, log2(m) u8, seed_a u32, seed_b u32, A bit-packed (m*l_d bits,
/// padded to byte), B likewise, DA row as 2^l_d u16 entries.
struct UpdateMessage {
  uint8_t vip_index = 0;
  unsigned ld = 0;
  uint32_t m = 0;
  HashSeedPair seeds;
  BitArray a, b;                 // m elements of ld bits each
  std::vector<uint16_t> da_row;  // 2^ld DIP indices

  std::vector<uint8_t> encode() const;
  /// Rejects any message whose payload sizes are inconsistent with the
  /// declared l_d and m.
  static UpdateMessage decode(const uint8_t* data, size_t len);

  static UpdateMessage make(uint8_t vip_index, const Othello& structure,
                            std::vector<uint16_t> da_row);

  friend bool operator==(const UpdateMessage&, const UpdateMessage&) = default;
};

}  // namespace concury
