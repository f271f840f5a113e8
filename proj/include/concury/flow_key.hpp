#pragma once

#include <array>
#include <cstdint>
#include <cstring>

#include "concury/hash.hpp"

namespace concury {

/// Canonical 13-byte state identifier: src address (4B), dst VIP (4B),
/// src port (2B), dst port (2B), protocol (1B), each field little-endian.
/// The key is hashed by the lookup structures but never stored in the
/// data plane.
struct FlowKey {
  std::array<uint8_t, 13> bytes{};

  static FlowKey make(uint32_t src_addr, uint32_t dst_vip, uint16_t src_port,
                      uint16_t dst_port, uint8_t protocol) {
    FlowKey k;
    std::memcpy(k.bytes.data(), &src_addr, 4);
    std::memcpy(k.bytes.data() + 4, &dst_vip, 4);
    std::memcpy(k.bytes.data() + 8, &src_port, 2);
    std::memcpy(k.bytes.data() + 10, &dst_port, 2);
    k.bytes[12] = protocol;
    return k;
  }

  uint32_t dst_vip() const {
    uint32_t v;
    std::memcpy(&v, bytes.data() + 4, 4);
    return v;
  }

  friend bool operator==(const FlowKey&, const FlowKey&) = default;
};

static_assert(sizeof(FlowKey) == 13);

struct FlowKeyHash {
  size_t operator()(const FlowKey& k) const {
    return hash64(k.bytes.data(), k.bytes.size(), 0x5bd1e995u);
  }
};

}  // namespace concury
