#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "concury/flow_key.hpp"

namespace concury {

/// Maximal-period Galois LFSR. The register never reaches zero, so a
/// nonzero seed cycles through all 2^width - 1 states.
template <class UInt, UInt kTaps>
class GaloisLfsr {
 public:
  explicit GaloisLfsr(UInt seed) : state_(seed) {
    if (seed == 0) throw std::invalid_argument("lfsr: zero seed");
  }

  UInt next() {
    UInt lsb = state_ & 1;
    state_ >>= 1;
    state_ ^= (UInt(0) - lsb) & kTaps;
    return state_;
  }

  UInt state() const { return state_; }

 private:
  UInt state_;
};

// Taps for maximal periods: x^64+x^63+x^61+x^60+1 and x^16+x^15+x^13+x^4+1.
using Lfsr64 = GaloisLfsr<uint64_t, 0xD800000000000000ull>;
using Lfsr16 = GaloisLfsr<uint16_t, 0xB400>;

/// Uniformly spread state keys with zero temporal locality, generated far
/// faster than they can be looked up. One register step fills the source
/// address and ports; the destination VIP is the caller's.
class LfsrKeyStream {
 public:
  explicit LfsrKeyStream(uint64_t seed, uint32_t vip_addr = 0,
                         uint8_t protocol = 6)
      : lfsr_(seed), vip_addr_(vip_addr), protocol_(protocol) {}

  FlowKey next() {
    uint64_t s = lfsr_.next();
    return FlowKey::make(uint32_t(s), vip_addr_, uint16_t(s >> 32),
                         uint16_t(s >> 48), protocol_);
  }

  FlowKey next_for(uint32_t vip_addr) {
    uint64_t s = lfsr_.next();
    return FlowKey::make(uint32_t(s), vip_addr, uint16_t(s >> 32),
                         uint16_t(s >> 48), protocol_);
  }

 private:
  Lfsr64 lfsr_;
  uint32_t vip_addr_;
  uint8_t protocol_;
};

/// The spec'd batch form: `count` keys for one destination address.
std::vector<FlowKey> lfsr_keys(uint64_t seed, size_t count,
                               uint32_t vip_addr = 0);

}  // namespace concury
