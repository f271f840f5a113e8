#include "concury/harness/lfsr.hpp"

namespace concury {

std::vector<FlowKey> lfsr_keys(uint64_t seed, size_t count,
                               uint32_t vip_addr) {
  LfsrKeyStream stream(seed, vip_addr);
  std::vector<FlowKey> keys;
  keys.reserve(count);
  for (size_t i = 0; i < count; ++i) keys.push_back(stream.next());
  return keys;
}

}  // namespace concury
