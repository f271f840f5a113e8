#include "concury/harness/workload.hpp"

#include <stdexcept>

namespace concury {

void WorkloadSpec::validate() const {
  if (vip_count < 1 || vip_count > 256) {
    throw std::invalid_argument("workload: vip_count must be 1..256");
  }
  auto [lo, hi] = dip_range();
  if (lo < 1 || lo > hi) {
    throw std::invalid_argument("workload: dip range inverted");
  }
  if (state_count < 1) {
    throw std::invalid_argument("workload: state_count must be positive");
  }
  if (threads < 1) {
    throw std::invalid_argument("workload: threads must be positive");
  }
}

std::pair<unsigned, unsigned> WorkloadSpec::dip_range() const {
  if (dips_min != 0 || dips_max != 0) return {dips_min, dips_max};
  if (dist == Dist::dip_e) {
    unsigned fixed = net == Net::small ? 32 : 128;
    return {fixed, fixed};
  }
  return net == Net::small ? std::pair<unsigned, unsigned>{8, 64}
                           : std::pair<unsigned, unsigned>{32, 256};
}

Network make_network(const WorkloadSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.rng_seed);
  auto [lo, hi] = spec.dip_range();

  Network net;
  net.pools.resize(spec.vip_count);

  // Backends are shared across VIPs: the universe is capped at 2^l_v
  // machines and pools draw contiguous runs from it.
  const uint32_t universe = uint32_t(1) << spec.lv;
  uint32_t next_dip = 0;
  std::vector<uint64_t> dip_counts(spec.vip_count);
  uint64_t total_dips = 0;
  for (unsigned v = 0; v < spec.vip_count; ++v) {
    unsigned count = lo == hi ? lo : lo + unsigned(rng() % (hi - lo + 1));
    dip_counts[v] = count;
    total_dips += count;
    DipPool& pool = net.pools[v];
    for (unsigned j = 0; j < count; ++j) {
      uint32_t id = next_dip++ % universe;
      pool.dips.push_back({DipAddress{0x0a000000u + id, 8080},
                           double(1 + rng() % 8)});
    }
  }

  // DIP-E gives every VIP the same state share; DIP-V scales it with the
  // pool size.
  net.states_per_vip.resize(spec.vip_count);
  uint64_t assigned = 0;
  for (unsigned v = 0; v < spec.vip_count; ++v) {
    uint64_t share =
        spec.dist == WorkloadSpec::Dist::dip_e
            ? spec.state_count / spec.vip_count
            : spec.state_count * dip_counts[v] / total_dips;
    net.states_per_vip[v] = share;
    assigned += share;
  }
  // Distribute the rounding tail one state at a time.
  for (unsigned v = 0; assigned < spec.state_count; ++v, ++assigned) {
    net.states_per_vip[v % spec.vip_count] += 1;
  }
  return net;
}

void shock_weights(DipPool& pool, std::mt19937_64& rng) {
  for (auto& entry : pool.dips) {
    entry.weight = double(1 + rng() % 8);
  }
}

}  // namespace concury
