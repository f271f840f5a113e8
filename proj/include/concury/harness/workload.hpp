#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "concury/controlplane.hpp"

namespace concury {

/// Synthetic network + traffic shape: equal (DIP-E) or varied (DIP-V) DIP
/// counts per VIP, Small (edge) or Large (cloud) pool sizes.
struct WorkloadSpec {
  enum class Net { small, large };
  enum class Dist { dip_e, dip_v };

  unsigned vip_count = 128;  // 128 or 256
  Net net = Net::small;
  Dist dist = Dist::dip_e;
  uint64_t state_count = 65536;
  double arrival_rate = 0;         // new states per second, 0 = static
  double pool_change_period = 0;   // seconds, 0 = never
  double weight_change_period = 0; // seconds, 0 = never
  unsigned threads = 1;
  uint64_t rng_seed = 1;
  double duration = 20.0;          // dynamic-phase seconds
  unsigned repetitions = 3;        // static measurement repetitions
  unsigned ld = 12;
  unsigned lv = 12;
  uint32_t vip_prefix = 0x0a8000;

  // DIP-count range; zeros pick the defaults for net/dist.
  unsigned dips_min = 0;
  unsigned dips_max = 0;

  void validate() const;
  /// Effective per-VIP DIP count range after defaults.
  std::pair<unsigned, unsigned> dip_range() const;
};

/// The generated network: per-VIP pools over a shared DIP universe capped at
/// 2^l_v backends, plus the per-VIP share of the state count.
struct Network {
  std::vector<DipPool> pools;            // one per VIP
  std::vector<uint64_t> states_per_vip;  // proportional to pool size (DIP-V)
};

Network make_network(const WorkloadSpec& spec);

/// Re-rolls every weight in the pool (a weight shock; membership unchanged).
void shock_weights(DipPool& pool, std::mt19937_64& rng);

}  // namespace concury
