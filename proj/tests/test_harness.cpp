#include <set>
#include <unordered_set>

#include "concury/harness/benchmark.hpp"
#include "concury/harness/lfsr.hpp"
#include "concury/harness/oracle.hpp"
#include "concury/harness/stats.hpp"
#include "doctest.h"

using namespace concury;

TEST_CASE("lfsr streams are deterministic and reject zero seeds") {
  CHECK_THROWS_AS(Lfsr64(0), std::invalid_argument);
  LfsrKeyStream a(42, 0x0a800000), b(42, 0x0a800000);
  for (int i = 0; i < 1000; ++i) CHECK(a.next() == b.next());
  auto keys = lfsr_keys(7, 100, 0x0a800001);
  auto again = lfsr_keys(7, 100, 0x0a800001);
  CHECK(keys == again);
}

TEST_CASE("16-bit lfsr walks its full period without repeating") {
  Lfsr16 lfsr(1);
  std::vector<bool> seen(1 << 16, false);
  uint32_t count = 0;
  uint16_t first = lfsr.next();
  uint16_t value = first;
  do {
    CHECK(!seen[value]);
    seen[value] = true;
    ++count;
    value = lfsr.next();
  } while (value != first);
  CHECK(count == 65535);  // every nonzero state exactly once
  CHECK(!seen[0]);
}

TEST_CASE("64-bit lfsr keys are distinct and spread across dcodes") {
  LfsrKeyStream stream(0xe2211, 0x0a800000);
  std::unordered_set<uint64_t> seen;
  std::vector<uint64_t> dcode_counts(1 << 12, 0);
  const int n = 1 << 20;
  for (int i = 0; i < n; ++i) {
    FlowKey k = stream.next();
    // src address and the two ports carry the 64-bit register; keys stay
    // distinct for the whole period.
    uint64_t reg_lo, reg_hi = 0;
    std::memcpy(&reg_lo, k.bytes.data(), 4);
    std::memcpy(&reg_hi, k.bytes.data() + 8, 4);
    uint64_t reg = reg_lo | reg_hi << 32;
    CHECK(reg != 0);
    if (i < 65536) CHECK(seen.insert(reg).second);
    dcode_counts[hash32(&k, sizeof(k), 0x1234) & 0xfff] += 1;
  }
  CHECK(chi_squared_uniform(dcode_counts).pass);
}

TEST_CASE("chi-squared accepts flat counts and rejects a point mass") {
  std::vector<uint64_t> flat(64, 100);
  auto r = chi_squared_uniform(flat);
  CHECK(r.statistic == 0);
  CHECK(r.pass);

  std::vector<uint64_t> spike(64, 0);
  spike[5] = 6400;
  CHECK(!chi_squared_uniform(spike).pass);

  CHECK_THROWS_AS(chi_squared_uniform(std::vector<uint64_t>{}),
                  std::invalid_argument);
  CHECK_THROWS_AS(chi_squared_uniform(std::vector<uint64_t>(4, 0)),
                  std::invalid_argument);
}

TEST_CASE("wilson-hilferty criticals sit near the exact values") {
  // Exact 95th percentiles: df=10 -> 18.307, df=100 -> 124.342,
  // df=1023 -> 1098.5, df=4095 -> 4244.98.
  CHECK(chi2_critical_95(10) == doctest::Approx(18.307).epsilon(0.01));
  CHECK(chi2_critical_95(100) == doctest::Approx(124.342).epsilon(0.005));
  CHECK(chi2_critical_95(1023) == doctest::Approx(1098.5).epsilon(0.005));
  CHECK(chi2_critical_95(4095) == doctest::Approx(4244.98).epsilon(0.005));
}

TEST_CASE("ks accepts flat counts and rejects a point mass") {
  std::vector<uint64_t> flat(64, 100);
  auto r = ks_uniform(flat);
  CHECK(r.statistic == 0);
  CHECK(r.pass);

  std::vector<uint64_t> spike(64, 0);
  spike[0] = 6400;
  CHECK(!ks_uniform(spike).pass);
  spike[0] = 0;
  spike[63] = 6400;
  CHECK(!ks_uniform(spike).pass);
}

TEST_CASE("dcode enumeration over zero arrays collapses to one bucket") {
  Othello o;
  o.l = 10;
  o.m = 64;
  o.a = BitArray(64, 10);
  o.b = BitArray(64, 10);
  auto counts = enumerate_dcode_distribution(o);
  CHECK(counts[0] == 64 * 64);
  for (size_t d = 1; d < counts.size(); ++d) CHECK(counts[d] == 0);
}

TEST_CASE("dcode enumeration of a random-filled structure is near uniform") {
  // A structure regenerated from an empty map is all random fill.
  OthelloKv<uint64_t> kv(10, 1024, 77);
  auto counts = enumerate_dcode_distribution(kv.structure());
  uint64_t total = 0;
  for (uint64_t c : counts) total += c;
  CHECK(total == 1024ull * 1024);
  double ratio = max_over_mean(counts);
  CAPTURE(ratio);
  CHECK(ratio <= 1.2);
  CHECK(chi_squared_uniform(counts).pass);
}

TEST_CASE("determined pairs are the stored fraction of the enumeration") {
  std::vector<std::pair<uint64_t, uint64_t>> pairs;
  for (uint64_t i = 0; i < 100; ++i) pairs.emplace_back(i * 977 + 1, i & 1);
  OthelloKv<uint64_t> kv(pairs, 1, 256, 3);
  // With 1-bit values, bucket counts split near half; the 100 determined
  // pairs are a 100/m^2 fraction of all pairs.
  auto counts = enumerate_dcode_distribution(kv.structure());
  CHECK(counts[0] + counts[1] == 256ull * 256);
  double determined = 100.0 / double(256ull * 256);
  CHECK(determined == doctest::Approx(0.0015).epsilon(0.02));
}

TEST_CASE("oracle counts pcc violations, false hits and cross-vip hits") {
  ConsistencyOracle oracle;
  oracle.set_pool(0, {1, 2, 3});
  FlowKey k = FlowKey::make(1, 2, 3, 4, 5);
  oracle.observe(0, k, 2, false);
  oracle.observe(0, k, 2, false);
  CHECK(oracle.pcc_violations() == 0);
  oracle.observe(0, k, 3, false);  // moved
  CHECK(oracle.pcc_violations() == 1);

  FlowKey other = FlowKey::make(9, 9, 9, 9, 9);
  oracle.observe(0, other, 2, true);  // table hit for an unseen state
  CHECK(oracle.false_hits() == 1);

  FlowKey outside = FlowKey::make(8, 8, 8, 8, 8);
  oracle.observe(0, outside, 7, false);  // 7 not in vip 0's pool
  CHECK(oracle.cross_vip_hits() == 1);

  oracle.forget(k);
  oracle.observe(0, k, 1, false);  // new lifetime, new dip: no violation
  CHECK(oracle.pcc_violations() == 1);

  oracle.observe(0, other, 2, false);
  oracle.drop_dip(0, 2);
  oracle.observe(0, other, 3, false);  // record ended with its dip
  CHECK(oracle.pcc_violations() == 1);
}

TEST_CASE("workload networks share backends within the dip table") {
  WorkloadSpec spec;
  spec.vip_count = 128;
  spec.net = WorkloadSpec::Net::large;
  spec.dist = WorkloadSpec::Dist::dip_e;
  spec.state_count = 1000;
  Network net = make_network(spec);
  REQUIRE(net.pools.size() == 128);
  std::set<uint32_t> addrs;
  for (const auto& pool : net.pools) {
    CHECK(pool.dips.size() == 128);
    for (const auto& e : pool.dips) addrs.insert(e.dip.addr);
  }
  CHECK(addrs.size() <= 4096);  // 2^lv backends shared across vips

  uint64_t total = 0;
  for (uint64_t s : net.states_per_vip) total += s;
  CHECK(total == 1000);

  WorkloadSpec bad = spec;
  bad.dips_min = 64;
  bad.dips_max = 8;
  CHECK_THROWS_AS(make_network(bad), std::invalid_argument);
}

TEST_CASE("a small static concury run is clean end to end") {
  WorkloadSpec spec;
  spec.vip_count = 8;
  spec.state_count = 4000;
  spec.dist = WorkloadSpec::Dist::dip_v;
  spec.dips_min = 4;
  spec.dips_max = 16;
  spec.repetitions = 1;
  spec.rng_seed = 5;
  RunReport r = run_benchmark(spec, Algorithm::concury);
  CHECK(r.verified_states == 4000);
  CHECK(r.pcc_violations == 0);
  CHECK(r.false_hits == 0);
  CHECK(r.cross_vip_hits == 0);
  CHECK(r.drops == 0);
  CHECK(r.lookup_mpps > 0);
  CHECK(r.dp_accounting_bits > 0);
  CHECK(r.to_json().find("\"schema_version\"") != std::string::npos);
}

TEST_CASE("a short dynamic concury run survives pool churn unharmed") {
  WorkloadSpec spec;
  spec.vip_count = 4;
  spec.state_count = 8000;
  spec.dips_min = 8;
  spec.dips_max = 8;
  spec.arrival_rate = 2000;
  spec.pool_change_period = 0.4;
  spec.duration = 3.0;
  spec.repetitions = 0;
  spec.rng_seed = 11;
  RunReport r = run_benchmark(spec, Algorithm::concury);
  CHECK(r.updates_applied >= 6);
  CHECK(r.pcc_violations == 0);
  CHECK(r.false_hits == 0);
  CHECK(r.cross_vip_hits == 0);
  CHECK(!r.window_mpps.empty());
}

TEST_CASE("a static-hash run shows pcc violations on pool churn") {
  WorkloadSpec spec;
  spec.vip_count = 4;
  spec.state_count = 8000;
  spec.dips_min = 8;
  spec.dips_max = 8;
  spec.pool_change_period = 0.4;
  spec.duration = 1.5;
  spec.repetitions = 0;
  spec.rng_seed = 12;
  RunReport r = run_benchmark(spec, Algorithm::static_hash);
  CHECK(r.pcc_violations > 0);
}
