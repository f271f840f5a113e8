#include "concury/harness/benchmark.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "concury/baselines/cuckoo_digest.hpp"
#include "concury/baselines/multilevel_digest.hpp"
#include "concury/baselines/static_hash.hpp"
#include "concury/harness/lfsr.hpp"
#include "concury/harness/oracle.hpp"
#include "json.hpp"

namespace concury {

namespace {

using steady = std::chrono::steady_clock;

double seconds_between(steady::time_point a, steady::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

// Dcode -> local pool position, used by the baselines' stateless path (the
// same weighted partition concury uses, over per-VIP local indices).
std::vector<uint16_t> local_partition(const DipPool& pool, unsigned ld) {
  std::vector<double> weights;
  weights.reserve(pool.dips.size());
  for (const auto& e : pool.dips) weights.push_back(e.weight);
  std::vector<uint32_t> counts = apportion_dcodes(weights, ld);
  std::vector<uint16_t> mapping(size_t(1) << ld);
  uint32_t next = 0;
  for (size_t j = 0; j < counts.size(); ++j) {
    for (uint32_t d = 0; d < counts[j]; ++d) mapping[next + d] = uint16_t(j);
    next += counts[j];
  }
  return mapping;
}

struct Runner {
  const WorkloadSpec& spec;
  Algorithm algo;
  Network net;
  RunReport report;
  ConsistencyOracle oracle;

  std::optional<ControlPlane> cp;
  std::optional<DataPlane> dp;
  std::vector<CuckooDigestTable> cuckoo;
  std::vector<MultilevelDigestTable> multilevel;
  std::vector<StaticHashLb> statich;
  std::vector<std::vector<uint16_t>> partitions;  // baselines, per vip
  std::vector<uint32_t> stateless_seeds;
  std::vector<uint32_t> vip_addrs;

  std::vector<std::vector<FlowKey>> live;
  std::vector<LfsrKeyStream> arrivals;
  uint64_t sink = 0;  // driver-thread lookup sink
  uint64_t initial_updates = 0;
  std::vector<double> cp_response_ms;

  Runner(const WorkloadSpec& s, Algorithm a)
      : spec(s), algo(a), net(make_network(s)) {
    report.algorithm = algorithm_name(a);
    report.states = s.state_count;
    report.vips = s.vip_count;
    report.threads = s.threads;
    report.seed = s.rng_seed;
    report.net = s.net == WorkloadSpec::Net::small ? "small" : "large";
    report.dist = s.dist == WorkloadSpec::Dist::dip_e ? "dip-e" : "dip-v";
    live.resize(s.vip_count);
    for (unsigned v = 0; v < s.vip_count; ++v) {
      vip_addrs.push_back((s.vip_prefix << 8) | v);
      arrivals.emplace_back(s.rng_seed * 2654435761u + v + 1, vip_addrs[v]);
    }
  }

  // One full pipeline lookup on the driver thread. Returns the dip (local
  // index for baselines, global for concury) and whether a table entry
  // matched.
  std::pair<uint16_t, bool> lookup_dip(uint8_t v, const FlowKey& key) {
    switch (algo) {
      case Algorithm::concury: {
        auto got = dp->lookup_packet(vip_addrs[v], key);
        if (!got) return {0xffff, false};
        sink += got->dip_index;
        return {got->dip_index, false};
      }
      case Algorithm::cuckoo_digest: {
        auto got = cuckoo[v].lookup(key);
        if (got) {
          sink += *got;
          return {*got, true};
        }
        return {stateless_dip(v, key), false};
      }
      case Algorithm::multilevel_digest: {
        auto got = multilevel[v].lookup(key);
        if (got) {
          sink += *got;
          return {*got, true};
        }
        return {stateless_dip(v, key), false};
      }
      case Algorithm::static_hash: {
        uint16_t dip = uint16_t(statich[v].lookup(key));
        sink += dip;
        return {dip, false};
      }
    }
    return {0xffff, false};
  }

  uint16_t stateless_dip(uint8_t v, const FlowKey& key) {
    uint32_t dcode =
        hash32(&key, sizeof(key), stateless_seeds[v]) & ((1u << spec.ld) - 1);
    return partitions[v][dcode];
  }

  void set_oracle_pool(uint8_t v) {
    std::vector<uint16_t> dips;
    for (size_t j = 0; j < net.pools[v].dips.size(); ++j) {
      dips.push_back(algo == Algorithm::concury
                         ? cp->dip_index_of(net.pools[v].dips[j].dip)
                         : uint16_t(j));
    }
    oracle.set_pool(v, dips);
  }

  void insert_state(uint8_t v, const FlowKey& key) {
    auto [dip, hit] = lookup_dip(v, key);
    oracle.observe(v, key, dip, hit);
    bool ok = true;
    switch (algo) {
      case Algorithm::concury:
        cp->on_report({HostAgentReport::Kind::arrival, v, key, dip});
        break;
      case Algorithm::cuckoo_digest:
        ok = cuckoo[v].insert(key, dip);
        break;
      case Algorithm::multilevel_digest:
        ok = multilevel[v].insert(key, dip);
        break;
      case Algorithm::static_hash:
        break;  // stateless: nothing stored
    }
    if (!ok) {
      ++report.insert_failures;
      oracle.forget(key);
      return;
    }
    live[v].push_back(key);
  }

  void remove_state(uint8_t v, const FlowKey& key) {
    switch (algo) {
      case Algorithm::concury:
        cp->on_report({HostAgentReport::Kind::termination, v, key, 0});
        break;
      case Algorithm::cuckoo_digest:
        cuckoo[v].erase(key);
        break;
      case Algorithm::multilevel_digest:
        multilevel[v].erase(key);
        break;
      case Algorithm::static_hash:
        break;
    }
    oracle.forget(key);
  }

  void build() {
    auto start = steady::now();
    switch (algo) {
      case Algorithm::concury: {
        cp.emplace(ControlPlane::Config{spec.vip_prefix, spec.vip_count,
                                        spec.ld, spec.lv, spec.rng_seed});
        dp.emplace(
            DataPlane::Config{spec.vip_prefix, spec.vip_count, spec.lv});
        connect_local(*cp, *dp);
        for (unsigned v = 0; v < spec.vip_count; ++v) {
          cp->add_vip(uint8_t(v), net.pools[v]);
        }
        break;
      }
      case Algorithm::cuckoo_digest:
      case Algorithm::multilevel_digest: {
        for (unsigned v = 0; v < spec.vip_count; ++v) {
          size_t hint = size_t(net.states_per_vip[v]) + 64;
          if (algo == Algorithm::cuckoo_digest) {
            cuckoo.emplace_back(hint, 64, spec.rng_seed + v);
          } else {
            multilevel.emplace_back(hint, 64, 4, spec.rng_seed + v);
          }
          partitions.push_back(local_partition(net.pools[v], spec.ld));
          stateless_seeds.push_back(uint32_t(spec.rng_seed * 31 + v));
        }
        break;
      }
      case Algorithm::static_hash: {
        for (unsigned v = 0; v < spec.vip_count; ++v) {
          statich.emplace_back(uint32_t(net.pools[v].dips.size()),
                               uint32_t(spec.rng_seed + v));
        }
        break;
      }
    }
    for (unsigned v = 0; v < spec.vip_count; ++v) set_oracle_pool(uint8_t(v));

    for (unsigned v = 0; v < spec.vip_count; ++v) {
      live[v].reserve(net.states_per_vip[v]);
      for (uint64_t i = 0; i < net.states_per_vip[v]; ++i) {
        insert_state(uint8_t(v), arrivals[v].next());
      }
    }
    if (algo == Algorithm::concury) {
      // The initial construction push: one update per VIP moves the stored
      // states into the data plane.
      for (unsigned v = 0; v < spec.vip_count; ++v) {
        cp->handle_pool_change(uint8_t(v), net.pools[v]);
      }
      initial_updates = cp->updates_emitted();
      report.updates_applied = 0;
    }
    report.build_seconds = seconds_between(start, steady::now());
  }

  void verify() {
    for (unsigned v = 0; v < spec.vip_count; ++v) {
      for (const FlowKey& key : live[v]) {
        auto [dip, hit] = lookup_dip(uint8_t(v), key);
        oracle.observe(uint8_t(v), key, dip, hit);
        ++report.verified_states;
      }
      // Unknown keys (protocol 99 cannot collide with stored states) must
      // still land on a valid dip of this VIP only.
      LfsrKeyStream probes(spec.rng_seed * 40503u + v + 7, vip_addrs[v], 99);
      for (int i = 0; i < 1000; ++i) {
        FlowKey key = probes.next();
        auto [dip, hit] = lookup_dip(uint8_t(v), key);
        oracle.observe(uint8_t(v), key, dip, hit);
        oracle.forget(key);
      }
    }
  }

  // -- static throughput --------------------------------------------------

  // Loops stateful keys in generation order (no temporal locality) until
  // the window elapses; `lookup` must be race-free for concurrent callers.
  template <class LookupFn>
  double timed_window(LookupFn&& lookup, double window_seconds,
                      unsigned thread_id, uint64_t* lookups_done,
                      const std::vector<std::vector<FlowKey>>& traffic,
                      const std::atomic<bool>* stop = nullptr) const {
    std::vector<size_t> cursor(spec.vip_count, 0);
    uint64_t done = 0;
    auto begin = steady::now();
    double elapsed = 0;
    unsigned v = thread_id % spec.vip_count;
    for (;;) {
      for (int batch = 0; batch < 4096; ++batch) {
        v = v + 1 == spec.vip_count ? 0 : v + 1;
        const auto& keys = traffic[v];
        if (keys.empty()) continue;
        size_t& c = cursor[v];
        if (c >= keys.size()) c = 0;
        lookup(uint8_t(v), keys[c]);
        ++c;
        ++done;
      }
      elapsed = seconds_between(begin, steady::now());
      if (elapsed >= window_seconds) break;
      if (stop && stop->load(std::memory_order_relaxed)) break;
    }
    *lookups_done = done;
    return done / elapsed;
  }

  // Per-thread lookup rate over one window; thread-local sink, no shared
  // writes anywhere on the hot path.
  double thread_rate(unsigned thread_id, double window_seconds,
                     uint64_t* done) const {
    uint64_t local_sink = 0;
    double rate = 0;
    switch (algo) {
      case Algorithm::concury:
        rate = timed_window(
            [&](uint8_t v, const FlowKey& key) {
              auto got = dp->lookup_packet(vip_addrs[v], key);
              if (got) local_sink += got->dip_index;
            },
            window_seconds, thread_id, done, live);
        break;
      case Algorithm::cuckoo_digest:
        rate = timed_window(
            [&](uint8_t v, const FlowKey& key) {
              auto got = cuckoo[v].lookup(key);
              local_sink += got ? *got : partitions[v][0];
            },
            window_seconds, thread_id, done, live);
        break;
      case Algorithm::multilevel_digest:
        rate = timed_window(
            [&](uint8_t v, const FlowKey& key) {
              auto got = multilevel[v].lookup(key);
              local_sink += got ? *got : partitions[v][0];
            },
            window_seconds, thread_id, done, live);
        break;
      case Algorithm::static_hash:
        rate = timed_window(
            [&](uint8_t v, const FlowKey& key) {
              local_sink += statich[v].lookup(key);
            },
            window_seconds, thread_id, done, live);
        break;
    }
    // Publish the sink so the lookups cannot be optimized away.
    static std::atomic<uint64_t> global_sink{0};
    global_sink.fetch_add(local_sink, std::memory_order_relaxed);
    return rate;
  }

  void measure_static() {
    for (unsigned rep = 0; rep < spec.repetitions; ++rep) {
      std::vector<double> rates(spec.threads, 0.0);
      std::vector<uint64_t> counts(spec.threads, 0);
      std::vector<std::thread> pool;
      for (unsigned t = 1; t < spec.threads; ++t) {
        pool.emplace_back(
            [&, t] { rates[t] = thread_rate(t, 0.4, &counts[t]); });
      }
      rates[0] = thread_rate(0, 0.4, &counts[0]);
      for (auto& th : pool) th.join();
      double total = 0;
      for (unsigned t = 0; t < spec.threads; ++t) {
        total += rates[t];
        report.lookups += counts[t];
      }
      report.rep_mpps.push_back(total / 1e6);
    }
    double sum = 0;
    for (double r : report.rep_mpps) sum += r;
    report.lookup_mpps = sum / double(report.rep_mpps.size());
  }

  // -- dynamic phase ------------------------------------------------------

  struct PoolChangePlan {
    unsigned vip = 0;
    bool removed = false;
    DipPool::Entry stash;
  };

  void validate_vip(uint8_t v) {
    for (const FlowKey& key : live[v]) {
      if (oracle.recorded(key) == nullptr) continue;  // dropped with its dip
      auto [dip, hit] = lookup_dip(v, key);
      oracle.observe(v, key, dip, hit);
    }
  }

  void apply_pool_change(uint8_t v, const DipPool& pool) {
    auto begin = steady::now();
    switch (algo) {
      case Algorithm::concury:
        cp->handle_pool_change(v, pool);
        break;
      case Algorithm::cuckoo_digest:
      case Algorithm::multilevel_digest:
        partitions[v] = local_partition(pool, spec.ld);
        break;
      case Algorithm::static_hash:
        statich[v].set_pool_size(uint32_t(pool.dips.size()));
        break;
    }
    cp_response_ms.push_back(seconds_between(begin, steady::now()) * 1e3);
    ++report.updates_applied;
  }

  // Removes or restores one dip on a rotating vip, then updates, validates
  // and re-registers the oracle pool.
  void pool_change_event(PoolChangePlan& plan, std::mt19937_64& ev_rng) {
    uint8_t v = uint8_t(plan.vip);
    DipPool& pool = net.pools[v];
    if (!plan.removed) {
      size_t victim = ev_rng() % pool.dips.size();
      plan.stash = pool.dips[victim];
      pool.dips.erase(pool.dips.begin() + ptrdiff_t(victim));
      switch (algo) {
        case Algorithm::concury:
          oracle.drop_dip(v, cp->dip_index_of(plan.stash.dip));
          break;
        case Algorithm::cuckoo_digest:
        case Algorithm::multilevel_digest:
          drop_baseline_states(v, uint16_t(victim));
          break;
        case Algorithm::static_hash:
          // The shrink remaps the whole space; states recorded on the
          // vanished last index restart, the rest go stale on their own.
          oracle.drop_dip(v, uint16_t(pool.dips.size()));
          break;
      }
      plan.removed = true;
    } else {
      pool.dips.push_back(plan.stash);
      plan.removed = false;
      plan.vip = (plan.vip + 1) % spec.vip_count;
    }
    apply_pool_change(v, pool);
    set_oracle_pool(v);
    validate_vip(v);
  }

  // Baseline pools are keyed by local position; removing position `victim`
  // shifts everything above it. Erase the removed dip's states from the
  // table and rewrite the records of shifted survivors.
  void drop_baseline_states(uint8_t v, uint16_t victim) {
    std::vector<FlowKey> keep;
    keep.reserve(live[v].size());
    for (const FlowKey& key : live[v]) {
      const auto* rec = oracle.recorded(key);
      if (rec == nullptr) continue;
      if (rec->dip_index == victim) {
        remove_state(v, key);
        ++report.states_dropped;
        continue;
      }
      if (rec->dip_index > victim) {
        uint16_t shifted = uint16_t(rec->dip_index - 1);
        if (algo == Algorithm::cuckoo_digest) {
          cuckoo[v].insert(key, shifted);  // digest match: rewrites in place
        } else {
          multilevel[v].insert(key, shifted);
        }
        oracle.forget(key);
        oracle.observe(v, key, shifted, false);
      }
      keep.push_back(key);
    }
    live[v] = std::move(keep);
  }

  void record_balance(uint8_t v) {
    auto counts = oracle.states_per_dip(v);
    const DipPool& pool = net.pools[v];
    double total = 0, max = 0, min = 1e300;
    unsigned n = 0;
    for (size_t j = 0; j < pool.dips.size(); ++j) {
      const auto& e = pool.dips[j];
      if (e.weight <= 0) continue;
      uint16_t dip = algo == Algorithm::concury ? cp->dip_index_of(e.dip)
                                                : uint16_t(j);
      auto it = counts.find(dip);
      double load = (it == counts.end() ? 0.0 : double(it->second)) / e.weight;
      total += load;
      max = std::max(max, load);
      min = std::min(min, load);
      ++n;
    }
    if (n == 0 || total == 0) return;
    double avg = total / n;
    report.balance_series.push_back(max / avg);
    report.balance_final = max / avg;
    report.balance_min_final = min / avg;
  }

  void terminate_random(uint8_t v, std::mt19937_64& victim_rng) {
    auto& keys = live[v];
    for (int attempt = 0; attempt < 16 && !keys.empty(); ++attempt) {
      size_t i = victim_rng() % keys.size();
      FlowKey key = keys[i];
      keys[i] = keys.back();
      keys.pop_back();
      if (oracle.recorded(key) != nullptr) {
        remove_state(v, key);
        return;
      }
    }
  }

  void run_dynamic() {
    const double window = 0.5;
    std::mt19937_64 ev_rng(spec.rng_seed ^ 0xd1ce);
    std::mt19937_64 victim_rng(spec.rng_seed ^ 0xfade);
    PoolChangePlan plan;

    // Concury's packet lookups run on their own context against a frozen
    // traffic snapshot while the control plane works here; table baselines
    // must write their tables from the lookup context, so their lookups,
    // arrivals and drops all run inline on this thread.
    const bool threaded = algo == Algorithm::concury;
    std::atomic<bool> stop{false};
    std::vector<double> reader_windows;
    uint64_t reader_lookups = 0;
    std::thread looker;
    std::vector<std::vector<FlowKey>> frozen;
    if (threaded) {
      frozen = live;
      looker = std::thread([&] {
        while (!stop.load(std::memory_order_relaxed)) {
          uint64_t done = 0;
          double rate = timed_window(
              [&, local = uint64_t(0)](uint8_t v, const FlowKey& key) mutable {
                auto got = dp->lookup_packet(vip_addrs[v], key);
                if (got) local += got->dip_index;
              },
              window, 0, &done, frozen, &stop);
          reader_windows.push_back(rate / 1e6);
          reader_lookups += done;
        }
      });
    }

    auto start = steady::now();
    double next_pool =
        spec.pool_change_period > 0 ? spec.pool_change_period : 1e300;
    double next_weight =
        spec.weight_change_period > 0 ? spec.weight_change_period : 1e300;
    double next_balance = window;
    uint64_t arrivals_done = 0;

    // Inline measurement state (non-threaded algorithms); harness-only work
    // (oracle validation, balance bookkeeping) is excluded from the window
    // clock for every algorithm alike.
    std::vector<size_t> cursor(spec.vip_count, 0);
    unsigned v_cursor = 0;
    uint64_t window_lookups = 0;
    double excluded = 0;
    auto window_begin = steady::now();

    while (true) {
      double elapsed = seconds_between(start, steady::now());
      if (elapsed >= spec.duration) break;

      if (!threaded) {
        for (int batch = 0; batch < 8192; ++batch) {
          v_cursor = v_cursor + 1 == spec.vip_count ? 0 : v_cursor + 1;
          const auto& keys = live[v_cursor];
          if (keys.empty()) continue;
          size_t& c = cursor[v_cursor];
          if (c >= keys.size()) c = 0;
          lookup_dip(uint8_t(v_cursor), keys[c]);
          ++c;
          ++window_lookups;
        }
        double w = seconds_between(window_begin, steady::now()) - excluded;
        if (w >= window) {
          report.window_mpps.push_back(double(window_lookups) / w / 1e6);
          report.lookups += window_lookups;
          window_lookups = 0;
          excluded = 0;
          window_begin = steady::now();
        }
      } else {
        std::this_thread::sleep_for(std::chrono::milliseconds(2));
      }

      elapsed = seconds_between(start, steady::now());

      // Arrivals, paired with terminations to hold the state count steady.
      if (spec.arrival_rate > 0) {
        uint64_t due = uint64_t(elapsed * spec.arrival_rate);
        uint64_t batch = std::min<uint64_t>(due - arrivals_done, 8192);
        for (uint64_t i = 0; i < batch; ++i) {
          uint8_t v = uint8_t(arrivals_done % spec.vip_count);
          insert_state(v, arrivals[v].next());
          terminate_random(v, victim_rng);
          ++arrivals_done;
        }
      }

      if (elapsed >= next_pool) {
        next_pool += spec.pool_change_period;
        auto t0 = steady::now();
        pool_change_event(plan, ev_rng);
        excluded += seconds_between(t0, steady::now());
      }
      if (elapsed >= next_weight) {
        next_weight += spec.weight_change_period;
        shock_weights(net.pools[0], ev_rng);
        apply_pool_change(0, net.pools[0]);
        auto t0 = steady::now();
        validate_vip(0);
        excluded += seconds_between(t0, steady::now());
      }
      if (elapsed >= next_balance) {
        next_balance += window;
        auto t0 = steady::now();
        record_balance(0);
        excluded += seconds_between(t0, steady::now());
      }
    }

    if (threaded) {
      stop.store(true);
      looker.join();
      report.window_mpps = std::move(reader_windows);
      report.lookups += reader_lookups;
    }
  }

  void finalize() {
    switch (algo) {
      case Algorithm::concury:
        report.dp_accounting_bits = DataPlane::memory_bits(
            oracle.states(), spec.ld, spec.vip_count, spec.lv);
        report.cp_accounting_bits = cp->memory_bits();
        report.dp_measured_bits = dp->measured_payload_bits();
        report.drops = dp->drop_count();
        report.update_race_retries = dp->contended_reads();
        report.states_dropped = cp->states_dropped();
        break;
      case Algorithm::cuckoo_digest: {
        report.dp_accounting_bits =
            CuckooDigestTable::memory_bits(oracle.states(), spec.lv) +
            double(uint64_t(1) << spec.ld) * spec.lv * spec.vip_count +
            48.0 * double(uint64_t(1) << spec.lv);
        uint64_t measured = 0;
        for (const auto& t : cuckoo) measured += t.measured_payload_bits();
        report.dp_measured_bits = measured;
        break;
      }
      case Algorithm::multilevel_digest: {
        uint64_t measured = 0;
        for (const auto& t : multilevel) {
          measured += t.measured_payload_bits();
        }
        report.dp_measured_bits = measured;
        report.dp_accounting_bits = double(measured);
        break;
      }
      case Algorithm::static_hash:
        report.dp_accounting_bits = 48.0 * double(uint64_t(1) << spec.lv);
        report.dp_measured_bits = uint64_t(report.dp_accounting_bits);
        break;
    }
    report.pcc_violations = oracle.pcc_violations();
    report.false_hits = oracle.false_hits();
    report.cross_vip_hits = oracle.cross_vip_hits();
    if (!cp_response_ms.empty()) {
      double sum = 0;
      for (double ms : cp_response_ms) sum += ms;
      report.cp_response_ms_avg = sum / double(cp_response_ms.size());
    }
  }
};

}  // namespace

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "concury") return Algorithm::concury;
  if (name == "cuckoo_digest") return Algorithm::cuckoo_digest;
  if (name == "multilevel_digest") return Algorithm::multilevel_digest;
  if (name == "static_hash") return Algorithm::static_hash;
  throw std::invalid_argument("unknown algorithm: " + name);
}

std::string algorithm_name(Algorithm algo) {
  switch (algo) {
    case Algorithm::concury: return "concury";
    case Algorithm::cuckoo_digest: return "cuckoo_digest";
    case Algorithm::multilevel_digest: return "multilevel_digest";
    case Algorithm::static_hash: return "static_hash";
  }
  return "?";
}

RunReport run_benchmark(const WorkloadSpec& spec, Algorithm algo) {
  Runner runner(spec, algo);
  runner.build();
  runner.verify();
  if (spec.repetitions > 0) runner.measure_static();
  if (spec.arrival_rate > 0 || spec.pool_change_period > 0 ||
      spec.weight_change_period > 0) {
    runner.run_dynamic();
  }
  runner.finalize();
  return runner.report;
}

std::string RunReport::to_json() const {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["algorithm"] = algorithm;
  j["workload"] = {{"states", states}, {"vips", vips},
                   {"threads", threads}, {"seed", seed},
                   {"net", net},         {"dist", dist}};
  j["build_seconds"] = build_seconds;
  j["lookup_mpps"] = lookup_mpps;
  j["rep_mpps"] = rep_mpps;
  j["window_mpps"] = window_mpps;
  j["balance_series"] = balance_series;
  j["balance_final"] = balance_final;
  j["balance_min_final"] = balance_min_final;
  j["lookups"] = lookups;
  j["verified_states"] = verified_states;
  j["counters"] = {{"pcc_violations", pcc_violations},
                   {"false_hits", false_hits},
                   {"cross_vip_hits", cross_vip_hits},
                   {"drops", drops},
                   {"insert_failures", insert_failures},
                   {"updates_applied", updates_applied},
                   {"states_dropped", states_dropped},
                   {"update_race_retries", update_race_retries}};
  j["cp_response_ms_avg"] = cp_response_ms_avg;
  j["memory"] = {{"dp_accounting_bits", dp_accounting_bits},
                 {"cp_accounting_bits", cp_accounting_bits},
                 {"dp_measured_bits", dp_measured_bits}};
  return j.dump(2);
}

std::string RunReport::series_csv() const {
  std::ostringstream out;
  out << "window,mpps,balance\n";
  size_t n = std::max(window_mpps.size(), balance_series.size());
  for (size_t i = 0; i < n; ++i) {
    out << i << ',';
    if (i < window_mpps.size()) out << window_mpps[i];
    out << ',';
    if (i < balance_series.size()) out << balance_series[i];
    out << '\n';
  }
  return out.str();
}

}  // namespace concury
