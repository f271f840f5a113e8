#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "concury/harness/workload.hpp"

namespace concury {

enum class Algorithm { concury, cuckoo_digest, multilevel_digest, static_hash };

Algorithm algorithm_from_name(const std::string& name);
std::string algorithm_name(Algorithm algo);

/// Everything one benchmark run produces: throughput, violation counters,
/// memory accounting, and the time series used for plots.
struct RunReport {
  static constexpr int kSchemaVersion = 1;

  std::string algorithm;
  uint64_t states = 0;
  unsigned vips = 0;
  unsigned threads = 1;
  uint64_t seed = 0;
  std::string net;
  std::string dist;

  double build_seconds = 0;
  double lookup_mpps = 0;            // mean over repetitions, static phase
  std::vector<double> rep_mpps;      // per repetition
  std::vector<double> window_mpps;   // dynamic-phase time series
  std::vector<double> balance_series;  // max(L)/avg(L) per window, vip 0
  double balance_final = 0;
  double balance_min_final = 0;  // min(L)/avg(L) at the last window

  uint64_t lookups = 0;
  uint64_t verified_states = 0;
  uint64_t pcc_violations = 0;
  uint64_t false_hits = 0;
  uint64_t cross_vip_hits = 0;
  uint64_t drops = 0;
  uint64_t insert_failures = 0;
  uint64_t updates_applied = 0;
  uint64_t states_dropped = 0;
  uint64_t update_race_retries = 0;
  double cp_response_ms_avg = 0;

  double dp_accounting_bits = 0;
  double cp_accounting_bits = 0;
  uint64_t dp_measured_bits = 0;

  std::string to_json() const;
  /// One "window,value" line per entry for the mpps and balance series.
  std::string series_csv() const;
};

/// Builds the chosen LB at workload scale, verifies every stored state and a
/// probe set of unknown keys, measures static lookup throughput, then (when
/// the spec schedules arrivals or pool/weight changes) runs the dynamic
/// phase with its oracle checks.
RunReport run_benchmark(const WorkloadSpec& spec, Algorithm algo);

}  // namespace concury
