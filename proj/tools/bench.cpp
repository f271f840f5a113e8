// Benchmark and statistics CLI for the load-balancer engine.
//
//   bench run        --algo concury --net small --dist dip-e --states 65536
//   bench uniformity --ld 12 --trials 100
//   bench enumerate  --m 1024 --l 10
//   bench stats      --test chi2 --input counts.csv
//
// `run` reports JSON (plus optional CSV time series); the statistics
// subcommands print one summary line each.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "concury/harness/benchmark.hpp"
#include "concury/harness/lfsr.hpp"
#include "concury/harness/stats.hpp"
#include "concury/othello_map.hpp"

using namespace concury;

namespace {

int cmd_run(const std::string& algo_name, WorkloadSpec spec,
            const std::string& net_name, const std::string& dist_name,
            const std::string& out_path, const std::string& csv_path) {
  spec.net = net_name == "large" ? WorkloadSpec::Net::large
                                 : WorkloadSpec::Net::small;
  spec.dist = dist_name == "dip-v" ? WorkloadSpec::Dist::dip_v
                                   : WorkloadSpec::Dist::dip_e;
  RunReport report = run_benchmark(spec, algorithm_from_name(algo_name));
  std::string json = report.to_json();
  if (out_path.empty()) {
    std::cout << json << "\n";
  } else {
    std::ofstream(out_path) << json << "\n";
    std::cout << "report written to " << out_path << "\n";
  }
  if (!csv_path.empty()) {
    std::ofstream(csv_path) << report.series_csv();
    std::cout << "series written to " << csv_path << "\n";
  }
  std::cout << report.algorithm << ": " << report.lookup_mpps
            << " Mpps, pcc_violations=" << report.pcc_violations
            << ", false_hits=" << report.false_hits
            << ", cross_vip=" << report.cross_vip_hits << "\n";
  return 0;
}

int cmd_uniformity(unsigned ld, unsigned trials, uint64_t seed,
                   uint64_t states, uint64_t samples) {
  unsigned chi2_failures = 0;
  unsigned ks_failures = 0;
  for (unsigned trial = 0; trial < trials; ++trial) {
    uint64_t trial_seed = seed + trial;
    OthelloMap map(trial_seed, 1024);
    LfsrKeyStream stored(trial_seed * 2654435761u + 1, 0x0a800000);
    std::mt19937_64 rng(trial_seed);
    for (uint64_t i = 0; i < states; ++i) {
      map.insert(stored.next(), 0, uint16_t(rng() & ((1u << ld) - 1)));
    }
    Othello dp = map.generate_dataplane(ld);
    LfsrKeyStream fresh(trial_seed * 40503u + 9, 0x0a800000, 99);
    std::vector<uint64_t> counts(size_t(1) << ld, 0);
    for (uint64_t i = 0; i < samples; ++i) {
      FlowKey k = fresh.next();
      counts[dp.lookup(&k, sizeof(k))] += 1;
    }
    if (!chi_squared_uniform(counts).pass) ++chi2_failures;
    if (!ks_uniform(counts).pass) ++ks_failures;
  }
  std::cout << "trials=" << trials << " states=" << states
            << " samples=" << samples << " ld=" << ld
            << " chi2_failures=" << chi2_failures
            << " ks_failures=" << ks_failures << "\n";
  return 0;
}

int cmd_enumerate(uint32_t m, unsigned l, uint64_t seed) {
  OthelloKv<FlowKey> kv(l, m, seed);
  auto counts = enumerate_dcode_distribution(kv.structure());
  auto chi2 = chi_squared_uniform(counts);
  std::cout << "m=" << m << " l=" << l
            << " max_over_mean=" << max_over_mean(counts)
            << " chi2=" << chi2.statistic << " critical=" << chi2.critical
            << " pass=" << (chi2.pass ? "yes" : "no") << "\n";
  return 0;
}

std::vector<uint64_t> read_counts(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("input", "cannot open " + path);
  std::vector<uint64_t> counts;
  std::string token;
  while (std::getline(in, token)) {
    std::istringstream line(token);
    std::string cell;
    while (std::getline(line, cell, ',')) {
      if (!cell.empty()) counts.push_back(std::stoull(cell));
    }
  }
  return counts;
}

int cmd_stats(const std::string& test, const std::string& input) {
  auto counts = read_counts(input);
  UniformityTest r = test == "ks" ? ks_uniform(counts)
                                  : chi_squared_uniform(counts);
  std::cout << test << " statistic=" << r.statistic
            << " critical=" << r.critical
            << " pass=" << (r.pass ? "yes" : "no") << "\n";
  return r.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"load balancer benchmark harness"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "build an LB and measure it");
  std::string algo = "concury", net = "small", dist = "dip-e";
  std::string out_path, csv_path;
  WorkloadSpec spec;
  run->add_option("--algo", algo, "concury|cuckoo_digest|multilevel_digest|static_hash");
  run->add_option("--net", net, "small|large")
      ->check(CLI::IsMember({"small", "large"}));
  run->add_option("--dist", dist, "dip-e|dip-v")
      ->check(CLI::IsMember({"dip-e", "dip-v"}));
  run->add_option("--states", spec.state_count, "concurrent states");
  run->add_option("--vips,-M", spec.vip_count, "VIP count (<=256)");
  run->add_option("--arrival-rate", spec.arrival_rate, "new states/s");
  run->add_option("--pool-change-period", spec.pool_change_period,
                  "seconds between DIP pool changes");
  run->add_option("--weight-change-period", spec.weight_change_period,
                  "seconds between weight shocks");
  run->add_option("--threads,-T", spec.threads, "lookup contexts");
  run->add_option("--seed", spec.rng_seed, "rng seed");
  run->add_option("--duration", spec.duration, "dynamic-phase seconds");
  run->add_option("--reps", spec.repetitions, "static measurement windows");
  run->add_option("--dips-min", spec.dips_min, "override per-VIP DIP min");
  run->add_option("--dips-max", spec.dips_max, "override per-VIP DIP max");
  run->add_option("--out", out_path, "report JSON path");
  run->add_option("--csv", csv_path, "time-series CSV path");

  // uniformity
  auto* uni = app.add_subcommand(
      "uniformity", "dcode uniformity failure rates over seeded trials");
  unsigned ld = 12, trials = 100;
  uint64_t useed = 1, ustates = 6000, usamples = 65536;
  uni->add_option("--ld", ld, "dcode width");
  uni->add_option("--trials", trials, "seeded trials");
  uni->add_option("--seed", useed, "base seed");
  uni->add_option("--states", ustates, "stored states per trial");
  uni->add_option("--samples", usamples, "fresh keys per trial");

  // enumerate
  auto* enu = app.add_subcommand(
      "enumerate", "exact dcode distribution over all array pairs");
  uint32_t em = 1024;
  unsigned el = 10;
  uint64_t eseed = 1;
  enu->add_option("--m", em, "array size (power of two, <= 4096)")
      ->check(CLI::Range(4u, 4096u));
  enu->add_option("--l", el, "value width")->check(CLI::Range(1u, 16u));
  enu->add_option("--seed", eseed, "rng seed");

  // stats
  auto* st = app.add_subcommand("stats", "uniformity tests on CSV counts");
  std::string stest = "chi2", sinput;
  st->add_option("--test", stest, "chi2|ks")
      ->check(CLI::IsMember({"chi2", "ks"}));
  st->add_option("--input", sinput, "counts file (csv)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(algo, spec, net, dist, out_path, csv_path);
    if (*uni) return cmd_uniformity(ld, trials, useed, ustates, usamples);
    if (*enu) return cmd_enumerate(em, el, eseed);
    if (*st) return cmd_stats(stest, sinput);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
