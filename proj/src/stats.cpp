#include "concury/harness/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace concury {

double chi2_critical_95(unsigned df) {
  constexpr double z95 = 1.6448536269514722;
  double d = double(df);
  double t = 1.0 - 2.0 / (9.0 * d) + z95 * std::sqrt(2.0 / (9.0 * d));
  return d * t * t * t;
}

namespace {

uint64_t total_of(std::span<const uint64_t> counts) {
  if (counts.size() < 2) {
    throw std::invalid_argument("stats: need at least two buckets");
  }
  uint64_t total = 0;
  for (uint64_t c : counts) total += c;
  if (total == 0) throw std::invalid_argument("stats: empty input");
  return total;
}

}  // namespace

UniformityTest chi_squared_uniform(std::span<const uint64_t> counts) {
  uint64_t total = total_of(counts);
  double expected = double(total) / double(counts.size());
  double stat = 0;
  for (uint64_t c : counts) {
    double d = double(c) - expected;
    stat += d * d / expected;
  }
  UniformityTest r;
  r.statistic = stat;
  r.critical = chi2_critical_95(unsigned(counts.size() - 1));
  r.pass = stat <= r.critical;
  return r;
}

UniformityTest ks_uniform(std::span<const uint64_t> counts) {
  uint64_t total = total_of(counts);
  double n = double(total);
  double k = double(counts.size());
  double d_max = 0;
  uint64_t cum = 0;
  for (size_t i = 0; i < counts.size(); ++i) {
    // The empirical CDF steps at each bin edge; compare both edges against
    // the uniform CDF.
    double lo = std::abs(double(cum) / n - double(i) / k);
    cum += counts[i];
    double hi = std::abs(double(cum) / n - double(i + 1) / k);
    d_max = std::max(d_max, std::max(lo, hi));
  }
  UniformityTest r;
  r.statistic = d_max;
  r.critical = 1.358 / std::sqrt(n);
  r.pass = d_max <= r.critical;
  return r;
}

std::vector<uint64_t> enumerate_dcode_distribution(const Othello& o) {
  std::vector<uint16_t> a(o.m), b(o.m);
  for (uint32_t i = 0; i < o.m; ++i) {
    a[i] = uint16_t(o.a.get(i));
    b[i] = uint16_t(o.b.get(i));
  }
  std::vector<uint64_t> counts(size_t(1) << o.l, 0);
  for (uint32_t i = 0; i < o.m; ++i) {
    for (uint32_t j = 0; j < o.m; ++j) {
      counts[a[i] ^ b[j]] += 1;
    }
  }
  return counts;
}

double max_over_mean(std::span<const uint64_t> counts) {
  uint64_t total = total_of(counts);
  uint64_t max = *std::max_element(counts.begin(), counts.end());
  return double(max) * double(counts.size()) / double(total);
}

}  // namespace concury
