#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "concury/othello.hpp"

namespace concury {

struct UniformityTest {
  double statistic = 0;
  double critical = 0;
  bool pass = false;
};

/// 95th percentile of the chi-squared distribution via the Wilson-Hilferty
/// cube approximation.
double chi2_critical_95(unsigned df);

/// Pearson chi-squared against the uniform distribution at alpha = 0.05.
UniformityTest chi_squared_uniform(std::span<const uint64_t> counts);

/// Kolmogorov-Smirnov D over binned counts against the uniform CDF, compared
/// with the large-sample 5% critical value 1.358/sqrt(N).
UniformityTest ks_uniform(std::span<const uint64_t> counts);

/// Tallies A[i] xor B[j] over all m*m array pairs: the exact dcode
/// distribution a uniformly hashed unknown key faces.
std::vector<uint64_t> enumerate_dcode_distribution(const Othello& o);

/// max(counts) / mean(counts); the balance measure used on distributions.
double max_over_mean(std::span<const uint64_t> counts);

}  // namespace concury
