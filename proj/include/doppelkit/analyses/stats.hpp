#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace doppelkit {

// 1-based ranks; tied values share the mean of the ranks they span.
std::vector<double> average_ranks(const std::vector<double>& x);

// Both require equal lengths of at least 3 and throw UndefinedCorrelation if
// either input is constant.
double pearson(const std::vector<double>& x, const std::vector<double>& y);
double spearman(const std::vector<double>& x, const std::vector<double>& y);

// Two-sided permutation test for Spearman's rho:
// (1 + #{|rho_perm| >= |rho_obs|}) / (n_perm + 1), shuffling y.
double permutation_pvalue(const std::vector<double>& x, const std::vector<double>& y, std::size_t n_perm,
                          std::uint64_t seed);

double mean(const std::vector<double>& x);
double population_sd(const std::vector<double>& x);

}  // namespace doppelkit
