#include <algorithm>
#include <cmath>
#include <numeric>

#include "doppelkit/analyses/stats.hpp"
#include "doppelkit/error.hpp"
#include "doppelkit/random.hpp"

namespace doppelkit {

namespace {

void check_pair(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw Error("LengthMismatch", "correlation inputs differ in length");
  if (x.size() < 3) throw Error("InsufficientData", "correlation needs at least 3 observations");
}

}  // namespace

std::vector<double> average_ranks(const std::vector<double>& x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && x[order[j]] == x[order[i]]) ++j;
    // positions i..j-1 hold ranks i+1..j
    const double r = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = r;
    i = j;
  }
  return ranks;
}

double mean(const std::vector<double>& x) {
  if (x.empty()) return 0.0;
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double population_sd(const std::vector<double>& x) {
  if (x.empty()) return 0.0;
  const double m = mean(x);
  double ss = 0;
  for (double v : x) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(x.size()));
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  check_pair(x, y);
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0 || syy == 0) throw UndefinedCorrelation();
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  check_pair(x, y);
  return pearson(average_ranks(x), average_ranks(y));
}

double permutation_pvalue(const std::vector<double>& x, const std::vector<double>& y, std::size_t n_perm,
                          std::uint64_t seed) {
  const double observed = std::abs(spearman(x, y));
  // Ranks are permutation-invariant as a multiset, so shuffle them once
  // computed instead of re-ranking each permutation.
  const std::vector<double> rx = average_ranks(x);
  std::vector<double> ry = average_ranks(y);
  Rng rng(seed);
  std::size_t extreme = 0;
  for (std::size_t p = 0; p < n_perm; ++p) {
    for (std::size_t i = ry.size() - 1; i > 0; --i) {
      const std::size_t j = static_cast<std::size_t>(rng.below(i + 1));
      std::swap(ry[i], ry[j]);
    }
    if (std::abs(pearson(rx, ry)) >= observed - 1e-12) ++extreme;
  }
  return static_cast<double>(1 + extreme) / static_cast<double>(n_perm + 1);
}

}  // namespace doppelkit
