#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "liesig/errors.hpp"
#include "liesig/kernel.hpp"
#include "liesig/parallel.hpp"
#include "liesig/rng.hpp"

namespace liesig {

struct TestConfig {
  double alpha = 0.05;
  int permutations = 2000;
  std::uint64_t seed = 0;
};

struct TestReport {
  double mmd = 0.0;
  double threshold = 0.0;
  double p_value = 1.0;
  bool reject = false;
};

namespace detail {

/// Unbiased MMD^2 where sample X occupies the rows/columns listed in
/// index[0..n) and sample Y the rest of `index`.
inline double mmd_from_indices(const GramMatrix& gram, std::span<const int> index,
                               int n, int m) {
  double xx = 0.0, yy = 0.0, xy = 0.0;
  for (int i = 0; i < n; ++i) {
    const int gi = index[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < n; ++j) xx += gram.at(gi, index[static_cast<std::size_t>(j)]);
    for (int j = n; j < n + m; ++j) xy += gram.at(gi, index[static_cast<std::size_t>(j)]);
  }
  for (int i = n; i < n + m; ++i) {
    const int gi = index[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < n + m; ++j) yy += gram.at(gi, index[static_cast<std::size_t>(j)]);
  }
  return 2.0 * xx / (static_cast<double>(n) * (n - 1)) +
         2.0 * yy / (static_cast<double>(m) * (m - 1)) -
         2.0 * xy / (static_cast<double>(n) * m);
}

/// k-th order statistic with k = ceil((1 - alpha) P), clamped to [1, P]; the
/// ceiling rule keeps the empirical level at or below alpha + 1/P.
inline double quantile_threshold(std::vector<double> null_values, double alpha) {
  const std::size_t count = null_values.size();
  std::sort(null_values.begin(), null_values.end());
  const double raw = std::ceil((1.0 - alpha) * static_cast<double>(count));
  const std::size_t k =
      std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1.0, raw)));
  return null_values[k - 1];
}

}  // namespace detail

/// Unbiased MMD^2 estimate over a pooled Gram matrix whose first n rows are
/// sample X and remaining m rows are sample Y. May be negative.
inline double mmd_unbiased(const GramMatrix& gram, int n, int m) {
  if (n < 2 || m < 2)
    throw DimensionMismatchError("mmd_unbiased requires at least two samples per class");
  if (gram.size != n + m)
    throw DimensionMismatchError("gram size does not equal n + m");
  std::vector<int> identity_index(static_cast<std::size_t>(n + m));
  std::iota(identity_index.begin(), identity_index.end(), 0);
  return detail::mmd_from_indices(gram, identity_index, n, m);
}

/// Permutation two-sample test on a precomputed pooled Gram matrix. Each of
/// the P permutations relabels the pooled indices and re-reads the same Gram
/// entries; no kernel is recomputed. The threshold is the empirical
/// (1 - alpha) quantile of the null values, and the p-value is the fraction
/// of null values at or above the observed statistic.
inline TestReport permutation_test(const GramMatrix& gram, int n, int m,
                                   const TestConfig& cfg) {
  if (cfg.alpha <= 0.0 || cfg.alpha > 1.0)
    throw DimensionMismatchError("test level must lie in (0, 1]");
  if (cfg.permutations < 100)
    throw DimensionMismatchError("permutation test needs at least 100 permutations");
  const double observed = mmd_unbiased(gram, n, m);
  std::vector<double> null_values(static_cast<std::size_t>(cfg.permutations));
  // Permutations draw from independent substreams so the null sample is
  // identical no matter how the loop is scheduled.
  parallel_for(null_values.size(), [&](std::size_t p) {
    Rng rng(Rng::derive(cfg.seed, p));
    std::vector<int> index(static_cast<std::size_t>(n + m));
    std::iota(index.begin(), index.end(), 0);
    shuffle(index, rng);
    null_values[p] = detail::mmd_from_indices(gram, index, n, m);
  });
  TestReport report;
  report.mmd = observed;
  report.threshold = detail::quantile_threshold(null_values, cfg.alpha);
  std::size_t at_least = 0;
  for (const double v : null_values)
    if (v >= observed) ++at_least;
  report.p_value = static_cast<double>(at_least) / static_cast<double>(null_values.size());
  report.reject = observed > report.threshold;
  return report;
}

/// Builds the pooled Gram matrix over X followed by Y and runs the
/// permutation test.
inline TestReport two_sample_test(std::span<const DiscretePath> xs,
                                  std::span<const DiscretePath> ys, int level,
                                  const GramOptions& gram_opts, const TestConfig& cfg) {
  std::vector<DiscretePath> pooled;
  pooled.reserve(xs.size() + ys.size());
  pooled.insert(pooled.end(), xs.begin(), xs.end());
  pooled.insert(pooled.end(), ys.begin(), ys.end());
  const GramMatrix gram = gram_matrix(pooled, level, gram_opts);
  return permutation_test(gram, static_cast<int>(xs.size()),
                          static_cast<int>(ys.size()), cfg);
}

}  // namespace liesig
