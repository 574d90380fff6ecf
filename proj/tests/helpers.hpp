#pragma once

#include <algorithm>
#include <vector>

#include "liesig/path.hpp"
#include "liesig/rng.hpp"
#include "liesig/tensor.hpp"

namespace test_helpers {

inline double max_abs_diff(const liesig::TruncatedTensor& a,
                           const liesig::TruncatedTensor& b) {
  double worst = 0.0;
  for (int m = 0; m <= a.level(); ++m) {
    const auto& x = a.at_level(m);
    const auto& y = b.at_level(m);
    for (std::size_t i = 0; i < x.size(); ++i)
      worst = std::max(worst, std::fabs(x[i] - y[i]));
  }
  return worst;
}

inline double max_abs(const liesig::TruncatedTensor& t) {
  double worst = 0.0;
  for (int m = 0; m <= t.level(); ++m)
    for (const double x : t.at_level(m)) worst = std::max(worst, std::fabs(x));
  return worst;
}

inline liesig::TruncatedTensor random_tensor(liesig::Rng& rng, int dim, int level) {
  liesig::TruncatedTensor t(dim, level);
  for (int m = 0; m <= level; ++m)
    for (double& x : t.at_level(m)) x = rng.uniform(-1.0, 1.0);
  return t;
}

inline liesig::DiscretePath random_so3_path(liesig::Rng& rng, int steps,
                                            double step_scale = 0.2) {
  liesig::DerivativePath deriv;
  deriv.dim = 3;
  for (int i = 0; i < steps; ++i)
    deriv.values.push_back({rng.uniform(-step_scale, step_scale),
                            rng.uniform(-step_scale, step_scale),
                            rng.uniform(-step_scale, step_scale)});
  const liesig::GroupSpec spec = liesig::GroupSpec::so3();
  const liesig::Mat3 start = liesig::sample_uniform_so3(rng);
  return liesig::integrate(
      spec, deriv,
      liesig::GroupPoint{std::vector<double>(start.begin(), start.end())});
}

inline liesig::DiscretePath random_euclidean_path(liesig::Rng& rng, int dim, int steps,
                                                  double step_scale = 0.3) {
  liesig::DiscretePath path;
  path.spec = liesig::GroupSpec::euclidean(dim);
  liesig::AlgebraVector point(static_cast<std::size_t>(dim));
  for (double& x : point) x = rng.uniform(-1.0, 1.0);
  path.points.push_back(liesig::GroupPoint{point});
  for (int i = 0; i < steps; ++i) {
    for (double& x : point) x += rng.uniform(-step_scale, step_scale);
    path.points.push_back(liesig::GroupPoint{point});
  }
  return path;
}

inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t value = 1;
  for (int i = 1; i <= k; ++i)
    value = value * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return value;
}

}  // namespace test_helpers
