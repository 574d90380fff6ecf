#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "liesig/errors.hpp"
#include "liesig/group.hpp"

namespace liesig {

/// Sampled group-valued time series: T+1 points, optional strictly increasing
/// timestamps (default 0..T). Signature computations ignore timestamps except
/// for the time transformation.
struct DiscretePath {
  GroupSpec spec;
  std::vector<GroupPoint> points;
  std::vector<double> timestamps;  // empty = default integer times

  int num_steps() const { return static_cast<int>(points.size()) - 1; }

  double timestamp(int i) const {
    return timestamps.empty() ? static_cast<double>(i)
                              : timestamps[static_cast<std::size_t>(i)];
  }
};

/// Lie-algebra derivative sequence of a path, one basis-coordinate vector per
/// step.
struct DerivativePath {
  int dim = 0;
  std::vector<AlgebraVector> values;

  int num_steps() const { return static_cast<int>(values.size()); }
};

namespace detail {
inline void require_path(const DiscretePath& path) {
  if (path.points.size() < 2)
    throw DimensionMismatchError("path needs at least two points");
  if (!path.timestamps.empty()) {
    if (path.timestamps.size() != path.points.size())
      throw DimensionMismatchError("timestamps length must match points");
    for (std::size_t i = 1; i < path.timestamps.size(); ++i)
      if (!(path.timestamps[i - 1] < path.timestamps[i]))
        throw DimensionMismatchError("timestamps must be strictly increasing");
  }
}

inline double vec_norm(const AlgebraVector& v) {
  double acc = 0.0;
  for (const double x : v) acc += x * x;
  return std::sqrt(acc);
}
}  // namespace detail

/// Discrete derivative: values[i] = log(p_i^{-1} p_{i+1}) in basis
/// coordinates. Antipodal SO(3) steps are reported with their step index.
inline DerivativePath discrete_derivative(const DiscretePath& path,
                                          double antipodal_eps = kAntipodalEps) {
  detail::require_path(path);
  DerivativePath out;
  out.dim = path.spec.algebra_dim();
  out.values.reserve(path.points.size() - 1);
  for (std::size_t i = 0; i + 1 < path.points.size(); ++i) {
    const GroupPoint step =
        multiply(path.spec, inverse(path.spec, path.points[i]), path.points[i + 1]);
    out.values.push_back(log_map(path.spec, step, antipodal_eps, static_cast<int>(i)));
  }
  return out;
}

/// Forward solve of p_{i+1} = p_i exp(v_i) from the given initial point.
inline DiscretePath integrate(const GroupSpec& spec, const DerivativePath& deriv,
                              const GroupPoint& initial) {
  if (deriv.dim != spec.algebra_dim())
    throw DimensionMismatchError("integrate: derivative dim does not match spec");
  DiscretePath out;
  out.spec = spec;
  out.points.reserve(deriv.values.size() + 1);
  out.points.push_back(initial);
  for (const auto& v : deriv.values)
    out.points.push_back(multiply(spec, out.points.back(), exp_map(spec, v)));
  return out;
}

/// Lie-algebra scaling: scales the derivative sequence by lambda and
/// reintegrates from the unchanged starting point.
inline DiscretePath scale_path(const DiscretePath& path, double lambda) {
  DerivativePath deriv = discrete_derivative(path);
  for (auto& v : deriv.values)
    for (double& x : v) x *= lambda;
  DiscretePath out = integrate(path.spec, deriv, path.points.front());
  out.timestamps = path.timestamps;
  return out;
}

/// Pointwise left translation by g; leaves the derivative (and signature)
/// unchanged.
inline DiscretePath left_translate(const DiscretePath& path, const GroupPoint& g) {
  DiscretePath out = path;
  for (auto& p : out.points) p = multiply(path.spec, g, p);
  return out;
}

/// Euclidean representation: cumulative sums of the derivative from the
/// origin. Signature-preserving by construction.
inline DiscretePath to_euclidean(const DiscretePath& path) {
  const DerivativePath deriv = discrete_derivative(path);
  DiscretePath out;
  out.spec = GroupSpec::euclidean(deriv.dim);
  out.timestamps = path.timestamps;
  out.points.reserve(path.points.size());
  AlgebraVector acc(static_cast<std::size_t>(deriv.dim), 0.0);
  out.points.push_back(GroupPoint{acc});
  for (const auto& v : deriv.values) {
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += v[i];
    out.points.push_back(GroupPoint{acc});
  }
  return out;
}

/// Inverse of to_euclidean up to the choice of initial point.
inline DiscretePath from_euclidean(const GroupSpec& spec, const DiscretePath& path,
                                   const GroupPoint& initial) {
  const DerivativePath deriv = discrete_derivative(path);
  DiscretePath out = integrate(spec, deriv, initial);
  out.timestamps = path.timestamps;
  return out;
}

/// Appends the time parameter as an extra Euclidean coordinate, breaking
/// reparametrization invariance.
inline DiscretePath transform_time(const DiscretePath& path) {
  detail::require_path(path);
  DiscretePath out;
  out.spec = GroupSpec::product({path.spec, GroupSpec::euclidean(1)});
  out.timestamps = path.timestamps;
  out.points.reserve(path.points.size());
  for (std::size_t i = 0; i < path.points.size(); ++i) {
    GroupPoint p = path.points[i];
    p.data.push_back(path.timestamp(static_cast<int>(i)));
    out.points.push_back(std::move(p));
  }
  return out;
}

/// Prepends the identity element, breaking left-translation invariance.
inline DiscretePath transform_idinit(const DiscretePath& path) {
  detail::require_path(path);
  DiscretePath out;
  out.spec = path.spec;
  out.points.reserve(path.points.size() + 1);
  out.points.push_back(identity_point(path.spec));
  out.points.insert(out.points.end(), path.points.begin(), path.points.end());
  if (!path.timestamps.empty()) {
    // Keep timestamps strictly increasing by extending one step backwards.
    out.timestamps.reserve(path.timestamps.size() + 1);
    out.timestamps.push_back(2.0 * path.timestamps[0] - path.timestamps[1]);
    out.timestamps.insert(out.timestamps.end(), path.timestamps.begin(),
                          path.timestamps.end());
  }
  return out;
}

enum class WindowPadding { identity, first_point };

/// Sliding window with m lags: point i becomes the (m+1)-tuple
/// (p_i, p_{i-1}, ..., p_{i-m}); indices below zero use the padding value.
inline DiscretePath transform_sliding_window(const DiscretePath& path, int lags,
                                             WindowPadding padding = WindowPadding::identity) {
  detail::require_path(path);
  if (lags < 0) throw DimensionMismatchError("sliding window needs lags >= 0");
  DiscretePath out;
  out.spec = GroupSpec::power(path.spec, lags + 1);
  out.timestamps = path.timestamps;
  const GroupPoint pad = padding == WindowPadding::identity
                             ? identity_point(path.spec)
                             : path.points.front();
  out.points.reserve(path.points.size());
  for (int i = 0; i < static_cast<int>(path.points.size()); ++i) {
    GroupPoint tuple;
    tuple.data.reserve(static_cast<std::size_t>(out.spec.point_size()));
    for (int lag = 0; lag <= lags; ++lag) {
      const GroupPoint& src =
          i - lag >= 0 ? path.points[static_cast<std::size_t>(i - lag)] : pad;
      tuple.data.insert(tuple.data.end(), src.data.begin(), src.data.end());
    }
    out.points.push_back(std::move(tuple));
  }
  return out;
}

/// Concatenation: beta is left-translated so its first point continues from
/// alpha's last; the derivative sequence is alpha's followed by beta's.
inline DiscretePath concat(const DiscretePath& alpha, const DiscretePath& beta) {
  if (!(alpha.spec == beta.spec))
    throw DimensionMismatchError("concat: specs differ");
  detail::require_path(alpha);
  detail::require_path(beta);
  DiscretePath out;
  out.spec = alpha.spec;
  out.points = alpha.points;
  const GroupPoint shift =
      multiply(alpha.spec, alpha.points.back(), inverse(alpha.spec, beta.points.front()));
  for (std::size_t j = 1; j < beta.points.size(); ++j)
    out.points.push_back(multiply(alpha.spec, shift, beta.points[j]));
  if (!alpha.timestamps.empty() || !beta.timestamps.empty()) {
    out.timestamps.reserve(out.points.size());
    for (std::size_t i = 0; i < alpha.points.size(); ++i)
      out.timestamps.push_back(alpha.timestamp(static_cast<int>(i)));
    const double base = alpha.timestamp(alpha.num_steps());
    for (std::size_t j = 1; j < beta.points.size(); ++j)
      out.timestamps.push_back(base + beta.timestamp(static_cast<int>(j)) - beta.timestamp(0));
  }
  return out;
}

/// The same path traversed backwards.
inline DiscretePath reverse(const DiscretePath& path) {
  detail::require_path(path);
  DiscretePath out;
  out.spec = path.spec;
  out.points.assign(path.points.rbegin(), path.points.rend());
  if (!path.timestamps.empty()) {
    const double lo = path.timestamps.front();
    const double hi = path.timestamps.back();
    out.timestamps.reserve(path.timestamps.size());
    for (auto it = path.timestamps.rbegin(); it != path.timestamps.rend(); ++it)
      out.timestamps.push_back(lo + (hi - *it));
  }
  return out;
}

/// L1 distance between derivative sequences; the signature-compatible metric.
inline double path_distance(const DiscretePath& alpha, const DiscretePath& beta) {
  if (!(alpha.spec == beta.spec))
    throw DimensionMismatchError("path_distance: specs differ");
  const DerivativePath da = discrete_derivative(alpha);
  const DerivativePath db = discrete_derivative(beta);
  if (da.values.size() != db.values.size())
    throw DimensionMismatchError("path_distance: lengths differ");
  double total = 0.0;
  for (std::size_t i = 0; i < da.values.size(); ++i) {
    AlgebraVector diff = da.values[i];
    for (std::size_t k = 0; k < diff.size(); ++k) diff[k] -= db.values[i][k];
    total += detail::vec_norm(diff);
  }
  return total;
}

/// 1-variation: total derivative length. Discrete paths are piecewise
/// geodesic, so the partition supremum is attained at the sample points.
inline double one_variation(const DiscretePath& path) {
  const DerivativePath deriv = discrete_derivative(path);
  double total = 0.0;
  for (const auto& v : deriv.values) total += detail::vec_norm(v);
  return total;
}

inline double one_variation(const DerivativePath& deriv) {
  double total = 0.0;
  for (const auto& v : deriv.values) total += detail::vec_norm(v);
  return total;
}

}  // namespace liesig
