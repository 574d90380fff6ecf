#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "liesig/errors.hpp"
#include "liesig/path.hpp"
#include "liesig/tensor.hpp"

namespace liesig {

namespace detail {

/// In-place s <- s (x) exp_tensor(v), truncated. Levels are updated top-down
/// so each target reads only still-unmodified lower levels.
inline void multiply_by_segment_exp(TruncatedTensor& sig, const AlgebraVector& v,
                                    std::vector<std::vector<double>>& exp_levels) {
  const int M = sig.level();
  const int N = sig.ambient_dim();
  // exp_levels[k] = v^{(x) k} / k!, k >= 1.
  exp_levels.resize(static_cast<std::size_t>(M > 0 ? M : 0));
  for (int k = 1; k <= M; ++k) {
    auto& cur = exp_levels[static_cast<std::size_t>(k - 1)];
    cur.assign(level_size(N, k), 0.0);
    const double inv = 1.0 / static_cast<double>(k);
    if (k == 1) {
      for (int i = 0; i < N; ++i) cur[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i)];
    } else {
      const auto& prev = exp_levels[static_cast<std::size_t>(k - 2)];
      std::size_t pos = 0;
      for (const double p : prev)
        for (const double x : v) cur[pos++] = p * x * inv;
    }
  }
  for (int m = M; m >= 1; --m) {
    auto& dst = sig.at_level(m);
    for (int j = m - 1; j >= 0; --j) {
      const auto& left = sig.at_level(j);
      const auto& right = exp_levels[static_cast<std::size_t>(m - j - 1)];
      std::size_t pos = 0;
      for (const double lv : left) {
        if (lv == 0.0) {
          pos += right.size();
          continue;
        }
        for (const double rv : right) dst[pos++] += lv * rv;
      }
    }
  }
}

}  // namespace detail

/// Signature of the piecewise-exponential interpolation: the truncated
/// product of tensor exponentials of the derivative steps.
inline TruncatedTensor signature(const DerivativePath& deriv, int level,
                                 std::size_t budget = kDefaultCoeffBudget) {
  check_budget(deriv.dim, level, budget);
  TruncatedTensor sig = TruncatedTensor::one(deriv.dim, level);
  std::vector<std::vector<double>> workspace;
  for (const auto& v : deriv.values)
    detail::multiply_by_segment_exp(sig, v, workspace);
  return sig;
}

inline TruncatedTensor signature(const DiscretePath& path, int level,
                                 std::size_t budget = kDefaultCoeffBudget) {
  return signature(discrete_derivative(path), level, budget);
}

namespace detail {

/// Depth-first forward recursion over multi-indices. For the running index
/// I.n, q_new[t] = sum_{u <= t} q_prev[u-1] * p[u][n]; the one-step shift
/// keeps index tuples strictly increasing.
inline void discrete_sig_recurse(const DerivativePath& deriv, TruncatedTensor& sig,
                                 const std::vector<double>& q_prev, std::size_t flat,
                                 int depth,
                                 std::vector<std::vector<double>>& workspace) {
  const int N = deriv.dim;
  const int T = deriv.num_steps();
  const int M = sig.level();
  auto& q = workspace[static_cast<std::size_t>(depth - 1)];
  q.resize(static_cast<std::size_t>(T));
  for (int n = 0; n < N; ++n) {
    const std::size_t child = flat * static_cast<std::size_t>(N) + static_cast<std::size_t>(n);
    double acc = 0.0;
    if (depth == 1) {
      for (int t = 0; t < T; ++t) {
        acc += deriv.values[static_cast<std::size_t>(t)][static_cast<std::size_t>(n)];
        q[static_cast<std::size_t>(t)] = acc;
      }
    } else {
      for (int t = 0; t < T; ++t) {
        const double prev = t > 0 ? q_prev[static_cast<std::size_t>(t - 1)] : 0.0;
        acc += prev * deriv.values[static_cast<std::size_t>(t)][static_cast<std::size_t>(n)];
        q[static_cast<std::size_t>(t)] = acc;
      }
    }
    sig.at_level(depth)[child] = T > 0 ? q[static_cast<std::size_t>(T - 1)] : 0.0;
    if (depth < M) discrete_sig_recurse(deriv, sig, q, child, depth + 1, workspace);
  }
}

}  // namespace detail

/// Discrete signature: sums of coordinate products over strictly increasing
/// index tuples. An approximation of the continuous signature that tightens
/// as the mesh refines.
inline TruncatedTensor discrete_signature(const DerivativePath& deriv, int level,
                                          std::size_t budget = kDefaultCoeffBudget) {
  check_budget(deriv.dim, level, budget);
  TruncatedTensor sig(deriv.dim, level);
  sig.at_level(0)[0] = 1.0;
  if (level >= 1 && deriv.num_steps() > 0) {
    std::vector<std::vector<double>> workspace(static_cast<std::size_t>(level));
    std::vector<double> root;
    detail::discrete_sig_recurse(deriv, sig, root, 0, 1, workspace);
  }
  return sig;
}

inline TruncatedTensor discrete_signature(const DiscretePath& path, int level,
                                          std::size_t budget = kDefaultCoeffBudget) {
  return discrete_signature(discrete_derivative(path), level, budget);
}

/// Literal enumeration of the strict discrete simplex; the arbiter for the
/// forward recursion. Guarded to short sequences.
inline TruncatedTensor brute_force_signature(const DerivativePath& deriv, int level) {
  const int T = deriv.num_steps();
  if (T > 12)
    throw DimensionMismatchError("brute-force signature is guarded to T <= 12 steps");
  const int N = deriv.dim;
  TruncatedTensor sig(N, level);
  sig.at_level(0)[0] = 1.0;
  for (int m = 1; m <= level; ++m) {
    auto& dst = sig.at_level(m);
    if (m > T) continue;  // no strictly increasing tuple exists
    std::vector<int> tuple(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) tuple[static_cast<std::size_t>(i)] = i;
    for (;;) {
      // Accumulate the outer product of the chosen steps.
      std::vector<double> block{1.0};
      std::vector<double> next;
      for (int i = 0; i < m; ++i) {
        const auto& v = deriv.values[static_cast<std::size_t>(tuple[static_cast<std::size_t>(i)])];
        next.assign(block.size() * static_cast<std::size_t>(N), 0.0);
        std::size_t pos = 0;
        for (const double b : block)
          for (int n = 0; n < N; ++n) next[pos++] = b * v[static_cast<std::size_t>(n)];
        block.swap(next);
      }
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += block[i];
      // Next strictly increasing tuple in [0, T).
      int k = m - 1;
      while (k >= 0 && tuple[static_cast<std::size_t>(k)] == T - m + k) --k;
      if (k < 0) break;
      ++tuple[static_cast<std::size_t>(k)];
      for (int i = k + 1; i < m; ++i)
        tuple[static_cast<std::size_t>(i)] = tuple[static_cast<std::size_t>(i - 1)] + 1;
    }
  }
  return sig;
}

/// Coefficient of the signature at a multi-index.
inline double sig_term(const TruncatedTensor& sig, const MultiIndex& index) {
  return sig.coeff(index);
}

/// Level-2 signature as an N x N row-major matrix.
inline std::vector<double> level2_matrix(const DiscretePath& path,
                                         std::size_t budget = kDefaultCoeffBudget) {
  return signature(path, 2, budget).at_level(2);
}

/// Antisymmetrized level 2, A = (S_2 - S_2^T) / 2: the cyclic lead-lag
/// indicator between basis directions.
inline std::vector<double> lead_matrix(const DiscretePath& path,
                                       std::size_t budget = kDefaultCoeffBudget) {
  const int n = path.spec.algebra_dim();
  std::vector<double> s2 = level2_matrix(path, budget);
  std::vector<double> out(s2.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out[static_cast<std::size_t>(i) * n + j] =
          0.5 * (s2[static_cast<std::size_t>(i) * n + j] - s2[static_cast<std::size_t>(j) * n + i]);
  return out;
}

}  // namespace liesig
