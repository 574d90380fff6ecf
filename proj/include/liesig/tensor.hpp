#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "liesig/errors.hpp"

namespace liesig {

/// Basis indices of one tensor coefficient, each entry in [0, ambient_dim).
using MultiIndex = std::vector<int>;

/// Default cap on the number of coefficients in a single dense level.
inline constexpr std::size_t kDefaultCoeffBudget = 100'000'000;

/// dim^m, saturating at SIZE_MAX/2 so callers can compare against budgets.
inline std::size_t level_size(int dim, int m) {
  constexpr std::size_t cap = std::numeric_limits<std::size_t>::max() / 2;
  std::size_t size = 1;
  for (int i = 0; i < m; ++i) {
    if (dim != 0 && size > cap / static_cast<std::size_t>(dim)) return cap;
    size *= static_cast<std::size_t>(dim);
  }
  return size;
}

/// Refuses to materialize a dense level with more than `budget` coefficients.
inline void check_budget(int dim, int level,
                         std::size_t budget = kDefaultCoeffBudget) {
  if (level_size(dim, level) > budget) {
    throw BudgetExceededError("level " + std::to_string(level) +
                              " of a dim-" + std::to_string(dim) +
                              " tensor exceeds the coefficient budget");
  }
}

/// Element of the truncated tensor algebra over R^N: one dense coefficient
/// array per level m = 0..M, each of length N^m, flattened row-major over
/// (i_1, ..., i_m) with i_1 slowest.
class TruncatedTensor {
public:
  TruncatedTensor() = default;

  /// Zero tensor of the given shape.
  TruncatedTensor(int ambient_dim, int level)
      : dim_(ambient_dim), level_(level) {
    if (ambient_dim < 1 || level < 0)
      throw DimensionMismatchError("tensor requires ambient_dim >= 1, level >= 0");
    levels_.resize(static_cast<std::size_t>(level) + 1);
    for (int m = 0; m <= level; ++m)
      levels_[static_cast<std::size_t>(m)].assign(level_size(ambient_dim, m), 0.0);
  }

  /// Multiplicative unit: 1 at level zero, all higher levels zero.
  static TruncatedTensor one(int ambient_dim, int level) {
    TruncatedTensor t(ambient_dim, level);
    t.levels_[0][0] = 1.0;
    return t;
  }

  int ambient_dim() const { return dim_; }
  int level() const { return level_; }

  const std::vector<double>& at_level(int m) const {
    if (m < 0 || m > level_)
      throw std::out_of_range("tensor level " + std::to_string(m) + " out of range");
    return levels_[static_cast<std::size_t>(m)];
  }
  std::vector<double>& at_level(int m) {
    if (m < 0 || m > level_)
      throw std::out_of_range("tensor level " + std::to_string(m) + " out of range");
    return levels_[static_cast<std::size_t>(m)];
  }

  /// Coefficient addressed by a multi-index (its length selects the level).
  double coeff(const MultiIndex& index) const {
    return levels_[check_index(index)][flat_index(index)];
  }
  double& coeff(const MultiIndex& index) {
    return levels_[check_index(index)][flat_index(index)];
  }

  std::size_t total_size() const {
    std::size_t n = 0;
    for (const auto& lv : levels_) n += lv.size();
    return n;
  }

  bool same_shape(const TruncatedTensor& other) const {
    return dim_ == other.dim_ && level_ == other.level_;
  }

private:
  std::size_t check_index(const MultiIndex& index) const {
    const int m = static_cast<int>(index.size());
    if (m > level_)
      throw std::out_of_range("multi-index longer than truncation level");
    for (int entry : index)
      if (entry < 0 || entry >= dim_)
        throw std::out_of_range("multi-index entry out of range");
    return static_cast<std::size_t>(m);
  }

  std::size_t flat_index(const MultiIndex& index) const {
    std::size_t flat = 0;
    for (int entry : index)
      flat = flat * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(entry);
    return flat;
  }

  int dim_ = 0;
  int level_ = 0;
  std::vector<std::vector<double>> levels_{{0.0}};
};

namespace detail {
inline void require_same_shape(const TruncatedTensor& a, const TruncatedTensor& b) {
  if (!a.same_shape(b))
    throw DimensionMismatchError("tensor shapes differ: (" +
                                 std::to_string(a.ambient_dim()) + "," +
                                 std::to_string(a.level()) + ") vs (" +
                                 std::to_string(b.ambient_dim()) + "," +
                                 std::to_string(b.level()) + ")");
}
}  // namespace detail

inline TruncatedTensor operator+(const TruncatedTensor& a, const TruncatedTensor& b) {
  detail::require_same_shape(a, b);
  TruncatedTensor out = a;
  for (int m = 0; m <= a.level(); ++m) {
    auto& dst = out.at_level(m);
    const auto& src = b.at_level(m);
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
  }
  return out;
}

inline TruncatedTensor operator*(double c, const TruncatedTensor& t) {
  TruncatedTensor out = t;
  for (int m = 0; m <= t.level(); ++m)
    for (double& x : out.at_level(m)) x *= c;
  return out;
}

inline TruncatedTensor operator-(const TruncatedTensor& a, const TruncatedTensor& b) {
  return a + (-1.0 * b);
}

/// Truncated tensor (concatenation) product: level m of the result collects
/// every split (s_j) x (t_{m-j}); levels above the truncation are dropped.
inline TruncatedTensor tensor_product(const TruncatedTensor& a, const TruncatedTensor& b) {
  detail::require_same_shape(a, b);
  const int M = a.level();
  TruncatedTensor out(a.ambient_dim(), M);
  for (int m = 0; m <= M; ++m) {
    auto& dst = out.at_level(m);
    for (int j = 0; j <= m; ++j) {
      const auto& left = a.at_level(j);
      const auto& right = b.at_level(m - j);
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
  return out;
}

/// exp_tensor(v): level m equals v^{(x) m} / m!.
inline TruncatedTensor tensor_exp(std::span<const double> v, int level,
                                  std::size_t budget = kDefaultCoeffBudget) {
  const int dim = static_cast<int>(v.size());
  check_budget(dim, level, budget);
  TruncatedTensor out = TruncatedTensor::one(dim, level);
  for (int m = 1; m <= level; ++m) {
    const auto& prev = out.at_level(m - 1);
    auto& cur = out.at_level(m);
    const double inv = 1.0 / static_cast<double>(m);
    std::size_t pos = 0;
    for (const double p : prev)
      for (const double x : v) cur[pos++] = p * x * inv;
  }
  return out;
}

/// Dilation: scales level m by lambda^m.
inline TruncatedTensor dilate(double lambda, const TruncatedTensor& t) {
  TruncatedTensor out = t;
  double factor = 1.0;
  for (int m = 1; m <= t.level(); ++m) {
    factor *= lambda;
    for (double& x : out.at_level(m)) x *= factor;
  }
  return out;
}

/// Inner product with the basis declared orthonormal: plain coefficient dot
/// product across all levels.
inline double inner_product(const TruncatedTensor& a, const TruncatedTensor& b) {
  detail::require_same_shape(a, b);
  double total = 0.0;
  for (int m = 0; m <= a.level(); ++m) {
    const auto& x = a.at_level(m);
    const auto& y = b.at_level(m);
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
    total += acc;
  }
  return total;
}

inline double norm(const TruncatedTensor& t) {
  return std::sqrt(inner_product(t, t));
}

/// Norm of a single level.
inline double level_norm(const TruncatedTensor& t, int m) {
  double acc = 0.0;
  for (const double x : t.at_level(m)) acc += x * x;
  return std::sqrt(acc);
}

namespace detail {
inline void shuffle_rec(std::span<const int> lhs, std::span<const int> rhs,
                        MultiIndex& current, std::vector<MultiIndex>& out) {
  if (lhs.empty() && rhs.empty()) {
    out.push_back(current);
    return;
  }
  if (!lhs.empty()) {
    current.push_back(lhs.front());
    shuffle_rec(lhs.subspan(1), rhs, current, out);
    current.pop_back();
  }
  if (!rhs.empty()) {
    current.push_back(rhs.front());
    shuffle_rec(lhs, rhs.subspan(1), current, out);
    current.pop_back();
  }
}
}  // namespace detail

/// Shuffle product of two multi-indices: the multiset of all interleavings
/// preserving the internal order of each argument, C(k+l, k) entries.
inline std::vector<MultiIndex> shuffle_product(const MultiIndex& lhs,
                                               const MultiIndex& rhs) {
  std::vector<MultiIndex> out;
  MultiIndex current;
  current.reserve(lhs.size() + rhs.size());
  detail::shuffle_rec(lhs, rhs, current, out);
  return out;
}

/// Dense rows x cols matrix, row-major.
struct LinearMap {
  int rows = 0;
  int cols = 0;
  std::vector<double> entries;

  double operator()(int r, int c) const {
    return entries[static_cast<std::size_t>(r) * cols + c];
  }
  double& operator()(int r, int c) {
    return entries[static_cast<std::size_t>(r) * cols + c];
  }

  static LinearMap identity(int n) {
    LinearMap f{n, n, std::vector<double>(static_cast<std::size_t>(n) * n, 0.0)};
    for (int i = 0; i < n; ++i) f(i, i) = 1.0;
    return f;
  }

  static LinearMap compose(const LinearMap& a, const LinearMap& b) {
    if (a.cols != b.rows) throw DimensionMismatchError("composing maps with mismatched dims");
    LinearMap out{a.rows, b.cols,
                  std::vector<double>(static_cast<std::size_t>(a.rows) * b.cols, 0.0)};
    for (int i = 0; i < a.rows; ++i)
      for (int k = 0; k < a.cols; ++k) {
        const double aik = a(i, k);
        if (aik == 0.0) continue;
        for (int j = 0; j < b.cols; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }
};

/// Pushforward along a linear map: every mode of each level is multiplied by
/// the matrix (level 1 is F t_1, level 2 is F t_2 F^T, and so on). Implemented
/// as m rounds of front-mode multiplication, each cycling the result so the
/// original mode order is restored.
inline TruncatedTensor pushforward(const LinearMap& map, const TruncatedTensor& t,
                                   std::size_t budget = kDefaultCoeffBudget) {
  if (map.cols != t.ambient_dim())
    throw DimensionMismatchError("pushforward: map has " + std::to_string(map.cols) +
                                 " columns but tensor has ambient dim " +
                                 std::to_string(t.ambient_dim()));
  const int n_in = map.cols;
  const int n_out = map.rows;
  const int M = t.level();
  check_budget(n_out, M, budget);
  TruncatedTensor out(n_out, M);
  out.at_level(0) = t.at_level(0);
  std::vector<double> work, next;
  for (int m = 1; m <= M; ++m) {
    work = t.at_level(m);
    for (int round = 0; round < m; ++round) {
      // Untransformed input modes sit at the front, transformed output modes
      // accumulate at the back.
      const std::size_t tail =
          level_size(n_in, m - 1 - round) * level_size(n_out, round);
      next.assign(tail * static_cast<std::size_t>(n_out), 0.0);
      // work has shape [n_in, tail]; next gets shape [tail, n_out].
      for (int i = 0; i < n_in; ++i) {
        const double* src = work.data() + static_cast<std::size_t>(i) * tail;
        for (int j = 0; j < n_out; ++j) {
          const double w = map(j, i);
          if (w == 0.0) continue;
          double* dst = next.data() + j;
          for (std::size_t r = 0; r < tail; ++r)
            dst[r * static_cast<std::size_t>(n_out)] += w * src[r];
        }
      }
      work.swap(next);
    }
    out.at_level(m) = work;
  }
  return out;
}

}  // namespace liesig
