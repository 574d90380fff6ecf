#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "liesig/errors.hpp"
#include "liesig/parallel.hpp"
#include "liesig/path.hpp"
#include "liesig/signature.hpp"
#include "liesig/tensor.hpp"

namespace liesig {

/// Parameters of the normalization function psi and the dilation root solve.
struct NormalizationConfig {
  double psi_cap = 4.0;    // cap parameter, > 1
  double psi_decay = 1.0;  // decay exponent, > 0
  double root_tolerance = 1e-12;
};

/// psi(x) = x^2 below sqrt(cap), then cap + cap^{1+a} (cap^{-a} - x^{-a}) / a.
inline double psi(double x, const NormalizationConfig& cfg = {}) {
  if (x < 1.0) throw std::domain_error("psi requires x >= 1");
  const double boundary = std::sqrt(cfg.psi_cap);
  if (x <= boundary) return x * x;
  const double a = cfg.psi_decay;
  return cfg.psi_cap + std::pow(cfg.psi_cap, 1.0 + a) *
                           (std::pow(cfg.psi_cap, -a) - std::pow(x, -a)) / a;
}

/// Supremum of psi.
inline double psi_sup(const NormalizationConfig& cfg = {}) {
  return cfg.psi_cap * (1.0 + 1.0 / cfg.psi_decay);
}

struct NormalizationResult {
  double lambda = 1.0;
  TruncatedTensor tensor;
};

/// Dilation scale lambda solving ||delta_lambda t||^2 = psi(||t||), found by
/// bisection on [0, 1], together with the dilated tensor. Tensors with norm
/// at most sqrt(psi_cap) are left untouched (lambda = 1), as are degenerate
/// tensors with no mass above level zero.
inline NormalizationResult normalize_tensor(const TruncatedTensor& t,
                                            const NormalizationConfig& cfg = {}) {
  if (t.at_level(0).size() != 1 || t.at_level(0)[0] != 1.0)
    throw DimensionMismatchError("normalization requires unit level-0 coefficient");
  const int M = t.level();
  std::vector<double> level_sq(static_cast<std::size_t>(M) + 1, 0.0);
  double norm_sq = 0.0;
  for (int m = 0; m <= M; ++m) {
    const double lv = level_norm(t, m);
    level_sq[static_cast<std::size_t>(m)] = lv * lv;
    norm_sq += lv * lv;
  }
  const double x = std::sqrt(norm_sq);
  bool degenerate = true;
  for (int m = 1; m <= M; ++m)
    if (level_sq[static_cast<std::size_t>(m)] != 0.0) degenerate = false;
  if (degenerate || x <= std::sqrt(cfg.psi_cap)) return {1.0, t};

  // psi dips below 1 just above sqrt(psi_cap), but a dilated norm can never
  // drop below the level-0 contribution of 1; clamp the target so the
  // bisection stays well posed.
  const double target = std::max(1.0, psi(x, cfg));
  const auto dilated_norm_sq = [&](double lambda) {
    double acc = level_sq[0];
    double factor = 1.0;
    const double l2 = lambda * lambda;
    for (int m = 1; m <= M; ++m) {
      factor *= l2;
      acc += factor * level_sq[static_cast<std::size_t>(m)];
    }
    return acc;
  };
  double lo = 0.0, hi = 1.0;
  for (int iter = 0; iter < 200 && hi - lo > cfg.root_tolerance * std::max(hi, 1e-12);
       ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (dilated_norm_sq(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  const double lambda = 0.5 * (lo + hi);
  return {lambda, dilate(lambda, t)};
}

enum class SignatureMode { continuous, discrete };

inline TruncatedTensor signature_with_mode(const DerivativePath& deriv, int level,
                                           SignatureMode mode,
                                           std::size_t budget = kDefaultCoeffBudget) {
  return mode == SignatureMode::continuous ? signature(deriv, level, budget)
                                           : discrete_signature(deriv, level, budget);
}

/// Normalized signature: the dilation-normalized signature tensor, bounded by
/// sqrt(sup psi) in norm.
inline TruncatedTensor normalized_signature(const DiscretePath& path, int level,
                                            const NormalizationConfig& cfg = {},
                                            SignatureMode mode = SignatureMode::continuous,
                                            std::size_t budget = kDefaultCoeffBudget) {
  return normalize_tensor(signature_with_mode(discrete_derivative(path), level, mode, budget),
                          cfg)
      .tensor;
}

struct KernelOptions {
  bool normalized = false;
  SignatureMode mode = SignatureMode::continuous;
  NormalizationConfig normalization{};
  std::size_t budget = kDefaultCoeffBudget;
};

/// Signature kernel by explicit feature materialization:
/// <sig(alpha), sig(beta)>, optionally of the normalized signatures.
inline double kernel_naive(const DiscretePath& alpha, const DiscretePath& beta,
                           int level, const KernelOptions& opts = {}) {
  if (alpha.spec.algebra_dim() != beta.spec.algebra_dim())
    throw DimensionMismatchError("kernel: algebra dimensions differ");
  TruncatedTensor sa = signature_with_mode(discrete_derivative(alpha), level,
                                           opts.mode, opts.budget);
  TruncatedTensor sb = signature_with_mode(discrete_derivative(beta), level,
                                           opts.mode, opts.budget);
  if (opts.normalized) {
    sa = normalize_tensor(sa, opts.normalization).tensor;
    sb = normalize_tensor(sb, opts.normalization).tensor;
  }
  return inner_product(sa, sb);
}

namespace detail {
/// Deterministic argument order (length, then lexicographic on the values):
/// evaluating the kernel in canonical order makes its symmetry bitwise, not
/// just mathematical.
inline bool kernel_swap_order(const DerivativePath& a, const DerivativePath& b) {
  if (a.values.size() != b.values.size()) return a.values.size() > b.values.size();
  return a.values > b.values;
}
}  // namespace detail

/// Discrete signature kernel <S^(alpha), S^(beta)> without materializing
/// either signature: Horner-style recursion over the T_a x T_b matrix of step
/// inner products, O(T^2 M) time. The exclusive prefix sums keep the index
/// tuples strictly increasing on both sides.
inline double kernel_horner(const DerivativePath& alpha, const DerivativePath& beta,
                            int level) {
  if (alpha.dim != beta.dim)
    throw DimensionMismatchError("kernel: algebra dimensions differ");
  if (detail::kernel_swap_order(alpha, beta)) return kernel_horner(beta, alpha, level);
  const int ta = alpha.num_steps();
  const int tb = beta.num_steps();
  if (level <= 0 || ta == 0 || tb == 0) return 1.0;
  const std::size_t cells = static_cast<std::size_t>(ta) * static_cast<std::size_t>(tb);
  std::vector<double> k(cells), acc(cells), prefix;
  for (int i = 0; i < ta; ++i)
    for (int j = 0; j < tb; ++j) {
      double dot = 0.0;
      for (int d = 0; d < alpha.dim; ++d)
        dot += alpha.values[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)] *
               beta.values[static_cast<std::size_t>(j)][static_cast<std::size_t>(d)];
      k[static_cast<std::size_t>(i) * tb + j] = dot;
    }
  acc = k;
  for (int m = 2; m <= level; ++m) {
    // prefix[i][j] = sum_{i' < i, j' < j} acc[i'][j']  (exclusive both ways)
    prefix.assign(cells, 0.0);
    for (int i = 1; i < ta; ++i) {
      double row = 0.0;
      for (int j = 1; j < tb; ++j) {
        row += acc[static_cast<std::size_t>(i - 1) * tb + (j - 1)];
        prefix[static_cast<std::size_t>(i) * tb + j] =
            row + prefix[static_cast<std::size_t>(i - 1) * tb + j];
      }
    }
    for (std::size_t c = 0; c < cells; ++c) acc[c] = k[c] * (1.0 + prefix[c]);
  }
  double total = 0.0;
  for (const double v : acc) total += v;
  return 1.0 + total;
}

inline double kernel_horner(const DiscretePath& alpha, const DiscretePath& beta,
                            int level) {
  return kernel_horner(discrete_derivative(alpha), discrete_derivative(beta), level);
}

enum class KernelAlgorithm { horner, naive };

struct GramOptions {
  KernelAlgorithm algorithm = KernelAlgorithm::horner;
  bool normalized = false;
  SignatureMode mode = SignatureMode::continuous;
  NormalizationConfig normalization{};
  std::size_t budget = kDefaultCoeffBudget;
};

/// Pairwise signature-kernel evaluations over a sample set.
struct GramMatrix {
  int size = 0;
  int level = 0;
  bool normalized = false;
  std::vector<double> entries;  // row-major size x size, symmetric

  double at(int i, int j) const {
    return entries[static_cast<std::size_t>(i) * size + j];
  }
  double& at(int i, int j) {
    return entries[static_cast<std::size_t>(i) * size + j];
  }
};

/// Builds the symmetric Gram matrix. Normalized mode always goes through
/// explicitly normalized signatures (there is no normalized recursion);
/// raw mode selects either the Horner recursion or materialized signatures.
inline GramMatrix gram_matrix(std::span<const DiscretePath> paths, int level,
                              const GramOptions& opts = {}) {
  const int n = static_cast<int>(paths.size());
  GramMatrix gram{n, level, opts.normalized,
                  std::vector<double>(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0)};
  if (n == 0) return gram;
  for (const auto& p : paths)
    if (p.spec.algebra_dim() != paths[0].spec.algebra_dim())
      throw DimensionMismatchError("gram: paths have mismatched algebra dimensions");

  std::vector<DerivativePath> derivatives(static_cast<std::size_t>(n));
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    derivatives[i] = discrete_derivative(paths[i]);
  });

  const bool use_features =
      opts.normalized || opts.algorithm == KernelAlgorithm::naive;
  if (use_features) {
    std::vector<TruncatedTensor> features(static_cast<std::size_t>(n));
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
      TruncatedTensor sig = signature_with_mode(derivatives[i], level, opts.mode, opts.budget);
      features[i] = opts.normalized
                        ? normalize_tensor(sig, opts.normalization).tensor
                        : std::move(sig);
    });
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
      for (std::size_t j = i; j < static_cast<std::size_t>(n); ++j) {
        const double v = inner_product(features[i], features[j]);
        gram.at(static_cast<int>(i), static_cast<int>(j)) = v;
        gram.at(static_cast<int>(j), static_cast<int>(i)) = v;
      }
    });
  } else {
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
      for (std::size_t j = i; j < static_cast<std::size_t>(n); ++j) {
        const double v = kernel_horner(derivatives[i], derivatives[j], level);
        gram.at(static_cast<int>(i), static_cast<int>(j)) = v;
        gram.at(static_cast<int>(j), static_cast<int>(i)) = v;
      }
    });
  }
  return gram;
}

}  // namespace liesig
