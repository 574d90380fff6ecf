#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "liesig/errors.hpp"
#include "liesig/parallel.hpp"
#include "liesig/path.hpp"
#include "liesig/rng.hpp"
#include "liesig/stats.hpp"

namespace liesig {

namespace detail {

/// Rotation taking the north pole (0,0,1) to the unit vector mu.
inline Mat3 frame_from_pole(const Vec3& mu) {
  const double z = mu[2];
  if (z > 1.0 - 1e-14) return mat3_identity();
  if (z < -1.0 + 1e-14) return {1, 0, 0, 0, -1, 0, 0, 0, -1};
  // Rodrigues about axis = pole x mu, angle = arccos(z).
  const double ax = -mu[1], ay = mu[0];  // un-normalized axis, az = 0
  const double s = std::sqrt(ax * ax + ay * ay);
  const double ux = ax / s, uy = ay / s;
  const double c = z, one_c = 1.0 - z;
  const double sin_t = s;  // |pole x mu| = sin(theta)
  return {c + ux * ux * one_c, ux * uy * one_c,      uy * sin_t,
          ux * uy * one_c,     c + uy * uy * one_c,  -ux * sin_t,
          -uy * sin_t,         ux * sin_t,           c};
}

/// vMF draw with the two uniforms supplied explicitly; used directly by tests
/// to pin the xi in {0,1} boundary cases.
inline std::array<double, 3> vmf_from_uniforms(const std::array<double, 3>& mu,
                                               double kappa, double xi, double phi_u) {
  double w;
  if (kappa == 0.0) {
    w = 2.0 * xi - 1.0;
  } else if (xi <= 0.0) {
    w = -1.0;  // inverse-CDF boundary, exactly the antipode
  } else if (xi >= 1.0) {
    w = 1.0;
  } else {
    // Inverse CDF of the polar component:
    // w = 1 + log(xi + (1 - xi) e^{-2 kappa}) / kappa, evaluated in the
    // cancellation-safe log1p/expm1 form.
    w = 1.0 + std::log1p((1.0 - xi) * std::expm1(-2.0 * kappa)) / kappa;
  }
  w = std::min(1.0, std::max(-1.0, w));
  if (w == 1.0) return mu;
  if (w == -1.0) return {-mu[0], -mu[1], -mu[2]};
  const double r = std::sqrt(std::max(0.0, 1.0 - w * w));
  const double phi = 2.0 * std::numbers::pi * phi_u;
  const Vec3 local{r * std::cos(phi), r * std::sin(phi), w};
  const Mat3 frame = frame_from_pole({mu[0], mu[1], mu[2]});
  std::array<double, 3> out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      out[static_cast<std::size_t>(i)] +=
          frame[static_cast<std::size_t>(3 * i + j)] * local[static_cast<std::size_t>(j)];
  return out;
}

}  // namespace detail

/// von Mises-Fisher draw on S^2 with mean direction mu and concentration
/// kappa; kappa = 0 reduces to the uniform distribution on the sphere.
inline std::array<double, 3> sample_vmf(const std::array<double, 3>& mu, double kappa,
                                        Rng& rng) {
  const double norm = std::sqrt(mu[0] * mu[0] + mu[1] * mu[1] + mu[2] * mu[2]);
  if (std::fabs(norm - 1.0) > 1e-12)
    throw DimensionMismatchError("vMF mean direction must be a unit vector");
  if (kappa < 0.0) throw DimensionMismatchError("vMF concentration must be >= 0");
  return detail::vmf_from_uniforms(mu, kappa, rng.uniform(), rng.uniform());
}

struct WalkConfig {
  int steps = 100;
  double step_size = 0.1;
  std::array<double, 3> mean_direction{1.0, 0.0, 0.0};
  double concentration = 0.1;
  std::uint64_t seed = 0;
};

/// Drifted random walk on SO(3): Haar-uniform start, then
/// p_{i+1} = p_i exp(c v_i) with unit increments v_i ~ vMF(mu, kappa).
inline DiscretePath random_walk_so3(const WalkConfig& cfg, Rng& rng) {
  if (cfg.steps < 1) throw DimensionMismatchError("walk needs at least one step");
  if (cfg.step_size < 0.0) throw DimensionMismatchError("step size must be >= 0");
  const GroupSpec spec = GroupSpec::so3();
  DiscretePath path;
  path.spec = spec;
  path.points.reserve(static_cast<std::size_t>(cfg.steps) + 1);
  const Mat3 start = sample_uniform_so3(rng);
  path.points.push_back(GroupPoint{std::vector<double>(start.begin(), start.end())});
  for (int i = 0; i < cfg.steps; ++i) {
    const auto v = sample_vmf(cfg.mean_direction, cfg.concentration, rng);
    const AlgebraVector step{cfg.step_size * v[0], cfg.step_size * v[1],
                             cfg.step_size * v[2]};
    path.points.push_back(multiply(spec, path.points.back(), exp_map(spec, step)));
  }
  return path;
}

inline DiscretePath random_walk_so3(const WalkConfig& cfg) {
  Rng rng(cfg.seed);
  return random_walk_so3(cfg, rng);
}

/// Forgets the group structure: each SO(3) block becomes nine Euclidean
/// coordinates (row-major), Euclidean blocks pass through. Point count and
/// timestamps are preserved; the derivative of the result is plain
/// differences.
inline DiscretePath flatten_to_euclidean(const DiscretePath& path) {
  DiscretePath out;
  out.spec = GroupSpec::euclidean(path.spec.point_size());
  out.timestamps = path.timestamps;
  out.points = path.points;  // blocks are already concatenated row-major
  return out;
}

enum class Representation { lie, euclidean9 };

struct ExperimentConfig {
  int trials = 1;
  int samples_per_class = 50;
  WalkConfig walk_x{};
  WalkConfig walk_y{};
  int level = 4;
  Representation representation = Representation::lie;
  GramOptions gram{KernelAlgorithm::naive, true, SignatureMode::continuous};
  TestConfig test{0.05, 2000, 0};
  std::uint64_t seed = 0;
};

struct ExperimentSummary {
  int trials = 0;
  int rejections = 0;
  double rejection_rate = 0.0;
  std::vector<TestReport> reports;
};

/// Repeated two-sample tests between the two walk distributions. Each trial
/// draws fresh samples from a substream of the master seed, so results do not
/// depend on how trials are scheduled across threads.
inline ExperimentSummary run_experiment(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw DimensionMismatchError("experiment needs trials >= 1");
  if (cfg.samples_per_class < 2)
    throw DimensionMismatchError("experiment needs at least two samples per class");
  ExperimentSummary summary;
  summary.trials = cfg.trials;
  summary.reports.resize(static_cast<std::size_t>(cfg.trials));
  parallel_for(static_cast<std::size_t>(cfg.trials), [&](std::size_t trial) {
    const std::uint64_t trial_seed = Rng::derive(cfg.seed, trial);
    Rng rng(trial_seed);
    const int n = cfg.samples_per_class;
    std::vector<DiscretePath> xs, ys;
    xs.reserve(static_cast<std::size_t>(n));
    ys.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) xs.push_back(random_walk_so3(cfg.walk_x, rng));
    for (int i = 0; i < n; ++i) ys.push_back(random_walk_so3(cfg.walk_y, rng));
    if (cfg.representation == Representation::euclidean9) {
      for (auto& p : xs) p = flatten_to_euclidean(p);
      for (auto& p : ys) p = flatten_to_euclidean(p);
    }
    TestConfig test_cfg = cfg.test;
    test_cfg.seed = Rng::derive(trial_seed, 0x7e57);
    summary.reports[trial] = two_sample_test(xs, ys, cfg.level, cfg.gram, test_cfg);
  });
  for (const auto& report : summary.reports)
    if (report.reject) ++summary.rejections;
  summary.rejection_rate =
      static_cast<double>(summary.rejections) / static_cast<double>(cfg.trials);
  return summary;
}

}  // namespace liesig
