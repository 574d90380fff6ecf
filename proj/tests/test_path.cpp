#include <catch2/catch.hpp>

#include <cmath>

#include "helpers.hpp"
#include "liesig/path.hpp"
#include "liesig/signature.hpp"

using namespace liesig;
using test_helpers::max_abs_diff;
using test_helpers::random_euclidean_path;
using test_helpers::random_so3_path;

namespace {

double point_max_diff(const GroupPoint& a, const GroupPoint& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i)
    worst = std::max(worst, std::fabs(a.data[i] - b.data[i]));
  return worst;
}

double path_max_diff(const DiscretePath& a, const DiscretePath& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.points.size(); ++i)
    worst = std::max(worst, point_max_diff(a.points[i], b.points[i]));
  return worst;
}

DiscretePath euclidean_path_1d(std::vector<double> values) {
  DiscretePath path;
  path.spec = GroupSpec::euclidean(1);
  for (const double v : values) path.points.push_back(GroupPoint{{v}});
  return path;
}

}  // namespace

TEST_CASE("discrete derivative", "[path]") {
  const DerivativePath d = discrete_derivative(euclidean_path_1d({0.0, 1.0, 3.0}));
  REQUIRE(d.num_steps() == 2);
  CHECK(d.values[0][0] == 1.0);
  CHECK(d.values[1][0] == 2.0);

  const DerivativePath flat = discrete_derivative(euclidean_path_1d({2.0, 2.0, 2.0}));
  for (const auto& v : flat.values) CHECK(v[0] == 0.0);

  DiscretePath rot;
  rot.spec = GroupSpec::so3();
  rot.points.push_back(identity_point(rot.spec));
  rot.points.push_back(exp_map(rot.spec, {0.0, 0.3, 0.0}));
  const DerivativePath dr = discrete_derivative(rot);
  CHECK(dr.values[0][0] == Approx(0.0).margin(1e-15));
  CHECK(dr.values[0][1] == Approx(0.3));
  CHECK(dr.values[0][2] == Approx(0.0).margin(1e-15));
}

TEST_CASE("derivative reports antipodal step", "[path]") {
  DiscretePath path;
  path.spec = GroupSpec::so3();
  path.points.push_back(identity_point(path.spec));
  path.points.push_back(exp_map(path.spec, {0.1, 0.0, 0.0}));
  path.points.push_back(
      multiply(path.spec, path.points.back(),
               exp_map(path.spec, {std::acos(-1.0), 0.0, 0.0})));
  try {
    discrete_derivative(path);
    FAIL("expected AntipodalRotationError");
  } catch (const AntipodalRotationError& e) {
    CHECK(e.step_index == 1);
  }
}

TEST_CASE("integration", "[path]") {
  const GroupSpec so3 = GroupSpec::so3();
  DerivativePath zero;
  zero.dim = 3;
  zero.values.assign(5, AlgebraVector{0.0, 0.0, 0.0});
  Rng rng(31);
  const Mat3 start_m = sample_uniform_so3(rng);
  const GroupPoint start{std::vector<double>(start_m.begin(), start_m.end())};
  const DiscretePath constant = integrate(so3, zero, start);
  for (const auto& p : constant.points) CHECK(point_max_diff(p, start) == 0.0);

  // Derivative then integrate returns the original walk.
  for (int trial = 0; trial < 20; ++trial) {
    const DiscretePath walk = random_so3_path(rng, 30);
    const DiscretePath rebuilt =
        integrate(so3, discrete_derivative(walk), walk.points.front());
    CHECK(path_max_diff(walk, rebuilt) < 1e-9);
  }

  // Integrate then derive recovers the derivative.
  DerivativePath deriv;
  deriv.dim = 3;
  for (int i = 0; i < 40; ++i)
    deriv.values.push_back(
        {rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)});
  const DiscretePath path = integrate(so3, deriv, identity_point(so3));
  const DerivativePath back = discrete_derivative(path);
  double worst = 0.0;
  for (int i = 0; i < 40; ++i)
    for (int k = 0; k < 3; ++k)
      worst = std::max(worst, std::fabs(back.values[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] -
                                        deriv.values[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]));
  CHECK(worst < 1e-10);

  // Euclidean integration is a cumulative sum.
  const DiscretePath line = euclidean_path_1d({5.0, 6.0, 8.0});
  const DiscretePath rebuilt_line =
      integrate(GroupSpec::euclidean(1), discrete_derivative(line), GroupPoint{{5.0}});
  CHECK(path_max_diff(line, rebuilt_line) < 1e-14);
}

TEST_CASE("path scaling", "[path]") {
  Rng rng(32);
  const DiscretePath walk = random_so3_path(rng, 25);
  CHECK(path_max_diff(scale_path(walk, 1.0), walk) < 1e-10);

  const DiscretePath crushed = scale_path(walk, 0.0);
  for (const auto& p : crushed.points) CHECK(point_max_diff(p, walk.points.front()) < 1e-15);

  // Composition of scalings.
  const DiscretePath twice = scale_path(scale_path(walk, 0.6), 0.5);
  const DiscretePath once = scale_path(walk, 0.3);
  CHECK(path_max_diff(twice, once) < 1e-10);

  // Signature side: scaling the path dilates the signature.
  const TruncatedTensor direct = signature(scale_path(walk, 0.7), 4);
  const TruncatedTensor dilated = dilate(0.7, signature(walk, 4));
  CHECK(max_abs_diff(direct, dilated) < 1e-10);
}

TEST_CASE("euclidean representation", "[path]") {
  Rng rng(33);
  const GroupSpec so3 = GroupSpec::so3();

  DerivativePath zero;
  zero.dim = 3;
  zero.values.assign(4, AlgebraVector{0.0, 0.0, 0.0});
  const Mat3 start_m = sample_uniform_so3(rng);
  const DiscretePath constant =
      integrate(so3, zero, GroupPoint{std::vector<double>(start_m.begin(), start_m.end())});
  const DiscretePath flat = to_euclidean(constant);
  for (const auto& p : flat.points)
    for (const double x : p.data) CHECK(x == 0.0);

  for (int trial = 0; trial < 10; ++trial) {
    const DiscretePath walk = random_so3_path(rng, 20);
    const DiscretePath euclid = to_euclidean(walk);
    CHECK(euclid.spec == GroupSpec::euclidean(3));
    // Same signature on either side of the bijection.
    CHECK(max_abs_diff(signature(euclid, 4), signature(walk, 4)) < 1e-10);
    // Bijectivity up to the starting point.
    const DiscretePath back = from_euclidean(so3, euclid, walk.points.front());
    CHECK(path_max_diff(back, walk) < 1e-9);
  }
}

TEST_CASE("time transform", "[path]") {
  const DiscretePath constant = euclidean_path_1d({1.0, 1.0, 1.0});
  const DiscretePath timed = transform_time(constant);
  CHECK(timed.spec.algebra_dim() == 2);
  for (std::size_t i = 0; i < timed.points.size(); ++i)
    CHECK(timed.points[i].data[1] == static_cast<double>(i));

  // Duplicating a point is invisible to the raw signature but not after the
  // time transform.
  Rng rng(34);
  DiscretePath walk = random_so3_path(rng, 10);
  DiscretePath duplicated = walk;
  duplicated.points.insert(duplicated.points.begin() + 4, walk.points[4]);
  CHECK(max_abs_diff(signature(duplicated, 3), signature(walk, 3)) < 1e-12);
  const TruncatedTensor timed_a = signature(transform_time(walk), 3);
  const TruncatedTensor timed_b = signature(transform_time(duplicated), 3);
  CHECK(max_abs_diff(timed_a, timed_b) > 1e-3);
}

TEST_CASE("identity-initialized transform", "[path]") {
  const GroupSpec so3 = GroupSpec::so3();
  Rng rng(35);
  DiscretePath at_identity;
  at_identity.spec = so3;
  at_identity.points.push_back(identity_point(so3));
  at_identity.points.push_back(exp_map(so3, {0.2, 0.1, -0.3}));
  const DiscretePath prefixed = transform_idinit(at_identity);
  CHECK(prefixed.points.size() == 3);
  CHECK(point_max_diff(prefixed.points[0], prefixed.points[1]) == 0.0);

  // Left translation now changes the signature.
  const DiscretePath walk = random_so3_path(rng, 12);
  const Mat3 g_m = sample_uniform_so3(rng);
  const GroupPoint g{std::vector<double>(g_m.begin(), g_m.end())};
  const DiscretePath translated = left_translate(walk, g);
  CHECK(max_abs_diff(signature(walk, 3), signature(translated, 3)) < 1e-10);
  const TruncatedTensor raw = signature(transform_idinit(walk), 3);
  const TruncatedTensor moved = signature(transform_idinit(translated), 3);
  CHECK(max_abs_diff(raw, moved) > 1e-3);

  // Euclidean case prepends the origin.
  const DiscretePath line = transform_idinit(euclidean_path_1d({4.0, 5.0}));
  CHECK(line.points[0].data[0] == 0.0);
  CHECK(line.points[1].data[0] == 4.0);
}

TEST_CASE("sliding window transform", "[path]") {
  Rng rng(36);
  const DiscretePath walk = random_so3_path(rng, 8);
  const DiscretePath same = transform_sliding_window(walk, 0);
  CHECK(same.spec.algebra_dim() == 3);
  CHECK(path_max_diff(same, walk) == 0.0);

  // One lag with identity padding: ((a,e),(b,a),(c,b)).
  DiscretePath abc;
  abc.spec = GroupSpec::so3();
  abc.points.push_back(exp_map(abc.spec, {0.1, 0.0, 0.0}));
  abc.points.push_back(exp_map(abc.spec, {0.0, 0.2, 0.0}));
  abc.points.push_back(exp_map(abc.spec, {0.0, 0.0, 0.3}));
  const DiscretePath lagged = transform_sliding_window(abc, 1, WindowPadding::identity);
  CHECK(lagged.spec.algebra_dim() == 6);
  const GroupPoint id = identity_point(GroupSpec::so3());
  for (int i = 0; i < 9; ++i) {
    CHECK(lagged.points[0].data[static_cast<std::size_t>(9 + i)] == id.data[static_cast<std::size_t>(i)]);
    CHECK(lagged.points[1].data[static_cast<std::size_t>(9 + i)] == abc.points[0].data[static_cast<std::size_t>(i)]);
    CHECK(lagged.points[2].data[static_cast<std::size_t>(9 + i)] == abc.points[1].data[static_cast<std::size_t>(i)]);
    CHECK(lagged.points[2].data[static_cast<std::size_t>(i)] == abc.points[2].data[static_cast<std::size_t>(i)]);
  }

  // Identity padding breaks left-translation invariance, first-point padding
  // preserves it.
  const Mat3 g_m = sample_uniform_so3(rng);
  const GroupPoint g{std::vector<double>(g_m.begin(), g_m.end())};
  const DiscretePath moved = left_translate(walk, g);
  const TruncatedTensor id_a = signature(transform_sliding_window(walk, 1, WindowPadding::identity), 3);
  const TruncatedTensor id_b = signature(transform_sliding_window(moved, 1, WindowPadding::identity), 3);
  CHECK(max_abs_diff(id_a, id_b) > 1e-3);
  const TruncatedTensor fp_a = signature(transform_sliding_window(walk, 1, WindowPadding::first_point), 3);
  const TruncatedTensor fp_b = signature(transform_sliding_window(moved, 1, WindowPadding::first_point), 3);
  CHECK(max_abs_diff(fp_a, fp_b) < 1e-10);
}

TEST_CASE("concatenation and reversal", "[path]") {
  Rng rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    const DiscretePath alpha = random_so3_path(rng, 10);
    const DiscretePath beta = random_so3_path(rng, 7);
    const DiscretePath joined = concat(alpha, beta);
    CHECK(joined.num_steps() == 17);

    // Derivatives concatenate.
    const DerivativePath da = discrete_derivative(alpha);
    const DerivativePath db = discrete_derivative(beta);
    const DerivativePath dj = discrete_derivative(joined);
    double worst = 0.0;
    for (int i = 0; i < 17; ++i) {
      const AlgebraVector& expected =
          i < 10 ? da.values[static_cast<std::size_t>(i)] : db.values[static_cast<std::size_t>(i - 10)];
      for (int k = 0; k < 3; ++k)
        worst = std::max(worst, std::fabs(dj.values[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] -
                                          expected[static_cast<std::size_t>(k)]));
    }
    CHECK(worst < 1e-12);

    // Chen identity and the tree-like reduction of gamma * reverse(gamma).
    const TruncatedTensor product = tensor_product(signature(alpha, 4), signature(beta, 4));
    CHECK(max_abs_diff(signature(joined, 4), product) < 1e-12);
    const TruncatedTensor round = signature(concat(alpha, reverse(alpha)), 4);
    CHECK(max_abs_diff(round, TruncatedTensor::one(3, 4)) < 1e-12);
  }

  DiscretePath wrong;
  wrong.spec = GroupSpec::euclidean(3);
  wrong.points.push_back(GroupPoint{{0, 0, 0}});
  wrong.points.push_back(GroupPoint{{1, 0, 0}});
  CHECK_THROWS_AS(concat(random_so3_path(rng, 3), wrong), DimensionMismatchError);
}

TEST_CASE("path metrics", "[path]") {
  Rng rng(38);
  const DiscretePath gamma = random_so3_path(rng, 15);
  CHECK(path_distance(gamma, gamma) == 0.0);

  DiscretePath single;
  single.spec = GroupSpec::so3();
  single.points.push_back(identity_point(single.spec));
  single.points.push_back(exp_map(single.spec, {0.3, -0.4, 0.12}));
  const double expected = std::sqrt(0.3 * 0.3 + 0.4 * 0.4 + 0.12 * 0.12);
  CHECK(one_variation(single) == Approx(expected));

  // Triangle inequality on random triples.
  for (int trial = 0; trial < 25; ++trial) {
    const DiscretePath a = random_so3_path(rng, 12);
    const DiscretePath b = random_so3_path(rng, 12);
    const DiscretePath c = random_so3_path(rng, 12);
    CHECK(path_distance(a, c) <= path_distance(a, b) + path_distance(b, c) + 1e-12);
  }

  // The Euclidean representation is an isometry for this metric.
  const DiscretePath a = random_so3_path(rng, 12);
  const DiscretePath b = random_so3_path(rng, 12);
  CHECK(path_distance(to_euclidean(a), to_euclidean(b)) ==
        Approx(path_distance(a, b)).margin(1e-12));

  CHECK_THROWS_AS(path_distance(a, random_so3_path(rng, 13)), DimensionMismatchError);
}

TEST_CASE("duplicate point invariance", "[path]") {
  Rng rng(39);
  for (int trial = 0; trial < 10; ++trial) {
    const DiscretePath walk = random_so3_path(rng, 10);
    DiscretePath duplicated = walk;
    const std::size_t where = 1 + rng.bounded(walk.points.size() - 1);
    duplicated.points.insert(duplicated.points.begin() + static_cast<std::ptrdiff_t>(where),
                             walk.points[where - 1]);
    CHECK(max_abs_diff(signature(duplicated, 4), signature(walk, 4)) < 1e-12);
    CHECK(max_abs_diff(discrete_signature(duplicated, 4), discrete_signature(walk, 4)) < 1e-12);
  }
}
