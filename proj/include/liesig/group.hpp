#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "liesig/errors.hpp"
#include "liesig/rng.hpp"

namespace liesig {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<double, 9>;  // row-major

inline constexpr double kAntipodalEps = 1e-6;
inline constexpr double kSkewTol = 1e-9;
inline constexpr double kOrthoTol = 1e-9;

inline Mat3 mat3_identity() { return {1, 0, 0, 0, 1, 0, 0, 0, 1}; }

inline Mat3 mat3_mul(const Mat3& a, const Mat3& b) {
  Mat3 out{};
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) {
      const double aik = a[3 * i + k];
      for (int j = 0; j < 3; ++j) out[3 * i + j] += aik * b[3 * k + j];
    }
  return out;
}

inline Mat3 mat3_transpose(const Mat3& a) {
  return {a[0], a[3], a[6], a[1], a[4], a[7], a[2], a[5], a[8]};
}

inline double mat3_trace(const Mat3& a) { return a[0] + a[4] + a[8]; }

inline double mat3_det(const Mat3& a) {
  return a[0] * (a[4] * a[8] - a[5] * a[7]) -
         a[1] * (a[3] * a[8] - a[5] * a[6]) +
         a[2] * (a[3] * a[7] - a[4] * a[6]);
}

/// Basis coordinates -> skew matrix, in the declared basis of so(3):
/// e1, e2, e3 generate rotations about the z, y and x axes respectively.
inline Mat3 so3_hat(const Vec3& v) {
  return {0.0,  -v[0], v[1],
          v[0],  0.0,  -v[2],
          -v[1], v[2], 0.0};
}

/// Inverse of so3_hat; rejects matrices that are not skew within tolerance.
inline Vec3 so3_vee(const Mat3& m, double skew_tol = kSkewTol) {
  const double max_sym =
      std::max({std::fabs(m[0]), std::fabs(m[4]), std::fabs(m[8]),
                std::fabs(m[1] + m[3]), std::fabs(m[2] + m[6]),
                std::fabs(m[5] + m[7])});
  if (max_sym > skew_tol)
    throw DimensionMismatchError("vee: input is not skew-symmetric within tolerance");
  return {m[3], m[2], m[7]};
}

inline bool is_rotation(const Mat3& r, double tol = kOrthoTol) {
  const Mat3 rrt = mat3_mul(r, mat3_transpose(r));
  double frob = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double d = rrt[3 * i + j] - (i == j ? 1.0 : 0.0);
      frob += d * d;
    }
  return std::sqrt(frob) < tol && mat3_det(r) > 0.0;
}

/// Rodrigues closed form, exp(hat(v)) = I + a K + b K^2 with K = hat(v),
/// a = sin(theta)/theta, b = (1-cos(theta))/theta^2.
inline Mat3 so3_exp(const Vec3& v) {
  const double theta2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
  const double theta = std::sqrt(theta2);
  double a, b;
  if (theta < 1e-4) {
    a = 1.0 - theta2 / 6.0 + theta2 * theta2 / 120.0;
    b = 0.5 - theta2 / 24.0 + theta2 * theta2 / 720.0;
  } else {
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / theta2;
  }
  const Mat3 k = so3_hat(v);
  const Mat3 k2 = mat3_mul(k, k);
  Mat3 out = mat3_identity();
  for (int i = 0; i < 9; ++i) out[i] += a * k[i] + b * k2[i];
  return out;
}

/// Principal logarithm in basis coordinates; the returned vector has norm
/// below pi. Rotations within antipodal_eps of angle pi are refused since no
/// unique nearest logarithm exists there.
inline Vec3 so3_log(const Mat3& r, double antipodal_eps = kAntipodalEps,
                    int step_index = -1) {
  // Skew part of R in basis coordinates equals sin(theta) times the unit
  // axis; recovering theta via atan2 stays well conditioned where acos of
  // the trace does not.
  const Vec3 skew{0.5 * (r[3] - r[1]), 0.5 * (r[2] - r[6]), 0.5 * (r[7] - r[5])};
  const double s =
      std::sqrt(skew[0] * skew[0] + skew[1] * skew[1] + skew[2] * skew[2]);
  const double c = (mat3_trace(r) - 1.0) / 2.0;
  const double theta = std::atan2(s, c);
  if (theta >= std::acos(-1.0) - antipodal_eps)
    throw AntipodalRotationError(
        "rotation angle within antipodal cutoff of pi; logarithm not unique",
        step_index);
  // log(R) = (theta / sin(theta)) * skew; the same computed s appears in the
  // scale and in the axis norm, so their errors cancel.
  double f;
  if (theta < 1e-7) {
    f = 1.0 + theta * theta / 6.0;
  } else {
    f = theta / s;
  }
  return {f * skew[0], f * skew[1], f * skew[2]};
}

/// Matrix of Ad_R on basis coordinates: column k is vee(R hat(e_k) R^T).
/// This is the linear action satisfying R exp(hat(v)) R^T = exp(hat(Ad_R v)).
inline Mat3 so3_adjoint(const Mat3& r) {
  Mat3 out{};
  const Mat3 rt = mat3_transpose(r);
  for (int k = 0; k < 3; ++k) {
    Vec3 e{};
    e[static_cast<std::size_t>(k)] = 1.0;
    const Mat3 conj = mat3_mul(r, mat3_mul(so3_hat(e), rt));
    // Conjugation of a skew matrix stays skew up to roundoff; read the
    // components directly instead of round-tripping the tolerance check.
    out[3 * 0 + k] = conj[3];
    out[3 * 1 + k] = conj[2];
    out[3 * 2 + k] = conj[7];
  }
  return out;
}

/// Haar-uniform rotation via a uniform unit quaternion (four standard
/// normals, normalized, converted to a rotation matrix).
inline Mat3 sample_uniform_so3(Rng& rng) {
  double q[4];
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (double& x : q) {
      x = rng.normal();
      norm2 += x * x;
    }
  } while (norm2 == 0.0);
  const double inv = 1.0 / std::sqrt(norm2);
  const double w = q[0] * inv, x = q[1] * inv, y = q[2] * inv, z = q[3] * inv;
  return {1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
          2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
          2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)};
}

/// Structure constants c[k][i][j] of so(3) in the declared basis,
/// [e_i, e_j] = sum_k c[k][i][j] e_k.
inline const std::array<std::array<std::array<double, 3>, 3>, 3>&
so3_structure_constants() {
  static const auto constants = [] {
    std::array<std::array<std::array<double, 3>, 3>, 3> c{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        Vec3 ei{}, ej{};
        ei[static_cast<std::size_t>(i)] = 1.0;
        ej[static_cast<std::size_t>(j)] = 1.0;
        const Mat3 hi = so3_hat(ei), hj = so3_hat(ej);
        const Mat3 lhs = mat3_mul(hi, hj);
        const Mat3 rhs = mat3_mul(hj, hi);
        Mat3 bracket{};
        for (int t = 0; t < 9; ++t) bracket[t] = lhs[t] - rhs[t];
        const Vec3 coords = so3_vee(bracket);
        for (int k = 0; k < 3; ++k) c[k][i][j] = coords[static_cast<std::size_t>(k)];
      }
    return c;
  }();
  return constants;
}

/// Coordinate Lie bracket on so(3).
inline Vec3 so3_bracket(const Vec3& a, const Vec3& b) {
  const auto& c = so3_structure_constants();
  Vec3 out{};
  for (int k = 0; k < 3; ++k) {
    double acc = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) acc += c[k][i][j] * a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(k)] = acc;
  }
  return out;
}

enum class FactorKind { euclidean, so3 };

struct GroupFactor {
  FactorKind kind = FactorKind::euclidean;
  int dim = 0;  // algebra dimension: so3 factors always 3

  int point_size() const { return kind == FactorKind::so3 ? 9 : dim; }
  bool operator==(const GroupFactor&) const = default;
};

/// Description of a matrix Lie group built from SO(3) and Euclidean factors.
/// Products are kept flattened: algebra coordinates and point blocks are the
/// concatenation over factors in order.
class GroupSpec {
public:
  GroupSpec() = default;

  static GroupSpec so3() {
    GroupSpec s;
    s.factors_.push_back({FactorKind::so3, 3});
    s.finish();
    return s;
  }

  static GroupSpec euclidean(int dim) {
    if (dim < 1) throw DimensionMismatchError("euclidean factor needs dim >= 1");
    GroupSpec s;
    s.factors_.push_back({FactorKind::euclidean, dim});
    s.finish();
    return s;
  }

  static GroupSpec product(const std::vector<GroupSpec>& parts) {
    GroupSpec s;
    for (const auto& p : parts)
      s.factors_.insert(s.factors_.end(), p.factors_.begin(), p.factors_.end());
    if (s.factors_.empty())
      throw DimensionMismatchError("product spec needs at least one factor");
    s.finish();
    return s;
  }

  /// m+1 copies of this spec side by side (sliding-window target).
  static GroupSpec power(const GroupSpec& base, int copies) {
    std::vector<GroupSpec> parts(static_cast<std::size_t>(copies), base);
    return product(parts);
  }

  const std::vector<GroupFactor>& factors() const { return factors_; }
  int algebra_dim() const { return algebra_dim_; }
  int point_size() const { return point_size_; }

  bool operator==(const GroupSpec&) const = default;

private:
  void finish() {
    algebra_dim_ = 0;
    point_size_ = 0;
    for (const auto& f : factors_) {
      algebra_dim_ += f.dim;
      point_size_ += f.point_size();
    }
  }

  std::vector<GroupFactor> factors_;
  int algebra_dim_ = 0;
  int point_size_ = 0;
};

/// A point on the group: concatenated per-factor blocks (9 doubles row-major
/// for an SO(3) factor, dim doubles for a Euclidean factor).
struct GroupPoint {
  std::vector<double> data;
  bool operator==(const GroupPoint&) const = default;
};

/// Lie algebra element in basis coordinates, length = spec.algebra_dim().
using AlgebraVector = std::vector<double>;

namespace detail {
inline Mat3 read_mat3(const std::vector<double>& data, int offset) {
  Mat3 m;
  for (int i = 0; i < 9; ++i) m[static_cast<std::size_t>(i)] = data[static_cast<std::size_t>(offset + i)];
  return m;
}
inline void write_mat3(std::vector<double>& data, int offset, const Mat3& m) {
  for (int i = 0; i < 9; ++i) data[static_cast<std::size_t>(offset + i)] = m[static_cast<std::size_t>(i)];
}
inline Vec3 read_vec3(const AlgebraVector& v, int offset) {
  return {v[static_cast<std::size_t>(offset)], v[static_cast<std::size_t>(offset + 1)],
          v[static_cast<std::size_t>(offset + 2)]};
}
}  // namespace detail

inline GroupPoint identity_point(const GroupSpec& spec) {
  GroupPoint p;
  p.data.assign(static_cast<std::size_t>(spec.point_size()), 0.0);
  int offset = 0;
  for (const auto& f : spec.factors()) {
    if (f.kind == FactorKind::so3) detail::write_mat3(p.data, offset, mat3_identity());
    offset += f.point_size();
  }
  return p;
}

inline GroupPoint multiply(const GroupSpec& spec, const GroupPoint& g,
                           const GroupPoint& h) {
  if (g.data.size() != static_cast<std::size_t>(spec.point_size()) ||
      h.data.size() != g.data.size())
    throw DimensionMismatchError("group multiply: point size mismatch");
  GroupPoint out;
  out.data.resize(g.data.size());
  int offset = 0;
  for (const auto& f : spec.factors()) {
    if (f.kind == FactorKind::so3) {
      detail::write_mat3(out.data, offset,
                         mat3_mul(detail::read_mat3(g.data, offset),
                                  detail::read_mat3(h.data, offset)));
    } else {
      for (int i = 0; i < f.dim; ++i)
        out.data[static_cast<std::size_t>(offset + i)] =
            g.data[static_cast<std::size_t>(offset + i)] + h.data[static_cast<std::size_t>(offset + i)];
    }
    offset += f.point_size();
  }
  return out;
}

inline GroupPoint inverse(const GroupSpec& spec, const GroupPoint& g) {
  GroupPoint out;
  out.data.resize(g.data.size());
  int offset = 0;
  for (const auto& f : spec.factors()) {
    if (f.kind == FactorKind::so3) {
      detail::write_mat3(out.data, offset,
                         mat3_transpose(detail::read_mat3(g.data, offset)));
    } else {
      for (int i = 0; i < f.dim; ++i)
        out.data[static_cast<std::size_t>(offset + i)] = -g.data[static_cast<std::size_t>(offset + i)];
    }
    offset += f.point_size();
  }
  return out;
}

inline GroupPoint exp_map(const GroupSpec& spec, const AlgebraVector& v) {
  if (v.size() != static_cast<std::size_t>(spec.algebra_dim()))
    throw DimensionMismatchError("exp_map: coordinate length mismatch");
  GroupPoint out;
  out.data.resize(static_cast<std::size_t>(spec.point_size()));
  int p_off = 0, a_off = 0;
  for (const auto& f : spec.factors()) {
    if (f.kind == FactorKind::so3) {
      detail::write_mat3(out.data, p_off, so3_exp(detail::read_vec3(v, a_off)));
    } else {
      for (int i = 0; i < f.dim; ++i)
        out.data[static_cast<std::size_t>(p_off + i)] = v[static_cast<std::size_t>(a_off + i)];
    }
    p_off += f.point_size();
    a_off += f.dim;
  }
  return out;
}

inline AlgebraVector log_map(const GroupSpec& spec, const GroupPoint& g,
                             double antipodal_eps = kAntipodalEps,
                             int step_index = -1) {
  AlgebraVector out(static_cast<std::size_t>(spec.algebra_dim()), 0.0);
  int p_off = 0, a_off = 0;
  for (const auto& f : spec.factors()) {
    if (f.kind == FactorKind::so3) {
      const Vec3 v = so3_log(detail::read_mat3(g.data, p_off), antipodal_eps, step_index);
      for (int i = 0; i < 3; ++i) out[static_cast<std::size_t>(a_off + i)] = v[static_cast<std::size_t>(i)];
    } else {
      for (int i = 0; i < f.dim; ++i)
        out[static_cast<std::size_t>(a_off + i)] = g.data[static_cast<std::size_t>(p_off + i)];
    }
    p_off += f.point_size();
    a_off += f.dim;
  }
  return out;
}

/// Coordinates -> concatenated matrix blocks (skew 3x3 per SO(3) factor, the
/// coordinates themselves per Euclidean factor).
inline std::vector<double> hat(const GroupSpec& spec, const AlgebraVector& v) {
  if (v.size() != static_cast<std::size_t>(spec.algebra_dim()))
    throw DimensionMismatchError("hat: coordinate length mismatch");
  std::vector<double> out(static_cast<std::size_t>(spec.point_size()), 0.0);
  int p_off = 0, a_off = 0;
  for (const auto& f : spec.factors()) {
    if (f.kind == FactorKind::so3) {
      detail::write_mat3(out, p_off, so3_hat(detail::read_vec3(v, a_off)));
    } else {
      for (int i = 0; i < f.dim; ++i)
        out[static_cast<std::size_t>(p_off + i)] = v[static_cast<std::size_t>(a_off + i)];
    }
    p_off += f.point_size();
    a_off += f.dim;
  }
  return out;
}

inline AlgebraVector vee(const GroupSpec& spec, const std::vector<double>& blocks,
                         double skew_tol = kSkewTol) {
  if (blocks.size() != static_cast<std::size_t>(spec.point_size()))
    throw DimensionMismatchError("vee: block length mismatch");
  AlgebraVector out(static_cast<std::size_t>(spec.algebra_dim()), 0.0);
  int p_off = 0, a_off = 0;
  for (const auto& f : spec.factors()) {
    if (f.kind == FactorKind::so3) {
      const Vec3 v = so3_vee(detail::read_mat3(blocks, p_off), skew_tol);
      for (int i = 0; i < 3; ++i) out[static_cast<std::size_t>(a_off + i)] = v[static_cast<std::size_t>(i)];
    } else {
      for (int i = 0; i < f.dim; ++i)
        out[static_cast<std::size_t>(a_off + i)] = blocks[static_cast<std::size_t>(p_off + i)];
    }
    p_off += f.point_size();
    a_off += f.dim;
  }
  return out;
}

/// Basis directions whose dual left-invariant 1-form is closed: exactly those
/// with vanishing structure constants, i.e. every Euclidean coordinate and no
/// SO(3) coordinate. Indices are 0-based over the concatenated coordinates.
inline std::vector<int> closed_form_indices(const GroupSpec& spec) {
  std::vector<int> out;
  int a_off = 0;
  for (const auto& f : spec.factors()) {
    if (f.kind == FactorKind::euclidean) {
      for (int i = 0; i < f.dim; ++i) out.push_back(a_off + i);
    } else {
      const auto& c = so3_structure_constants();
      for (int k = 0; k < 3; ++k) {
        bool zero = true;
        for (int i = 0; i < 3 && zero; ++i)
          for (int j = 0; j < 3 && zero; ++j)
            if (c[k][i][j] != 0.0) zero = false;
        if (zero) out.push_back(a_off + k);
      }
    }
    a_off += f.dim;
  }
  return out;
}

/// Checks the SO(3) block invariants (orthogonality, positive determinant)
/// and finiteness of Euclidean blocks.
inline void validate_point(const GroupSpec& spec, const GroupPoint& p,
                           double tol = kOrthoTol) {
  if (p.data.size() != static_cast<std::size_t>(spec.point_size()))
    throw DimensionMismatchError("point size does not match spec");
  int offset = 0;
  for (const auto& f : spec.factors()) {
    if (f.kind == FactorKind::so3) {
      if (!is_rotation(detail::read_mat3(p.data, offset), tol))
        throw DimensionMismatchError("SO(3) block is not a rotation within tolerance");
    } else {
      for (int i = 0; i < f.dim; ++i)
        if (!std::isfinite(p.data[static_cast<std::size_t>(offset + i)]))
          throw DimensionMismatchError("non-finite Euclidean coordinate");
    }
    offset += f.point_size();
  }
}

/// Haar-uniform point: uniform rotation per SO(3) factor. Euclidean factors
/// carry no uniform probability measure and are rejected.
inline GroupPoint sample_uniform(const GroupSpec& spec, Rng& rng) {
  GroupPoint out;
  out.data.assign(static_cast<std::size_t>(spec.point_size()), 0.0);
  int offset = 0;
  for (const auto& f : spec.factors()) {
    if (f.kind != FactorKind::so3)
      throw DimensionMismatchError("uniform sampling requires a compact (SO(3)) spec");
    detail::write_mat3(out.data, offset, sample_uniform_so3(rng));
    offset += f.point_size();
  }
  return out;
}

}  // namespace liesig
