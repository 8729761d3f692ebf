#pragma once

// Largest state space compatible with a finite list of qubit effects, in
// Bloch coordinates: each effect e contributes 0 <= Tr[e rho(r)] <= 1, and the
// vertices are found by intersecting every triple of boundary planes.

#include "gptlab/gpt.hpp"
#include "gptlab/hermitian.hpp"
#include "gptlab/tolerances.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

namespace gptlab {

struct LinearInequality {
  enum class Sense { Lower, Upper };  ///< offset + coeffs.r >= 0, or <= 1

  std::array<double, 3> coeffs{};
  double offset = 0.0;
  Sense sense = Sense::Lower;
  std::size_t effect_index = 0;  ///< which input effect produced it

  double value(const BlochVector& r) const {
    return offset + coeffs[0] * r.rx + coeffs[1] * r.ry + coeffs[2] * r.rz;
  }
  double bound() const { return sense == Sense::Lower ? 0.0 : 1.0; }
  /// Signed distance to violation in value units; negative means violated.
  double slack(const BlochVector& r) const { return sense == Sense::Lower ? value(r) : 1.0 - value(r); }
  bool satisfied(const BlochVector& r, double tol) const { return slack(r) >= -tol; }
};

/// Two inequalities per effect (>= 0 then <= 1). Constant forms that hold
/// everywhere (zero and unit effects) are dropped.
inline std::vector<LinearInequality> facets_from_effects(const std::vector<HermitianOperator>& effects) {
  std::vector<LinearInequality> out;
  for (std::size_t k = 0; k < effects.size(); ++k) {
    if (effects[k].dim() != 2) throw std::invalid_argument("facets_from_effects: effects must be 2x2");
    // Tr[e (1 + r.sigma)/2] = c0 + cx rx + cy ry + cz rz
    const auto c = pauli_coefficients(effects[k]);
    const std::array<double, 3> coeffs{c.cx, c.cy, c.cz};
    const bool constant = std::all_of(coeffs.begin(), coeffs.end(), [](double v) { return std::abs(v) < 1e-15; });
    for (auto sense : {LinearInequality::Sense::Lower, LinearInequality::Sense::Upper}) {
      LinearInequality ineq{coeffs, c.c0, sense, k};
      if (constant && ineq.slack(BlochVector{}) >= 0.0) continue;
      out.push_back(ineq);
    }
  }
  return out;
}

struct VertexSet {
  std::vector<BlochVector> vertices;
  std::vector<int> saturated_counts;  ///< inequalities tight at each vertex (within tolerance_used)
  double tolerance_used = 0.0;
};

namespace detail {

struct Plane {
  std::array<double, 3> n{};
  double rhs = 0.0;  ///< n.r = rhs
};

inline double det3(const std::array<double, 3>& a, const std::array<double, 3>& b, const std::array<double, 3>& c) {
  return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0]);
}

/// Boundary planes of the inequalities, unit-normalized, sign-canonical and
/// deduplicated (e >= 0 and (1 - e) <= 1 describe the same plane).
inline std::vector<Plane> boundary_planes(const std::vector<LinearInequality>& ineqs) {
  std::vector<Plane> planes;
  for (const auto& q : ineqs) {
    const double len = std::sqrt(q.coeffs[0] * q.coeffs[0] + q.coeffs[1] * q.coeffs[1] + q.coeffs[2] * q.coeffs[2]);
    if (len < 1e-15) continue;
    Plane p{{q.coeffs[0] / len, q.coeffs[1] / len, q.coeffs[2] / len}, (q.bound() - q.offset) / len};
    for (double v : p.n) {
      if (std::abs(v) > 1e-12) {
        if (v < 0) {
          for (double& w : p.n) w = -w;
          p.rhs = -p.rhs;
        }
        break;
      }
    }
    const bool dup = std::any_of(planes.begin(), planes.end(), [&](const Plane& o) {
      return std::abs(o.n[0] - p.n[0]) < 1e-12 && std::abs(o.n[1] - p.n[1]) < 1e-12 &&
             std::abs(o.n[2] - p.n[2]) < 1e-12 && std::abs(o.rhs - p.rhs) < 1e-12;
    });
    if (!dup) planes.push_back(p);
  }
  return planes;
}

inline int normal_rank(const std::vector<Plane>& planes) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(planes.size()), 3);
  for (std::size_t i = 0; i < planes.size(); ++i)
    for (int j = 0; j < 3; ++j) m(static_cast<Eigen::Index>(i), j) = planes[i].n[j];
  if (planes.empty()) return 0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  lu.setThreshold(1e-10);
  return static_cast<int>(lu.rank());
}

inline bool bloch_less(const BlochVector& a, const BlochVector& b) {
  return std::tie(a.rx, a.ry, a.rz) < std::tie(b.rx, b.ry, b.rz);
}

}  // namespace detail

inline int saturation_count(const std::vector<LinearInequality>& ineqs, const BlochVector& r, double tol) {
  int n = 0;
  for (const auto& q : ineqs)
    if (std::abs(q.slack(r)) <= tol) ++n;
  return n;
}

/// Vertex enumeration by triple-plane intersection. Throws
/// std::invalid_argument when the boundary normals span fewer than 3 dimensions.
inline VertexSet enumerate_vertices(const std::vector<LinearInequality>& ineqs, const Tolerances& tol = {}) {
  const auto planes = detail::boundary_planes(ineqs);
  if (detail::normal_rank(planes) < 3)
    throw std::invalid_argument("enumerate_vertices: need at least 3 independent hyperplanes");

  std::vector<BlochVector> found;
  const std::size_t n = planes.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        const auto& a = planes[i].n;
        const auto& b = planes[j].n;
        const auto& c = planes[k].n;
        const double d = detail::det3(a, b, c);
        if (std::abs(d) <= tol.sing) continue;
        // Cramer's rule.
        const std::array<double, 3> rhs{planes[i].rhs, planes[j].rhs, planes[k].rhs};
        const BlochVector r{detail::det3({rhs[0], a[1], a[2]}, {rhs[1], b[1], b[2]}, {rhs[2], c[1], c[2]}) / d,
                            detail::det3({a[0], rhs[0], a[2]}, {b[0], rhs[1], b[2]}, {c[0], rhs[2], c[2]}) / d,
                            detail::det3({a[0], a[1], rhs[0]}, {b[0], b[1], rhs[1]}, {c[0], c[1], rhs[2]}) / d};
        const bool feasible =
            std::all_of(ineqs.begin(), ineqs.end(), [&](const LinearInequality& q) { return q.satisfied(r, tol.hull); });
        if (!feasible) continue;
        const bool dup = std::any_of(found.begin(), found.end(),
                                     [&](const BlochVector& v) { return v.distance(r) <= tol.dedupe; });
        if (!dup) found.push_back(r);
      }

  VertexSet out;
  out.tolerance_used = tol.hull;
  std::vector<GptVector> pts;
  for (const auto& v : found) pts.push_back(GptVector{v.rx, v.ry, v.rz});
  for (std::size_t i = 0; i < found.size(); ++i) {
    std::vector<GptVector> rest;
    for (std::size_t j = 0; j < found.size(); ++j)
      if (j != i) rest.push_back(pts[j]);
    if (rest.empty() || is_extremal(pts[i], rest, tol.hull)) out.vertices.push_back(found[i]);
  }
  std::sort(out.vertices.begin(), out.vertices.end(), detail::bloch_less);
  for (const auto& v : out.vertices) out.saturated_counts.push_back(saturation_count(ineqs, v, tol.hull));
  return out;
}

struct PlanarPoint {
  double x = 0.0;  ///< r_x
  double z = 0.0;  ///< r_z
};

/// Cross-section of the polytope at fixed r_y, as a counterclockwise polygon
/// in (r_x, r_z). Throws std::domain_error if the plane misses the polytope.
inline std::vector<PlanarPoint> slice(const std::vector<LinearInequality>& ineqs, double fixed_ry,
                                      const Tolerances& tol = {}) {
  // Restrict each inequality to a 2-D form: base + ax x + az z in [lower/upper].
  struct Line {
    double ax, az, rhs;
  };
  std::vector<Line> lines;
  for (const auto& q : ineqs) {
    const double base = q.offset + q.coeffs[1] * fixed_ry;
    const double len = std::hypot(q.coeffs[0], q.coeffs[2]);
    if (len < 1e-15) {
      const double s = q.sense == LinearInequality::Sense::Lower ? base : 1.0 - base;
      if (s < -tol.hull) throw std::domain_error("slice: plane r_y = " + std::to_string(fixed_ry) + " misses the polytope");
      continue;
    }
    lines.push_back({q.coeffs[0], q.coeffs[2], q.bound() - base});
  }
  auto feasible = [&](double x, double z) {
    const BlochVector r{x, fixed_ry, z};
    return std::all_of(ineqs.begin(), ineqs.end(), [&](const LinearInequality& q) { return q.satisfied(r, tol.hull); });
  };
  std::vector<PlanarPoint> pts;
  for (std::size_t i = 0; i < lines.size(); ++i)
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      const double d = lines[i].ax * lines[j].az - lines[i].az * lines[j].ax;
      if (std::abs(d) <= tol.sing) continue;
      const double x = (lines[i].rhs * lines[j].az - lines[i].az * lines[j].rhs) / d;
      const double z = (lines[i].ax * lines[j].rhs - lines[i].rhs * lines[j].ax) / d;
      if (!feasible(x, z)) continue;
      const bool dup = std::any_of(pts.begin(), pts.end(),
                                   [&](const PlanarPoint& p) { return std::hypot(p.x - x, p.z - z) <= tol.dedupe; });
      if (!dup) pts.push_back({x, z});
    }
  if (pts.empty())
    throw std::domain_error("slice: plane r_y = " + std::to_string(fixed_ry) + " misses the polytope");

  // Keep polygon corners only, then order counterclockwise about the centroid.
  std::vector<PlanarPoint> corners;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::vector<GptVector> rest;
    for (std::size_t j = 0; j < pts.size(); ++j)
      if (j != i) rest.push_back(GptVector{pts[j].x, pts[j].z});
    if (rest.empty() || is_extremal(GptVector{pts[i].x, pts[i].z}, rest, tol.hull)) corners.push_back(pts[i]);
  }
  double cx = 0.0, cz = 0.0;
  for (const auto& p : corners) {
    cx += p.x;
    cz += p.z;
  }
  cx /= static_cast<double>(corners.size());
  cz /= static_cast<double>(corners.size());
  std::sort(corners.begin(), corners.end(), [&](const PlanarPoint& a, const PlanarPoint& b) {
    return std::atan2(a.z - cz, a.x - cx) < std::atan2(b.z - cz, b.x - cx);
  });
  return corners;
}

}  // namespace gptlab
