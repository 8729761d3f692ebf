#pragma once

// Representation-agnostic GPT state/effect spaces over R^n, tensor-product
// compositions, and the operational superposition certifier.
//
// Effects are compared as functionals on the span of the extremal states:
// two effect vectors that agree on every extremal state are the same effect,
// even if their coordinates differ (probability-table representations carry
// directions the states never reach).

#include "gptlab/hermitian.hpp"
#include "gptlab/lp.hpp"
#include "gptlab/tolerances.hpp"

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gptlab {

struct GptVector {
  std::vector<double> coords;

  GptVector() = default;
  explicit GptVector(std::vector<double> c) : coords(std::move(c)) {
    for (double v : coords)
      if (!std::isfinite(v)) throw std::invalid_argument("GptVector has a non-finite entry");
  }
  GptVector(std::initializer_list<double> c) : GptVector(std::vector<double>(c)) {}

  std::size_t size() const { return coords.size(); }
  double operator[](std::size_t i) const { return coords[i]; }

  GptVector operator+(const GptVector& o) const { return combine(o, 1.0); }
  GptVector operator-(const GptVector& o) const { return combine(o, -1.0); }
  GptVector operator*(double s) const {
    GptVector out = *this;
    for (double& v : out.coords) v *= s;
    return out;
  }
  double max_abs_diff(const GptVector& o) const {
    require_same(o);
    double m = 0.0;
    for (std::size_t i = 0; i < size(); ++i) m = std::max(m, std::abs(coords[i] - o.coords[i]));
    return m;
  }

 private:
  void require_same(const GptVector& o) const {
    if (o.size() != size()) throw std::invalid_argument("GptVector dimension mismatch");
  }
  GptVector combine(const GptVector& o, double sign) const {
    require_same(o);
    GptVector out = *this;
    for (std::size_t i = 0; i < size(); ++i) out.coords[i] += sign * o.coords[i];
    return out;
  }
};

inline double dot(const GptVector& a, const GptVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a.coords[i] * b.coords[i];
  return s;
}

/// Kronecker product of coordinate vectors; a indexes the slow factor.
inline GptVector kron(const GptVector& a, const GptVector& b) {
  std::vector<double> out;
  out.reserve(a.size() * b.size());
  for (double x : a.coords)
    for (double y : b.coords) out.push_back(x * y);
  return GptVector(std::move(out));
}

// Hermitian embedding. The basis {1, X, Y, Z}/sqrt2 is orthonormal for the
// Hilbert-Schmidt product; its tensor powers give the same for 4x4 operators,
// and kron of coordinate vectors matches the operator tensor product.

namespace detail {
inline std::vector<Eigen::MatrixXcd> hermitian_basis(int dim) {
  const std::array<Eigen::MatrixXcd, 4> single = {
      Eigen::MatrixXcd::Identity(2, 2) / kSqrt2, pauli(Axis::X).matrix() / kSqrt2,
      pauli(Axis::Y).matrix() / kSqrt2, pauli(Axis::Z).matrix() / kSqrt2};
  if (dim == 2) return {single.begin(), single.end()};
  if (dim == 4) {
    std::vector<Eigen::MatrixXcd> out;
    for (const auto& a : single)
      for (const auto& b : single) out.push_back(gptlab::kron(a, b));
    return out;
  }
  throw std::invalid_argument("Hermitian embedding supports dimension 2 or 4");
}
}  // namespace detail

/// Coordinates c_k = Tr[B_k m], so dot(embed(a), embed(b)) = Tr[a b].
inline GptVector embed(const HermitianOperator& m) {
  std::vector<double> c;
  for (const auto& b : detail::hermitian_basis(m.dim())) c.push_back((b * m.matrix()).trace().real());
  return GptVector(std::move(c));
}

inline HermitianOperator to_operator(const GptVector& v) {
  const int dim = v.size() == 4 ? 2 : v.size() == 16 ? 4 : 0;
  if (dim == 0) throw std::invalid_argument("to_operator: expected 4 or 16 coordinates");
  const auto basis = detail::hermitian_basis(dim);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t k = 0; k < basis.size(); ++k) m += v.coords[k] * basis[k];
  return HermitianOperator(m);
}

struct GptSpace {
  std::string label;
  std::size_t ambient_dim = 0;
  std::vector<GptVector> states;
  std::vector<GptVector> effects;
  GptVector unit;
  GptVector zero;
  /// Optional display names, parallel to states / effects (may be empty).
  std::vector<std::string> state_names;
  std::vector<std::string> effect_names;

  std::string state_name(std::size_t i) const {
    return i < state_names.size() ? state_names[i] : "s" + std::to_string(i);
  }
  std::string effect_name(std::size_t i) const {
    return i < effect_names.size() ? effect_names[i] : "e" + std::to_string(i);
  }
};

/// Orthonormal basis (as columns) of the span of the extremal states. Effects
/// projected onto it keep every inner product with the states, so the
/// projection is a faithful low-dimensional coordinate system for functionals.
inline Eigen::MatrixXd state_span_basis(const GptSpace& space) {
  const auto n = static_cast<Eigen::Index>(space.ambient_dim);
  const auto m = static_cast<Eigen::Index>(space.states.size());
  Eigen::MatrixXd s(n, m);
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index i = 0; i < n; ++i) s(i, j) = space.states[static_cast<std::size_t>(j)].coords[static_cast<std::size_t>(i)];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(s, Eigen::ComputeThinU);
  Eigen::Index rank = 0;
  const double cutoff = 1e-10 * std::max(1.0, svd.singularValues().size() ? svd.singularValues()[0] : 0.0);
  for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k)
    if (svd.singularValues()[k] > cutoff) ++rank;
  return svd.matrixU().leftCols(rank);
}

inline std::vector<double> functional_coords(const Eigen::MatrixXd& basis, const GptVector& e) {
  const Eigen::Map<const Eigen::VectorXd> v(e.coords.data(), static_cast<Eigen::Index>(e.size()));
  const Eigen::VectorXd c = basis.transpose() * v;
  return {c.data(), c.data() + c.size()};
}

/// Values of effect e on every extremal state, in state order.
inline std::vector<double> profile(const GptSpace& space, const GptVector& e) {
  std::vector<double> out;
  out.reserve(space.states.size());
  for (const auto& s : space.states) out.push_back(dot(e, s));
  return out;
}

inline bool same_functional(const GptSpace& space, const GptVector& a, const GptVector& b, double tol) {
  for (const auto& s : space.states)
    if (std::abs(dot(a, s) - dot(b, s)) > tol) return false;
  return true;
}

inline bool is_unit_or_zero(const GptSpace& space, const GptVector& e, double tol) {
  return same_functional(space, e, space.unit, tol) || same_functional(space, e, space.zero, tol);
}

/// True iff v is not a convex combination of `others` (L1 LP residual > hull_tol).
inline bool is_extremal(const GptVector& v, const std::vector<GptVector>& others, double hull_tol = Tolerances{}.hull) {
  if (others.empty()) throw std::invalid_argument("is_extremal: empty comparison list");
  std::vector<std::vector<double>> pts;
  pts.reserve(others.size());
  for (const auto& o : others) pts.push_back(o.coords);
  return lp::hull_fit(v.coords, pts).residual > hull_tol;
}

inline bool in_convex_hull(const GptVector& v, const std::vector<GptVector>& points, double hull_tol = Tolerances{}.hull) {
  return !is_extremal(v, points, hull_tol);
}

namespace detail {
/// Indices of the points that are not convex combinations of the remaining ones.
inline std::vector<std::size_t> extremal_indices(const std::vector<std::vector<double>>& pts, double hull_tol) {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::vector<std::vector<double>> rest;
    rest.reserve(pts.size() - 1);
    for (std::size_t j = 0; j < pts.size(); ++j)
      if (j != i) rest.push_back(pts[j]);
    if (rest.empty() || lp::hull_fit(pts[i], rest).residual > hull_tol) keep.push_back(i);
  }
  return keep;
}

inline bool near(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > tol) return false;
  return true;
}
}  // namespace detail

/// Structural problems with a space; empty when all invariants hold.
inline std::vector<std::string> validate_space(const GptSpace& space, const Tolerances& tol = {}) {
  std::vector<std::string> issues;
  auto check_dim = [&](const GptVector& v, const std::string& what) {
    if (v.size() != space.ambient_dim) issues.push_back(what + " has wrong dimension");
  };
  check_dim(space.unit, "unit effect");
  check_dim(space.zero, "zero effect");
  for (std::size_t i = 0; i < space.states.size(); ++i) check_dim(space.states[i], "state " + space.state_name(i));
  for (std::size_t i = 0; i < space.effects.size(); ++i) check_dim(space.effects[i], "effect " + space.effect_name(i));
  if (!issues.empty()) return issues;
  if (space.states.empty()) issues.push_back("no extremal states");
  if (space.effects.empty()) issues.push_back("no extremal effects");

  for (std::size_t i = 0; i < space.states.size(); ++i) {
    if (std::abs(dot(space.unit, space.states[i]) - 1.0) > tol.open)
      issues.push_back("unit effect is not 1 on state " + space.state_name(i));
    for (std::size_t k = 0; k < space.effects.size(); ++k) {
      const double p = dot(space.effects[k], space.states[i]);
      if (p < -tol.open || p > 1.0 + tol.open)
        issues.push_back("effect " + space.effect_name(k) + " on state " + space.state_name(i) + " is outside [0,1]");
    }
  }
  if (!space.states.empty() && !space.effects.empty()) {
    const auto basis = state_span_basis(space);
    std::vector<std::vector<double>> profiles;
    for (const auto& e : space.effects) profiles.push_back(functional_coords(basis, e));
    for (std::size_t k = 0; k < space.effects.size(); ++k) {
      const auto comp = functional_coords(basis, space.unit - space.effects[k]);
      if (lp::hull_fit(comp, profiles).residual > tol.hull)
        issues.push_back("u - " + space.effect_name(k) + " is not in the effect hull");
    }
  }
  return issues;
}

/// Minimal tensor product: product states and product effects (closed under
/// u - e), each list reduced to its extremal members.
inline GptSpace min_tensor(const GptSpace& a, const GptSpace& b, const Tolerances& tol = {}) {
  GptSpace out;
  out.label = a.label + " (x)min " + b.label;
  out.ambient_dim = a.ambient_dim * b.ambient_dim;
  out.unit = kron(a.unit, b.unit);
  out.zero = kron(a.zero, b.zero);

  std::vector<GptVector> states;
  std::vector<std::string> state_names;
  for (std::size_t i = 0; i < a.states.size(); ++i)
    for (std::size_t j = 0; j < b.states.size(); ++j) {
      states.push_back(kron(a.states[i], b.states[j]));
      state_names.push_back(a.state_name(i) + "(x)" + b.state_name(j));
    }
  std::vector<std::vector<double>> state_pts;
  for (const auto& s : states) state_pts.push_back(s.coords);
  for (std::size_t idx : detail::extremal_indices(state_pts, tol.hull)) {
    out.states.push_back(states[idx]);
    out.state_names.push_back(state_names[idx]);
  }

  // Candidate effects: products, then complements; deduplicated as functionals.
  std::vector<GptVector> cands;
  std::vector<std::string> cand_names;
  for (std::size_t i = 0; i < a.effects.size(); ++i)
    for (std::size_t j = 0; j < b.effects.size(); ++j) {
      cands.push_back(kron(a.effects[i], b.effects[j]));
      cand_names.push_back(a.effect_name(i) + "(x)" + b.effect_name(j));
    }
  const std::size_t n_products = cands.size();
  for (std::size_t k = 0; k < n_products; ++k) {
    cands.push_back(out.unit - cands[k]);
    cand_names.push_back("u-[" + cand_names[k] + "]");
  }
  const auto basis = state_span_basis(out);
  std::vector<GptVector> uniq;
  std::vector<std::string> uniq_names;
  std::vector<std::vector<double>> uniq_profiles;
  for (std::size_t k = 0; k < cands.size(); ++k) {
    auto p = functional_coords(basis, cands[k]);
    bool dup = false;
    for (const auto& q : uniq_profiles)
      if (detail::near(p, q, tol.open)) {
        dup = true;
        break;
      }
    if (dup) continue;
    uniq.push_back(cands[k]);
    uniq_names.push_back(cand_names[k]);
    uniq_profiles.push_back(std::move(p));
  }
  for (std::size_t idx : detail::extremal_indices(uniq_profiles, tol.hull)) {
    out.effects.push_back(uniq[idx]);
    out.effect_names.push_back(uniq_names[idx]);
  }
  return out;
}

/// Maximal-composition membership: every product of extremal effects gives a
/// value in [0,1] and the product unit gives 1.
inline bool max_membership(const GptVector& s, const GptSpace& a, const GptSpace& b, const Tolerances& tol = {}) {
  if (s.size() != a.ambient_dim * b.ambient_dim)
    throw std::invalid_argument("max_membership: state dimension does not match the composite");
  if (std::abs(dot(kron(a.unit, b.unit), s) - 1.0) > tol.open) return false;
  for (const auto& ea : a.effects)
    for (const auto& eb : b.effects) {
      const double p = dot(kron(ea, eb), s);
      if (p < -tol.open || p > 1.0 + tol.open) return false;
    }
  return true;
}

struct SuperpositionWitness {
  std::size_t s = 0, r1 = 0, r2 = 0;           ///< indices into extremal states
  std::size_t e_s = 0, f_r1 = 0, f_r2 = 0;     ///< indices into extremal effects
  /// The seven inner products of the definition.
  struct Values {
    double es_s = 0.0, es_r1 = 0.0, es_r2 = 0.0;
    double fr1_r1 = 0.0, fr2_r2 = 0.0;
    double fr1_s = 0.0, fr2_s = 0.0;
  } values;
};

inline SuperpositionWitness::Values witness_values(const GptSpace& space, const SuperpositionWitness& w) {
  const auto ip = [&](std::size_t e, std::size_t s) { return dot(space.effects.at(e), space.states.at(s)); };
  return {ip(w.e_s, w.s), ip(w.e_s, w.r1), ip(w.e_s, w.r2), ip(w.f_r1, w.r1), ip(w.f_r2, w.r2), ip(w.f_r1, w.s),
          ip(w.f_r2, w.s)};
}

inline bool strictly_between(double v, const Tolerances& tol) { return v > tol.open && v < 1.0 - tol.open; }
inline bool is_one(double v, const Tolerances& tol) { return std::abs(v - 1.0) <= tol.open; }

/// Re-derives every condition of the definition from the space itself.
inline bool verify_witness(const GptSpace& space, const SuperpositionWitness& w, const Tolerances& tol = {}) {
  if (w.s == w.r1 || w.s == w.r2 || w.r1 == w.r2) return false;
  if (w.e_s == w.f_r1 || w.e_s == w.f_r2 || w.f_r1 == w.f_r2) return false;
  for (std::size_t e : {w.e_s, w.f_r1, w.f_r2})
    if (e >= space.effects.size() || is_unit_or_zero(space, space.effects[e], tol.open)) return false;
  for (std::size_t s : {w.s, w.r1, w.r2})
    if (s >= space.states.size()) return false;
  const auto v = witness_values(space, w);
  return is_one(v.es_s, tol) && is_one(v.fr1_r1, tol) && is_one(v.fr2_r2, tol) && strictly_between(v.es_r1, tol) &&
         strictly_between(v.es_r2, tol) && strictly_between(v.fr1_s, tol) && strictly_between(v.fr2_s, tol);
}

/// Exhaustive search in lexicographic (s, r1, r2, e_s, f_r1, f_r2) order;
/// returns the first witness. With `require_basis`, f_r1 + f_r2 must equal
/// the unit effect.
inline std::optional<SuperpositionWitness> find_superposition(const GptSpace& space, bool require_basis,
                                                              const Tolerances& tol = {}) {
  const std::size_t ns = space.states.size();
  const std::size_t ne = space.effects.size();
  // ip[e][s]
  std::vector<std::vector<double>> ip(ne, std::vector<double>(ns));
  std::vector<bool> usable(ne);
  for (std::size_t e = 0; e < ne; ++e) {
    for (std::size_t s = 0; s < ns; ++s) ip[e][s] = dot(space.effects[e], space.states[s]);
    usable[e] = !is_unit_or_zero(space, space.effects[e], tol.open);
  }
  for (std::size_t s = 0; s < ns; ++s)
    for (std::size_t r1 = 0; r1 < ns; ++r1) {
      if (r1 == s) continue;
      for (std::size_t r2 = 0; r2 < ns; ++r2) {
        if (r2 == s || r2 == r1) continue;
        for (std::size_t es = 0; es < ne; ++es) {
          if (!usable[es] || !is_one(ip[es][s], tol) || !strictly_between(ip[es][r1], tol) ||
              !strictly_between(ip[es][r2], tol))
            continue;
          for (std::size_t f1 = 0; f1 < ne; ++f1) {
            if (f1 == es || !usable[f1] || !is_one(ip[f1][r1], tol) || !strictly_between(ip[f1][s], tol)) continue;
            for (std::size_t f2 = 0; f2 < ne; ++f2) {
              if (f2 == es || f2 == f1 || !usable[f2] || !is_one(ip[f2][r2], tol) || !strictly_between(ip[f2][s], tol))
                continue;
              if (require_basis && !same_functional(space, space.effects[f1] + space.effects[f2], space.unit, tol.open))
                continue;
              SuperpositionWitness w{s, r1, r2, es, f1, f2, {}};
              w.values = witness_values(space, w);
              return w;
            }
          }
        }
      }
    }
  return std::nullopt;
}

/// Index of the state (or effect) equal to v within tol, if any.
inline std::optional<std::size_t> find_vector(const std::vector<GptVector>& list, const GptVector& v, double tol) {
  for (std::size_t i = 0; i < list.size(); ++i)
    if (list[i].size() == v.size() && list[i].max_abs_diff(v) <= tol) return i;
  return std::nullopt;
}

inline std::optional<std::size_t> find_effect(const GptSpace& space, const GptVector& e, double tol) {
  for (std::size_t i = 0; i < space.effects.size(); ++i)
    if (same_functional(space, space.effects[i], e, tol)) return i;
  return std::nullopt;
}

struct ProductWitness {
  GptSpace composite;  ///< min_tensor(a, b)
  SuperpositionWitness witness;
};

/// Lifts a single-system witness in `a` to the composite a (x) b by tensoring
/// every state with the anchor state s' and every effect with the anchor
/// effect e', where <e', s'> = 1 in b.
inline ProductWitness product_superposition_witness(const GptSpace& a, const GptSpace& b,
                                                    const SuperpositionWitness& local, std::size_t anchor_state,
                                                    std::size_t anchor_effect, const Tolerances& tol = {}) {
  if (anchor_state >= b.states.size() || anchor_effect >= b.effects.size())
    throw std::invalid_argument("product witness: anchor index out of range");
  const GptVector& sp = b.states[anchor_state];
  const GptVector& ep = b.effects[anchor_effect];
  if (!is_one(dot(ep, sp), tol))
    throw std::invalid_argument("product witness: anchor effect does not certify the anchor state");
  if (!verify_witness(a, local, tol)) throw std::invalid_argument("product witness: local witness is not valid");

  ProductWitness out{min_tensor(a, b, tol), {}};
  const double match_tol = 1e-9;
  auto state_index = [&](std::size_t i) {
    auto idx = find_vector(out.composite.states, kron(a.states[i], sp), match_tol);
    if (!idx) throw InvariantViolation("product witness: product state is not extremal in the composite");
    return *idx;
  };
  auto effect_index = [&](std::size_t k) {
    auto idx = find_effect(out.composite, kron(a.effects[k], ep), match_tol);
    if (!idx) throw InvariantViolation("product witness: product effect is not extremal in the composite");
    return *idx;
  };
  SuperpositionWitness& w = out.witness;
  w.s = state_index(local.s);
  w.r1 = state_index(local.r1);
  w.r2 = state_index(local.r2);
  w.e_s = effect_index(local.e_s);
  w.f_r1 = effect_index(local.f_r1);
  w.f_r2 = effect_index(local.f_r2);
  w.values = witness_values(out.composite, w);
  if (!verify_witness(out.composite, w, tol)) throw InvariantViolation("product witness: lifted witness fails");
  return out;
}

}  // namespace gptlab
