#pragma once

// Built-in state/effect spaces: classical bit, gbit, GLT, the box-world
// fixture with four PR boxes, the restricted qubit, and the Hermitian
// Hex (control side) and Square (cube) spaces derived from their effect lists.

#include "gptlab/gpt.hpp"
#include "gptlab/hermitian.hpp"
#include "gptlab/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

namespace gptlab {

struct NamedOperator {
  std::string name;
  HermitianOperator op;
};

/// (1 + sign * n.sigma / |n|) / 2
inline HermitianOperator rank_one_projector(double nx, double ny, double nz, int sign) {
  const double len = std::sqrt(nx * nx + ny * ny + nz * nz);
  if (len == 0.0) throw std::invalid_argument("rank_one_projector: zero direction");
  return bloch_to_operator({sign * nx / len, sign * ny / len, sign * nz / len});
}

namespace effects {

/// Extremal effects of the Hex control system, excluding unit and zero, in the
/// order (X+Z)/√2 ±, (X−Z)/√2 ±, Z+, (X+Y)/√2 ±, (X−Y)/√2 ±, Z−.
inline std::vector<NamedOperator> hex() {
  return {
      {"P+[(X+Z)/√2]", rank_one_projector(1, 0, 1, +1)}, {"P-[(X+Z)/√2]", rank_one_projector(1, 0, 1, -1)},
      {"P+[(X-Z)/√2]", rank_one_projector(1, 0, -1, +1)}, {"P-[(X-Z)/√2]", rank_one_projector(1, 0, -1, -1)},
      {"P+[Z]", rank_one_projector(0, 0, 1, +1)},         {"P+[(X+Y)/√2]", rank_one_projector(1, 1, 0, +1)},
      {"P-[(X+Y)/√2]", rank_one_projector(1, 1, 0, -1)},  {"P+[(X-Y)/√2]", rank_one_projector(1, -1, 0, +1)},
      {"P-[(X-Y)/√2]", rank_one_projector(1, -1, 0, -1)}, {"P-[Z]", rank_one_projector(0, 0, 1, -1)},
  };
}

/// Extremal effects of the Square system, excluding unit and zero.
inline std::vector<NamedOperator> square() {
  return {
      {"P+[X]", rank_one_projector(1, 0, 0, +1)}, {"P-[X]", rank_one_projector(1, 0, 0, -1)},
      {"P+[Y]", rank_one_projector(0, 1, 0, +1)}, {"P-[Y]", rank_one_projector(0, 1, 0, -1)},
      {"P+[Z]", rank_one_projector(0, 0, 1, +1)}, {"P-[Z]", rank_one_projector(0, 0, 1, -1)},
  };
}

inline std::vector<HermitianOperator> operators(const std::vector<NamedOperator>& list) {
  std::vector<HermitianOperator> out;
  for (const auto& n : list) out.push_back(n.op);
  return out;
}

}  // namespace effects

/// Human-readable Bloch label using the symbols √2 and r = √2-1 where exact.
inline std::string bloch_label(const BlochVector& v) {
  auto one = [](double x) -> std::string {
    struct Known {
      double value;
      const char* text;
    };
    static const Known known[] = {{0.0, "0"},   {1.0, "1"},   {-1.0, "-1"},  {kSqrt2, "√2"},
                                  {-kSqrt2, "-√2"}, {kHexR, "r"}, {-kHexR, "-r"}};
    for (const auto& k : known)
      if (std::abs(x - k.value) < 1e-9) return k.text;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
  };
  return "(" + one(v.rx) + "," + one(v.ry) + "," + one(v.rz) + ")";
}

inline GptSpace hermitian_space(std::string label, const std::vector<NamedOperator>& states,
                                const std::vector<NamedOperator>& effects_no_trivial) {
  if (states.empty()) throw std::invalid_argument("hermitian_space: no states");
  const int dim = states.front().op.dim();
  GptSpace s;
  s.label = std::move(label);
  s.ambient_dim = static_cast<std::size_t>(dim * dim);
  for (const auto& st : states) {
    s.states.push_back(embed(st.op));
    s.state_names.push_back(st.name);
  }
  for (const auto& e : effects_no_trivial) {
    s.effects.push_back(embed(e.op));
    s.effect_names.push_back(e.name);
  }
  s.unit = embed(HermitianOperator::identity(dim));
  s.zero = embed(HermitianOperator::zero(dim));
  s.effects.push_back(s.unit);
  s.effect_names.push_back("unit");
  s.effects.push_back(s.zero);
  s.effect_names.push_back("zero");
  return s;
}

/// Largest qubit state space compatible with the given effects (plus unit and zero).
inline GptSpace derived_qubit_space(std::string label, const std::vector<NamedOperator>& effect_list,
                                    const Tolerances& tol = {}) {
  const auto vs = enumerate_vertices(facets_from_effects(effects::operators(effect_list)), tol);
  std::vector<NamedOperator> states;
  for (const auto& v : vs.vertices) states.push_back({bloch_label(v), bloch_to_operator(v)});
  return hermitian_space(std::move(label), states, effect_list);
}

namespace spaces {

inline GptSpace classical_bit() {
  GptSpace s;
  s.label = "classical-bit";
  s.ambient_dim = 2;
  s.states = {{1, 0}, {0, 1}};
  s.effects = {{1, 0}, {0, 1}, {0, 0}, {1, 1}};
  s.effect_names = {"[1,0]", "[0,1]", "zero", "unit"};
  s.unit = {1, 1};
  s.zero = {0, 0};
  return s;
}

/// Vectors are (p(0|0), p(1|0), p(0|1), p(1|1)).
inline GptSpace gbit() {
  GptSpace s;
  s.label = "gbit";
  s.ambient_dim = 4;
  s.states = {{1, 0, 1, 0}, {1, 0, 0, 1}, {0, 1, 1, 0}, {0, 1, 0, 1}};
  s.state_names = {"g00", "g01", "g10", "g11"};
  s.effects = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {0, 0, 0, 0}, {1, 1, 0, 0}};
  s.effect_names = {"[0|0]", "[1|0]", "[0|1]", "[1|1]", "zero", "unit"};
  s.unit = {1, 1, 0, 0};
  s.zero = {0, 0, 0, 0};
  return s;
}

inline GptSpace glt(const Tolerances& tol = {}) {
  GptSpace s = min_tensor(gbit(), gbit(), tol);
  s.label = "GLT";
  return s;
}

namespace detail {
/// Flattens a 4x4 table whose rows are (x, a) and columns (y, b), row-major.
inline GptVector table(std::initializer_list<std::initializer_list<double>> rows, double scale = 1.0) {
  std::vector<double> v;
  for (const auto& r : rows)
    for (double x : r) v.push_back(scale * x);
  if (v.size() != 16) throw std::logic_error("box-world table must be 4x4");
  return GptVector(std::move(v));
}
}  // namespace detail

/// Four PR boxes and four wiring effects of bipartite box world, plus unit and zero.
inline GptSpace boxworld_iii() {
  using detail::table;
  GptSpace s;
  s.label = "boxworld-III";
  s.ambient_dim = 16;
  s.states = {
      table({{1, 0, 1, 0}, {0, 1, 0, 1}, {1, 0, 0, 1}, {0, 1, 1, 0}}, 0.5),
      table({{0, 1, 0, 1}, {1, 0, 1, 0}, {0, 1, 1, 0}, {1, 0, 0, 1}}, 0.5),
      table({{1, 0, 0, 1}, {0, 1, 1, 0}, {1, 0, 1, 0}, {0, 1, 0, 1}}, 0.5),
      table({{0, 1, 1, 0}, {1, 0, 0, 1}, {0, 1, 0, 1}, {1, 0, 1, 0}}, 0.5),
  };
  s.state_names = {"PR1", "PR2", "PR1'", "PR2'"};
  s.unit = kron(gbit().unit, gbit().unit);
  s.zero = GptVector(std::vector<double>(16, 0.0));
  s.effects = {
      table({{0, 0, 0, 0}, {0, 0, 0, 0}, {1, 0, 0, 0}, {0, 0, 1, 0}}),
      table({{0, 0, 0, 0}, {0, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}}),
      table({{0, 0, 0, 1}, {0, 1, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}}),
      table({{0, 0, 1, 0}, {1, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}}),
      s.unit,
      s.zero,
  };
  s.effect_names = {"e1", "e2", "e1'", "e2'", "unit", "zero"};
  return s;
}

/// Qubit restricted to the Z and X eigenstates, with the same projectors as effects.
inline GptSpace qubit() {
  const std::vector<NamedOperator> p = {
      {"|0><0|", HermitianOperator::projector(kets::zero())},
      {"|1><1|", HermitianOperator::projector(kets::one())},
      {"|+><+|", HermitianOperator::projector(kets::plus())},
      {"|-><-|", HermitianOperator::projector(kets::minus())},
  };
  return hermitian_space("qubit", p, p);
}

inline GptSpace hex(const Tolerances& tol = {}) { return derived_qubit_space("hex", effects::hex(), tol); }
inline GptSpace square(const Tolerances& tol = {}) { return derived_qubit_space("square", effects::square(), tol); }

}  // namespace spaces

/// Closed-form vertex lists used to diff enumeration output.
namespace reference {

/// (±√2,0,0), (0,±√2,±1), (±r,±1,±1), sorted like enumerate_vertices output.
inline std::vector<BlochVector> hex_vertices() {
  std::vector<BlochVector> v = {{kSqrt2, 0, 0}, {-kSqrt2, 0, 0}};
  for (int sy : {-1, 1})
    for (int sz : {-1, 1}) v.push_back({0, sy * kSqrt2, static_cast<double>(sz)});
  for (int sx : {-1, 1})
    for (int sy : {-1, 1})
      for (int sz : {-1, 1}) v.push_back({sx * kHexR, static_cast<double>(sy), static_cast<double>(sz)});
  std::sort(v.begin(), v.end(), detail::bloch_less);
  return v;
}

inline std::vector<BlochVector> cube_vertices() {
  std::vector<BlochVector> v;
  for (int sx : {-1, 1})
    for (int sy : {-1, 1})
      for (int sz : {-1, 1}) v.push_back({static_cast<double>(sx), static_cast<double>(sy), static_cast<double>(sz)});
  return v;
}

/// Expected vertices for "hex" and "square"; nullopt for other labels.
inline std::optional<std::vector<BlochVector>> vertices_for(const std::string& label) {
  if (label == "hex") return hex_vertices();
  if (label == "square") return cube_vertices();
  return std::nullopt;
}

/// Effect list whose compatible state space defines the labelled system.
inline std::optional<std::vector<NamedOperator>> effects_for(const std::string& label) {
  if (label == "hex") return effects::hex();
  if (label == "square") return effects::square();
  return std::nullopt;
}

}  // namespace reference

/// The states and effects used to show that the Hex system admits superposition.
namespace hex_witness {
inline HermitianOperator s1() { return bloch_to_operator({kSqrt2, 0, 0}); }
inline HermitianOperator s2() { return bloch_to_operator({-kSqrt2, 0, 0}); }
inline HermitianOperator r1() { return bloch_to_operator({kHexR, 1, 1}); }
inline HermitianOperator r2() { return bloch_to_operator({-kHexR, -1, -1}); }
/// (1 - (Z - X)/√2) / 2
inline HermitianOperator f1() { return rank_one_projector(1, 0, -1, +1); }
/// (1 + (Z - X)/√2) / 2
inline HermitianOperator f2() { return rank_one_projector(1, 0, -1, -1); }
/// (1 + Z) / 2
inline HermitianOperator f1p() { return rank_one_projector(0, 0, 1, +1); }
/// (1 - Z) / 2
inline HermitianOperator f2p() { return rank_one_projector(0, 0, 1, -1); }

/// The witness (s1, r1, r2; f1, f1', f2') located inside a space that contains
/// those states and effects. Throws std::invalid_argument if any is missing.
inline SuperpositionWitness locate(const GptSpace& space, double tol = 1e-9) {
  auto state = [&](const HermitianOperator& op) {
    auto i = find_vector(space.states, embed(op), tol);
    if (!i) throw std::invalid_argument("witness state not found in " + space.label);
    return *i;
  };
  auto effect = [&](const HermitianOperator& op) {
    auto i = find_effect(space, embed(op), tol);
    if (!i) throw std::invalid_argument("witness effect not found in " + space.label);
    return *i;
  };
  SuperpositionWitness w{state(s1()), state(r1()), state(r2()), effect(f1()), effect(f1p()), effect(f2p()), {}};
  w.values = witness_values(space, w);
  return w;
}
}  // namespace hex_witness

namespace spaces {
inline GptSpace hex_lemma1() {
  using namespace hex_witness;
  return hermitian_space("hex-lemma1", {{"s1", s1()}, {"s2", s2()}, {"r1", r1()}, {"r2", r2()}},
                         {{"f1", f1()}, {"f2", f2()}, {"f1'", f1p()}, {"f2'", f2p()}});
}

inline std::vector<std::string> labels() {
  return {"classical-bit", "gbit", "glt", "boxworld-III", "qubit", "hex", "square", "hex-lemma1", "hexsquare-min"};
}

/// Throws std::invalid_argument for an unknown label.
inline GptSpace by_label(const std::string& label, const Tolerances& tol = {}) {
  if (label == "classical-bit") return classical_bit();
  if (label == "gbit") return gbit();
  if (label == "glt" || label == "GLT") return glt(tol);
  if (label == "boxworld-III" || label == "boxworld") return boxworld_iii();
  if (label == "qubit") return qubit();
  if (label == "hex") return hex(tol);
  if (label == "square") return square(tol);
  if (label == "hex-lemma1") return hex_lemma1();
  if (label == "hexsquare-min") return min_tensor(hex(tol), square(tol), tol);
  throw std::invalid_argument("unknown space label: " + label);
}
}  // namespace spaces

}  // namespace gptlab
