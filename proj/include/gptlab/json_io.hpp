#pragma once

// JSON and CSV import/export for spaces, scenarios, vertex sets, reports and
// distributions. Parsing failures raise ParseError.

#include "gptlab/drf.hpp"
#include "gptlab/gpt.hpp"
#include "gptlab/hermitian.hpp"
#include "gptlab/polytope.hpp"
#include "gptlab/spaces.hpp"
#include "gptlab/switch.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace gptlab::io {

using json = nlohmann::ordered_json;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rounded to 12 decimals for reports.
inline double report_value(double v) {
  const double r = std::round(v * 1e12) / 1e12;
  return r == 0.0 ? 0.0 : r;  // no "-0"
}

/// Drops the sign of negative zero.
inline double unsigned_zero(double v) { return v == 0.0 ? 0.0 : v; }

inline std::string format17(double v) {
  v = unsigned_zero(v);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Indented dump with every all-numeric array kept on one line.
inline std::string dump_compact(const json& j) {
  const std::string text = j.dump(2);
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '[') {
      const std::size_t close = text.find_first_of("[]", i + 1);
      if (close != std::string::npos && text[close] == ']') {
        const std::string body = text.substr(i + 1, close - i - 1);
        if (body.find_first_not_of("0123456789.eE+-, \n") == std::string::npos) {
          out += '[';
          bool space = false;
          for (char c : body) {
            if (c == ' ' || c == '\n') {
              space = true;
              continue;
            }
            if (space && out.back() == ',') out += ' ';
            space = false;
            out += c;
          }
          out += ']';
          i = close;
          continue;
        }
      }
    }
    out += text[i];
  }
  return out + "\n";
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

// ---- spaces -------------------------------------------------------------

/// {label, ambient_dim, states, effects, unit, zero, state_names, effect_names};
/// numbers printed with 17 significant digits.
inline std::string space_to_json(const GptSpace& s) {
  auto vec = [](const GptVector& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.coords.size(); ++i) out += (i ? ", " : "") + format17(v.coords[i]);
    return out + "]";
  };
  auto vecs = [&](const std::vector<GptVector>& list) {
    std::string out = "[";
    for (std::size_t i = 0; i < list.size(); ++i) out += std::string(i ? ",\n    " : "\n    ") + vec(list[i]);
    return out + (list.empty() ? "]" : "\n  ]");
  };
  auto names = [](const std::vector<std::string>& list) { return json(list).dump(); };
  std::ostringstream os;
  os << "{\n  \"label\": " << json(s.label).dump() << ",\n  \"ambient_dim\": " << s.ambient_dim
     << ",\n  \"states\": " << vecs(s.states) << ",\n  \"effects\": " << vecs(s.effects)
     << ",\n  \"unit\": " << vec(s.unit) << ",\n  \"zero\": " << vec(s.zero)
     << ",\n  \"state_names\": " << names(s.state_names) << ",\n  \"effect_names\": " << names(s.effect_names)
     << "\n}\n";
  return os.str();
}

inline GptSpace space_from_json(const json& j) {
  try {
    GptSpace s;
    s.label = j.at("label").get<std::string>();
    s.ambient_dim = j.at("ambient_dim").get<std::size_t>();
    auto vec = [&](const json& v) {
      auto c = v.get<std::vector<double>>();
      if (c.size() != s.ambient_dim) throw ParseError("vector length does not match ambient_dim");
      return GptVector(std::move(c));
    };
    for (const auto& v : j.at("states")) s.states.push_back(vec(v));
    for (const auto& v : j.at("effects")) s.effects.push_back(vec(v));
    s.unit = vec(j.at("unit"));
    s.zero = j.contains("zero") ? vec(j.at("zero")) : GptVector(std::vector<double>(s.ambient_dim, 0.0));
    if (j.contains("state_names")) s.state_names = j.at("state_names").get<std::vector<std::string>>();
    if (j.contains("effect_names")) s.effect_names = j.at("effect_names").get<std::vector<std::string>>();
    if (s.states.empty()) throw ParseError("space has no states");
    return s;
  } catch (const json::exception& e) {
    throw ParseError(std::string("space JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("space JSON: ") + e.what());
  }
}

// ---- complex values, kets, operators -------------------------------------

inline json complex_to_json(Complex c) { return json::array({c.real(), c.imag()}); }

inline Complex complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw ParseError("complex value must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline json ket_to_json(const KetVector& k) {
  json out = json::array();
  for (int i = 0; i < k.dim(); ++i) out.push_back(complex_to_json(k[i]));
  return out;
}

inline KetVector ket_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("ket must be a non-empty array of [re, im]");
  Eigen::VectorXcd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = complex_from_json(j[i]);
  return KetVector(v);
}

inline json operator_to_json(const HermitianOperator& m) {
  json out = json::array();
  for (int i = 0; i < m.dim(); ++i) {
    json row = json::array();
    for (int k = 0; k < m.dim(); ++k) row.push_back(complex_to_json(m(i, k)));
    out.push_back(row);
  }
  return out;
}

inline HermitianOperator operator_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("operator must be a square array of [re, im]");
  const auto n = static_cast<Eigen::Index>(j.size());
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) throw ParseError("operator rows must have equal length");
    for (Eigen::Index k = 0; k < n; ++k) m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)]);
  }
  try {
    return HermitianOperator(m);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

// ---- scenarios ------------------------------------------------------------

inline json lab_a_to_json(const LabAOp& lab) {
  return {{"measure", {ket_to_json(lab.measure[0]), ket_to_json(lab.measure[1])}},
          {"prepare", {ket_to_json(lab.prepare[0]), ket_to_json(lab.prepare[1])}}};
}

inline LabAOp lab_a_from_json(const json& j) {
  const auto& m = j.at("measure");
  const auto& p = j.at("prepare");
  if (m.size() != 2 || p.size() != 2) throw ParseError("lab A needs two measurement and two preparation kets");
  return {{ket_from_json(m[0]), ket_from_json(m[1])}, {ket_from_json(p[0]), ket_from_json(p[1])}};
}

/// Settings are written as ket pairs when projective and rank-1, else as effect pairs.
inline json lab_measurement_to_json(const LabMeasurement& lab) {
  json settings = json::array();
  for (int s = 0; s < static_cast<int>(lab.settings()); ++s) {
    const auto k0 = lab.ket(s, 0);
    const auto k1 = lab.ket(s, 1);
    if (k0 && k1)
      settings.push_back({{"kets", {ket_to_json(*k0), ket_to_json(*k1)}}});
    else
      settings.push_back({{"effects", {operator_to_json(lab.effect(s, 0)), operator_to_json(lab.effect(s, 1))}}});
  }
  return {{"settings", settings}};
}

inline LabMeasurement lab_measurement_from_json(const json& j) {
  const auto& settings = j.at("settings");
  if (!settings.is_array() || settings.size() != 2) throw ParseError("a measurement lab needs exactly two settings");
  std::vector<std::array<HermitianOperator, 2>> effects;
  for (const auto& s : settings) {
    if (s.contains("kets")) {
      const auto& k = s.at("kets");
      if (k.size() != 2) throw ParseError("each setting needs two kets");
      const auto k0 = ket_from_json(k[0]);
      const auto k1 = ket_from_json(k[1]);
      if (!k0.is_normalized() || !k1.is_normalized() || std::abs(k0.braket(k1)) > kDefaultTolerance)
        throw ParseError("measurement kets must be orthonormal");
      effects.push_back({HermitianOperator::projector(k0), HermitianOperator::projector(k1)});
    } else {
      const auto& e = s.at("effects");
      if (e.size() != 2) throw ParseError("each setting needs two effects");
      effects.push_back({operator_from_json(e[0]), operator_from_json(e[1])});
    }
  }
  return LabMeasurement::from_effects(effects);
}

inline json scenario_to_json(const SwitchScenario& s) {
  json j;
  j["name"] = s.name;
  j["control_basis"] = {ket_to_json(s.control_basis[0]), ket_to_json(s.control_basis[1])};
  j["shared_state"] = operator_to_json(s.shared_state);
  j["target_init"] = ket_to_json(s.target_init);
  j["labA1"] = lab_a_to_json(s.labA1);
  j["labA2"] = lab_a_to_json(s.labA2);
  j["labC"] = lab_measurement_to_json(s.labC);
  j["labB"] = lab_measurement_to_json(s.labB);
  if (s.post_process) {
    const auto builtin = PostProcess::announce_a1_when_x2();
    if (s.post_process->map == builtin.map)
      j["post_process"] = builtin.name;
    else
      j["post_process"] = {{"name", s.post_process->name},
                           {"table", std::vector<int>(s.post_process->map.begin(), s.post_process->map.end())}};
  } else {
    j["post_process"] = nullptr;
  }
  if (s.local_spaces) j["local_spaces"] = {s.local_spaces->first, s.local_spaces->second};
  return j;
}

inline SwitchScenario scenario_from_json(const json& j) {
  try {
    SwitchScenario s;
    s.name = j.value("name", std::string("scenario"));
    const auto& cb = j.at("control_basis");
    if (cb.size() != 2) throw ParseError("control_basis needs two kets");
    s.control_basis = {ket_from_json(cb[0]), ket_from_json(cb[1])};
    s.shared_state = operator_from_json(j.at("shared_state"));
    s.target_init = ket_from_json(j.at("target_init"));
    s.labA1 = lab_a_from_json(j.at("labA1"));
    s.labA2 = lab_a_from_json(j.at("labA2"));
    s.labC = lab_measurement_from_json(j.at("labC"));
    s.labB = lab_measurement_from_json(j.at("labB"));
    if (j.contains("post_process") && !j.at("post_process").is_null()) {
      const auto& pp = j.at("post_process");
      if (pp.is_string()) {
        if (pp.get<std::string>() != PostProcess::announce_a1_when_x2().name)
          throw ParseError("unknown post_process '" + pp.get<std::string>() + "'");
        s.post_process = PostProcess::announce_a1_when_x2();
      } else {
        s.post_process = PostProcess::from_table(pp.value("name", std::string("custom")),
                                                 pp.at("table").get<std::vector<int>>());
      }
    }
    if (j.contains("local_spaces")) {
      const auto ls = j.at("local_spaces").get<std::vector<std::string>>();
      if (ls.size() != 2) throw ParseError("local_spaces needs two labels");
      s.local_spaces = {{ls[0], ls[1]}};
    }
    s.validate();
    return s;
  } catch (const json::exception& e) {
    throw ParseError(std::string("scenario JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("scenario JSON: ") + e.what());
  }
}

// ---- effects files for enumeration ----------------------------------------

/// {"effects": [op, ...]} with 2x2 operators, or {"bloch_effects": [[c0,cx,cy,cz], ...]}.
inline std::vector<HermitianOperator> effects_from_json(const json& j) {
  try {
    std::vector<HermitianOperator> out;
    if (j.contains("effects"))
      for (const auto& e : j.at("effects")) out.push_back(operator_from_json(e));
    if (j.contains("bloch_effects"))
      for (const auto& e : j.at("bloch_effects")) {
        const auto c = e.get<std::vector<double>>();
        if (c.size() != 4) throw ParseError("bloch_effects entries are [c0, cx, cy, cz]");
        out.push_back(c[0] * HermitianOperator::identity(2) + c[1] * pauli(Axis::X) + c[2] * pauli(Axis::Y) +
                      c[3] * pauli(Axis::Z));
      }
    for (const auto& e : out)
      if (e.dim() != 2) throw ParseError("effects must be 2x2");
    return out;
  } catch (const json::exception& e) {
    throw ParseError(std::string("effects JSON: ") + e.what());
  }
}

// ---- vertex sets -----------------------------------------------------------

inline json inequality_to_json(const LinearInequality& q) {
  return {{"effect_index", q.effect_index},
          {"coeffs", {q.coeffs[0], q.coeffs[1], q.coeffs[2]}},
          {"offset", q.offset},
          {"sense", q.sense == LinearInequality::Sense::Lower ? ">=0" : "<=1"}};
}

inline json vertex_set_to_json(const std::vector<LinearInequality>& ineqs, const VertexSet& vs) {
  json j;
  j["inequalities"] = json::array();
  for (const auto& q : ineqs) j["inequalities"].push_back(inequality_to_json(q));
  j["vertices"] = json::array();
  for (const auto& v : vs.vertices)
    j["vertices"].push_back({unsigned_zero(v.rx), unsigned_zero(v.ry), unsigned_zero(v.rz)});
  j["saturated_counts"] = vs.saturated_counts;
  j["tolerance_used"] = vs.tolerance_used;
  return j;
}

// ---- reports ---------------------------------------------------------------

inline json report_to_json(const InequalityReport& r, const std::string& strategy, const std::string& scenario = {}) {
  json terms = json::array();
  for (std::size_t i = 0; i < r.term_values.size(); ++i)
    terms.push_back({{"label", r.term_labels[i]}, {"value", report_value(r.term_values[i])}});
  json j;
  j["inequality_id"] = r.inequality_id;
  if (!scenario.empty()) j["scenario"] = scenario;
  j["terms"] = terms;
  j["total"] = report_value(r.total);
  j["bound"] = r.bound;
  j["algebraic_bound"] = r.algebraic_bound;
  j["violated"] = r.violated;
  j["game_term"] = report_value(r.game_value());
  j["strategy_descriptor"] = strategy;
  return j;
}

inline std::string summary_csv_header() { return "scenario,inequality_id,total,bound,violated\n"; }

inline std::string summary_csv_row(const std::string& scenario, const InequalityReport& r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f", r.total);
  return scenario + "," + std::to_string(r.inequality_id) + "," + buf + ",1.75," + (r.violated ? "true" : "false") + "\n";
}

// ---- distributions and slices -----------------------------------------------

inline std::string distribution_csv(const ConditionalDistribution& d) {
  std::string out = "x1,x2,y,z,a1,a2,b,c,p\n";
  char buf[128];
  for_each_event([&](const SwitchEvent& e) {
    std::snprintf(buf, sizeof buf, "%d,%d,%d,%d,%d,%d,%d,%d,%.17g\n", e.x1, e.x2, e.y, e.z, e.a1, e.a2, e.b, e.c,
                  unsigned_zero(d.at(e)));
    out += buf;
  });
  return out;
}

/// Reads the format written by distribution_csv; every event must appear once.
inline ConditionalDistribution distribution_from_csv(std::istream& in) {
  ConditionalDistribution d;
  std::string line;
  if (!std::getline(in, line) || line.rfind("x1,x2,y,z,a1,a2,b,c,p", 0) != 0)
    throw ParseError("distribution CSV: missing header x1,x2,y,z,a1,a2,b,c,p");
  std::array<bool, 256> seen{};
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    int v[8];
    double p = 0.0;
    if (std::sscanf(line.c_str(), "%d,%d,%d,%d,%d,%d,%d,%d,%lf", &v[0], &v[1], &v[2], &v[3], &v[4], &v[5], &v[6],
                    &v[7], &p) != 9)
      throw ParseError("distribution CSV line " + std::to_string(lineno) + ": expected 9 fields");
    for (int k : v)
      if (k != 0 && k != 1) throw ParseError("distribution CSV line " + std::to_string(lineno) + ": indices must be 0 or 1");
    const int idx = table_index(v[4], v[5], v[6], v[7], v[0], v[1], v[2], v[3]);
    if (seen[idx]) throw ParseError("distribution CSV line " + std::to_string(lineno) + ": duplicate event");
    seen[idx] = true;
    d[idx] = p;
  }
  for (bool s : seen)
    if (!s) throw ParseError("distribution CSV: missing events");
  return d;
}

inline std::string slice_csv(const std::vector<PlanarPoint>& poly) {
  std::string out = "x,z\n";
  char buf[96];
  for (const auto& p : poly) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", unsigned_zero(p.x), unsigned_zero(p.z));
    out += buf;
  }
  return out;
}

}  // namespace gptlab::io
