// gptlab: command-line driver for spaces, vertex enumeration, superposition
// search, switch scenarios and DRF inequality evaluation.
//
// Exit codes: 0 success, 1 other error, 2 invariant violation, 3 parse error.

#include "gptlab/gptlab.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

using namespace gptlab;
using io::json;

enum Exit { kOk = 0, kError = 1, kInvariant = 2, kParse = 3 };

struct Output {
  std::string path;

  void write(const std::string& text) const {
    if (path.empty() || path == "-") {
      std::cout << text;
      return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
  }
  void write(const json& j) const { write(io::dump_compact(j)); }
};

std::string fmt12(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12f", io::report_value(v));
  return buf;
}

GptSpace load_space(const std::string& label, const std::string& file, const Tolerances& tol) {
  if (!file.empty()) return io::space_from_json(io::read_json_file(file));
  if (label.empty()) throw io::ParseError("give --space or --file");
  try {
    return spaces::by_label(label, tol);
  } catch (const std::invalid_argument& e) {
    throw io::ParseError(e.what());
  }
}

SwitchScenario load_scenario(const std::string& preset, const std::string& file) {
  if (!file.empty()) return io::scenario_from_json(io::read_json_file(file));
  if (preset.empty()) throw io::ParseError("give --preset or --scenario");
  try {
    return presets::by_name(preset);
  } catch (const std::invalid_argument& e) {
    throw io::ParseError(e.what());
  }
}

/// Checks the scenario's shared state against its declared local spaces, when both are known.
void check_local_spaces(const SwitchScenario& scn, const Tolerances& tol) {
  if (!scn.local_spaces) return;
  const auto& [c, b] = *scn.local_spaces;
  GptSpace sc, sb;
  try {
    sc = spaces::by_label(c, tol);
    sb = spaces::by_label(b, tol);
  } catch (const std::invalid_argument& e) {
    throw io::ParseError(e.what());
  }
  if (sc.ambient_dim != 4 || sb.ambient_dim != 4) return;
  if (!max_membership(embed(scn.shared_state), sc, sb, tol))
    throw InvariantViolation("shared state of '" + scn.name + "' is not a valid state of " + c + " (x)max " + b);
}

json witness_json(const GptSpace& space, const SuperpositionWitness& w) {
  const auto& v = w.values;
  return {{"states", {{"s", space.state_name(w.s)}, {"r1", space.state_name(w.r1)}, {"r2", space.state_name(w.r2)}}},
          {"effects",
           {{"e_s", space.effect_name(w.e_s)}, {"f_r1", space.effect_name(w.f_r1)}, {"f_r2", space.effect_name(w.f_r2)}}},
          {"indices", {w.s, w.r1, w.r2, w.e_s, w.f_r1, w.f_r2}},
          {"values",
           {{"es_s", v.es_s},
            {"es_r1", v.es_r1},
            {"es_r2", v.es_r2},
            {"fr1_r1", v.fr1_r1},
            {"fr2_r2", v.fr2_r2},
            {"fr1_s", v.fr1_s},
            {"fr2_s", v.fr2_s}}}};
}

std::string witness_text(const GptSpace& space, const SuperpositionWitness& w) {
  const auto& v = w.values;
  std::ostringstream os;
  os << "states  s=" << space.state_name(w.s) << "  r1=" << space.state_name(w.r1) << "  r2=" << space.state_name(w.r2)
     << "\neffects e_s=" << space.effect_name(w.e_s) << "  f_r1=" << space.effect_name(w.f_r1)
     << "  f_r2=" << space.effect_name(w.f_r2) << "\n"
     << "<e_s,s>=" << fmt12(v.es_s) << " <e_s,r1>=" << fmt12(v.es_r1) << " <e_s,r2>=" << fmt12(v.es_r2) << "\n"
     << "<f_r1,r1>=" << fmt12(v.fr1_r1) << " <f_r2,r2>=" << fmt12(v.fr2_r2) << "\n"
     << "<f_r1,s>=" << fmt12(v.fr1_s) << " <f_r2,s>=" << fmt12(v.fr2_s) << "\n";
  return os.str();
}

/// Vertex families of the hex polytope: |rx| = √2, |ry| = √2, and |rx| = r.
json hex_families(const std::vector<BlochVector>& vs) {
  int sx = 0, sy = 0, sr = 0, other = 0;
  for (const auto& v : vs) {
    if (std::abs(std::abs(v.rx) - kSqrt2) < 1e-9)
      ++sx;
    else if (std::abs(std::abs(v.ry) - kSqrt2) < 1e-9)
      ++sy;
    else if (std::abs(std::abs(v.rx) - kHexR) < 1e-9)
      ++sr;
    else
      ++other;
  }
  json notes = json::array();
  if (sx != 4)
    notes.push_back("family (±√2,0,0), i.e. (1 ± √2 X)/2, has " + std::to_string(sx) +
                    " members; a count of 4 for this family is not reproduced");
  return {{"counts", {{"(±√2,0,0)", sx}, {"(0,±√2,±1)", sy}, {"(±r,±1,±1)", sr}, {"other", other}}},
          {"notes", notes}};
}

json vertex_diff(const std::vector<BlochVector>& found, const std::vector<BlochVector>& expected) {
  json missing = json::array(), unexpected = json::array();
  auto contains = [](const std::vector<BlochVector>& list, const BlochVector& v) {
    return std::any_of(list.begin(), list.end(), [&](const BlochVector& w) { return w.distance(v) <= 1e-9; });
  };
  for (const auto& v : expected)
    if (!contains(found, v)) missing.push_back({v.rx, v.ry, v.rz});
  for (const auto& v : found)
    if (!contains(expected, v)) unexpected.push_back({v.rx, v.ry, v.rz});
  return {{"missing", missing}, {"unexpected", unexpected}, {"empty", missing.empty() && unexpected.empty()}};
}

std::vector<HermitianOperator> enumeration_effects(const std::string& label, const std::string& effects_file,
                                                   const Tolerances& tol) {
  if (!effects_file.empty()) return io::effects_from_json(io::read_json_file(effects_file));
  if (auto named = reference::effects_for(label)) return effects::operators(*named);
  const auto space = load_space(label, "", tol);
  if (space.ambient_dim != 4) throw io::ParseError("space '" + label + "' is not a single-qubit Hermitian space");
  std::vector<HermitianOperator> out;
  for (const auto& e : space.effects) out.push_back(to_operator(e));
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"Generalized probabilistic theories, the quantum switch and DRF inequalities"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "gptlab 1.0.0");

  std::string out_path, space_label, space_file, effects_file, preset, scenario_file, inequality = "1";
  bool as_json = false, require_basis = false, csv = false;
  double ry = 0.0;
  std::uint64_t seed = 0;
  int mixtures = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-o,--output", out_path, "Write output to this file instead of stdout");
    sub->add_flag("--json", as_json, "Emit JSON");
  };

  auto* list = app.add_subcommand("list", "List built-in spaces and presets");
  add_common(list);

  auto* space = app.add_subcommand("space", "Export a space as JSON and report validation issues");
  space->add_option("--space", space_label, "Built-in space label");
  space->add_option("--file", space_file, "Space JSON file");
  space->add_option("-o,--output", out_path, "Write output to this file instead of stdout");

  auto* enumerate = app.add_subcommand("enumerate", "Vertices of the largest state space compatible with an effect list");
  enumerate->add_option("--space", space_label, "Built-in space label (hex, square, qubit, ...)");
  enumerate->add_option("--effects", effects_file, "JSON file with 2x2 effects");
  add_common(enumerate);

  auto* slice_cmd = app.add_subcommand("slice", "Polygon of a state space at fixed r_y, as CSV (x,z)");
  slice_cmd->add_option("--space", space_label, "Built-in space label")->required();
  slice_cmd->add_option("--ry", ry, "Fixed r_y");
  slice_cmd->add_option("-o,--output", out_path, "Write output to this file instead of stdout");

  auto* superpos = app.add_subcommand("superposition", "Search a space for a superposition witness");
  superpos->add_option("--space", space_label, "Built-in space label");
  superpos->add_option("--file", space_file, "Space JSON file");
  superpos->add_flag("--require-basis", require_basis, "Require f_r1 + f_r2 = unit");
  add_common(superpos);

  auto* product = app.add_subcommand("product-witness", "Lift the hex witness to hex (x)min square");
  add_common(product);

  auto* eval = app.add_subcommand("eval", "Evaluate DRF inequalities on a switch scenario");
  eval->add_option("--preset", preset, "Preset name, or 'all'");
  eval->add_option("--scenario", scenario_file, "Scenario JSON file");
  eval->add_option("--inequality", inequality, "Inequality id 1..5, or 'all'");
  eval->add_flag("--csv", csv, "Emit a CSV summary");
  add_common(eval);

  auto* dist = app.add_subcommand("distribution", "Export p(a1,a2,b,c|x1,x2,y,z) as CSV");
  dist->add_option("--preset", preset, "Preset name");
  dist->add_option("--scenario", scenario_file, "Scenario JSON file");
  dist->add_option("-o,--output", out_path, "Write output to this file instead of stdout");

  auto* bell = app.add_subcommand("bell", "Bell table p(c,b|z,y) of labs C and B on the shared state");
  bell->add_option("--preset", preset, "Preset name");
  bell->add_option("--scenario", scenario_file, "Scenario JSON file");
  add_common(bell);

  auto* scenario = app.add_subcommand("scenario", "Export a preset scenario as JSON");
  scenario->add_option("--preset", preset, "Preset name")->required();
  scenario->add_option("-o,--output", out_path, "Write output to this file instead of stdout");

  auto* optimize = app.add_subcommand("optimize", "Exhaustive search over extremal-effect measurements for labs C and B");
  optimize->add_option("--inequality", inequality, "Inequality id 1..5");
  optimize->add_option("--preset", preset, "Fixed wiring (preset name)")->default_val("hexsquare-V.B");
  optimize->add_option("--scenario", scenario_file, "Fixed wiring (scenario JSON)");
  optimize->add_option("--c-space", space_label, "Space for lab C's effects (default: from the scenario)");
  optimize->add_option("--mixtures", mixtures, "Also sample this many random measurement mixtures");
  optimize->add_option("--seed", seed, "Seed for mixture sampling")->default_val(0);
  add_common(optimize);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }

  Tolerances tol;
  try {
    tol = Tolerances::from_environment();
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  }
  const Output out{out_path};

  if (*list) {
    if (as_json)
      out.write(json{{"spaces", spaces::labels()}, {"presets", presets::names()}});
    else {
      std::string text = "spaces:";
      for (const auto& l : spaces::labels()) text += " " + l;
      text += "\npresets:";
      for (const auto& p : presets::names()) text += " " + p;
      out.write(text + "\n");
    }
    return kOk;
  }

  if (*space) {
    const auto s = load_space(space_label, space_file, tol);
    const auto issues = validate_space(s, tol);
    out.write(io::space_to_json(s));
    for (const auto& i : issues) std::cerr << "issue: " << i << "\n";
    return issues.empty() ? kOk : kInvariant;
  }

  if (*enumerate) {
    const auto effs = enumeration_effects(space_label, effects_file, tol);
    if (effs.empty()) throw io::ParseError("no effects to enumerate");
    const auto ineqs = facets_from_effects(effs);
    VertexSet vs;
    try {
      vs = enumerate_vertices(ineqs, tol);
    } catch (const std::invalid_argument& e) {
      throw io::ParseError(e.what());
    }
    json j = io::vertex_set_to_json(ineqs, vs);
    if (!space_label.empty() && effects_file.empty()) {
      j["label"] = space_label;
      if (auto expected = reference::vertices_for(space_label)) j["expected_diff"] = vertex_diff(vs.vertices, *expected);
      if (space_label == "hex") j["families"] = hex_families(vs.vertices);
    }
    if (as_json) {
      out.write(j);
    } else {
      std::ostringstream os;
      os << vs.vertices.size() << " vertices (" << ineqs.size() << " inequalities)\n";
      for (std::size_t i = 0; i < vs.vertices.size(); ++i)
        os << "  " << bloch_label(vs.vertices[i]) << "  saturates " << vs.saturated_counts[i] << "\n";
      if (j.contains("expected_diff"))
        os << "diff against built-in list: " << (j["expected_diff"]["empty"].get<bool>() ? "empty" : j["expected_diff"].dump()) << "\n";
      if (j.contains("families")) {
        os << "families: " << j["families"]["counts"].dump() << "\n";
        for (const auto& n : j["families"]["notes"]) os << "note: " << n.get<std::string>() << "\n";
      }
      out.write(os.str());
    }
    return kOk;
  }

  if (*slice_cmd) {
    const auto effs = enumeration_effects(space_label, "", tol);
    std::vector<PlanarPoint> poly;
    try {
      poly = slice(facets_from_effects(effs), ry, tol);
    } catch (const std::domain_error& e) {
      throw InvariantViolation(e.what());
    }
    out.write(io::slice_csv(poly));
    return kOk;
  }

  if (*superpos) {
    const auto s = load_space(space_label, space_file, tol);
    const auto w = find_superposition(s, require_basis, tol);
    if (as_json) {
      json j{{"space", s.label}, {"require_basis", require_basis}, {"found", w.has_value()}};
      j["witness"] = w ? witness_json(s, *w) : json(nullptr);
      out.write(j);
    } else {
      out.write(w ? witness_text(s, *w) : std::string("none\n"));
    }
    return kOk;
  }

  if (*product) {
    const auto hex = spaces::hex(tol);
    const auto sq = spaces::square(tol);
    const auto local = hex_witness::locate(hex);
    const auto anchor_state = find_vector(sq.states, embed(bloch_to_operator({1, 1, 1})), 1e-9);
    const auto anchor_effect = find_effect(sq, embed(rank_one_projector(0, 0, 1, +1)), 1e-9);
    if (!anchor_state || !anchor_effect) throw InvariantViolation("anchor not found in square space");
    const auto pw = product_superposition_witness(hex, sq, local, *anchor_state, *anchor_effect, tol);
    const bool valid = verify_witness(pw.composite, pw.witness, tol);
    if (as_json) {
      json j{{"space", pw.composite.label}, {"found", true}, {"valid", valid}};
      j["witness"] = witness_json(pw.composite, pw.witness);
      out.write(j);
    } else {
      out.write(witness_text(pw.composite, pw.witness) + (valid ? "valid\n" : "INVALID\n"));
    }
    return valid ? kOk : kInvariant;
  }

  if (*eval) {
    std::vector<SwitchScenario> scns;
    if (preset == "all" && scenario_file.empty()) {
      for (const auto& n : presets::names()) scns.push_back(presets::by_name(n));
    } else {
      scns.push_back(load_scenario(preset, scenario_file));
    }
    std::vector<int> ids;
    if (inequality == "all") {
      ids = {1, 2, 3, 4, 5};
    } else {
      try {
        std::size_t used = 0;
        ids = {std::stoi(inequality, &used)};
        if (used != inequality.size()) throw std::invalid_argument(inequality);
        gptlab::inequality(ids[0]);
      } catch (const std::exception&) {
        throw io::ParseError("--inequality must be 1..5 or 'all'");
      }
    }
    json reports = json::array();
    std::string csv_text = io::summary_csv_header();
    std::string text;
    for (const auto& scn : scns) {
      check_local_spaces(scn, tol);
      const auto d = switch_distribution(scn, tol.prob);
      d.check_invariants(tol.prob);
      for (int id : ids) {
        const auto r = eval_inequality(d, id);
        reports.push_back(io::report_to_json(r, "preset " + scn.name, scn.name));
        csv_text += io::summary_csv_row(scn.name, r);
        text += scn.name + "  inequality " + std::to_string(id) + "  total " + fmt12(r.total) + "  (" +
                (r.violated ? "violates" : "within") + " 7/4)\n";
        for (std::size_t i = 0; i < r.term_values.size(); ++i)
          text += "    " + r.term_labels[i] + " = " + fmt12(r.term_values[i]) + "\n";
      }
    }
    if (csv)
      out.write(csv_text);
    else if (as_json)
      out.write(reports.size() == 1 ? reports[0] : reports);
    else
      out.write(text);
    return kOk;
  }

  if (*dist) {
    const auto scn = load_scenario(preset, scenario_file);
    const auto d = switch_distribution(scn, tol.prob);
    d.check_invariants(tol.prob);
    out.write(io::distribution_csv(d));
    return kOk;
  }

  if (*bell) {
    const auto scn = load_scenario(preset, scenario_file);
    const auto t = bell_distribution(scn.shared_state, scn.labC, scn.labB, tol.prob);
    if (as_json) {
      json rows = json::array();
      for (const auto& r : t.p) {
        json row = json::array();
        for (double v : r) row.push_back(io::report_value(v));
        rows.push_back(row);
      }
      out.write(json{{"scenario", scn.name}, {"layout", "rows 2z+c, columns 2y+b"}, {"table", rows},
                     {"chsh_yz", io::report_value(chsh_score(t, games::yz))}});
    } else {
      std::string text = "p(c,b|z,y), rows 2z+c, columns 2y+b\n";
      for (const auto& r : t.p) {
        for (double v : r) text += "  " + fmt12(v);
        text += "\n";
      }
      text += "CHSH (b^c=yz): " + fmt12(chsh_score(t, games::yz)) + "\n";
      out.write(text);
    }
    return kOk;
  }

  if (*scenario) {
    out.write(io::scenario_to_json(load_scenario(preset, "")));
    return kOk;
  }

  if (*optimize) {
    int id = 0;
    try {
      id = std::stoi(inequality);
      gptlab::inequality(id);
    } catch (const std::exception&) {
      throw io::ParseError("--inequality must be 1..5");
    }
    const auto fixed = load_scenario(scenario_file.empty() ? preset : std::string(), scenario_file);
    check_local_spaces(fixed, tol);
    std::string c_label = space_label, b_label;
    if (fixed.local_spaces) {
      if (c_label.empty()) c_label = fixed.local_spaces->first;
      b_label = fixed.local_spaces->second;
    }
    if (c_label.empty() || b_label.empty()) throw io::ParseError("scenario declares no local spaces for labs C and B");
    const auto grid = StrategyGrid::from_spaces(load_space(c_label, "", tol), load_space(b_label, "", tol), tol.prob);
    const auto res = optimize_strategy(id, grid, fixed, tol.prob);
    json j{{"inequality_id", id}, {"preset", fixed.name}, {"grid_size", res.evaluated}};
    j["best"] = io::report_to_json(res.report, res.strategy, fixed.name);
    j["best_game_term"] = {{"value", io::report_value(res.best_game_value)}, {"strategy", res.best_game_strategy}};
    json co = json::array();
    for (const auto& c : res.co_optimal) co.push_back(grid.describe(c));
    j["co_optimal"] = co;
    j["quantum_reference"] = 1.8274;
    j["exceeds_quantum_reference"] = res.report.total > 1.8274;
    if (mixtures > 0) {
      const auto mc = mixture_dominance_check(id, grid, fixed, mixtures, seed, tol.prob);
      j["mixtures"] = {{"samples", mc.samples},
                       {"seed", seed},
                       {"max_total", io::report_value(mc.mixture_maximum)},
                       {"dominated", mc.dominated}};
    }
    if (as_json) {
      out.write(j);
    } else {
      std::ostringstream os;
      os << "inequality " << id << " over " << res.evaluated << " strategies (" << fixed.name << " wiring)\n"
         << "best total " << fmt12(res.report.total) << "  game term " << fmt12(res.report.game_value()) << "\n"
         << "  " << res.strategy << "\n"
         << "max game term " << fmt12(res.best_game_value) << "\n"
         << "co-optimal strategies: " << res.co_optimal.size() << "\n";
      for (const auto& c : res.co_optimal) os << "  " << grid.describe(c) << "\n";
      os << "quantum reference 1.8274: " << (res.report.total > 1.8274 ? "exceeded" : "not exceeded") << "\n";
      if (j.contains("mixtures"))
        os << "mixtures: " << mixtures << " samples, max total " << fmt12(j["mixtures"]["max_total"].get<double>())
           << (j["mixtures"]["dominated"].get<bool>() ? ", never above the grid optimum\n" : ", ABOVE the grid optimum\n");
      out.write(os.str());
    }
    return kOk;
  }
  return kError;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const gptlab::io::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const gptlab::InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kInvariant;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
}
