#pragma once

// DRF inequalities over switch tables, and exhaustive strategy search over
// binary measurements built from extremal effects.

#include "gptlab/gpt.hpp"
#include "gptlab/switch.hpp"
#include "gptlab/tolerances.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace gptlab {

struct SettingTuple {
  int x1 = 0, x2 = 0, y = 0, z = 0;
};

/// coefficient * p(event | given), averaged uniformly over the settings that satisfy `given`.
struct TermSpec {
  std::string label;
  double coefficient = 1.0;
  std::function<bool(const SettingTuple&)> given;
  std::function<bool(const SwitchEvent&)> event;
};

struct InequalitySpec {
  int id = 0;
  std::vector<TermSpec> terms;
  std::size_t game_term = 0;  ///< index of the b xor c term
  double bound = 1.75;
  double algebraic_bound = 2.0;
};

/// Throws std::invalid_argument if the term has no predicate or selects no setting.
inline double eval_term(const ConditionalDistribution& dist, const TermSpec& term) {
  if (!term.given || !term.event) throw std::invalid_argument("term '" + term.label + "' is missing a predicate");
  double sum = 0.0;
  int settings = 0;
  for (int x1 = 0; x1 < 2; ++x1)
    for (int x2 = 0; x2 < 2; ++x2)
      for (int y = 0; y < 2; ++y)
        for (int z = 0; z < 2; ++z) {
          if (!term.given({x1, x2, y, z})) continue;
          ++settings;
          for (int a1 = 0; a1 < 2; ++a1)
            for (int a2 = 0; a2 < 2; ++a2)
              for (int b = 0; b < 2; ++b)
                for (int c = 0; c < 2; ++c) {
                  const SwitchEvent ev{a1, a2, b, c, x1, x2, y, z};
                  if (term.event(ev)) sum += dist.at(ev);
                }
        }
  if (settings == 0) throw std::invalid_argument("term '" + term.label + "' conditions on an empty set of settings");
  return term.coefficient * sum / settings;
}

namespace detail {

inline std::vector<InequalitySpec> build_inequalities() {
  using S = SettingTuple;
  using E = SwitchEvent;
  const TermSpec b0_a2_y0{"p(b=0,a2=x1|y=0)", 1.0, [](const S& s) { return s.y == 0; },
                          [](const E& e) { return e.b == 0 && e.a2 == e.x1; }};
  const TermSpec b1_a1_y0{"p(b=1,a1=x2|y=0)", 1.0, [](const S& s) { return s.y == 0; },
                          [](const E& e) { return e.b == 1 && e.a1 == e.x2; }};
  const TermSpec b0_a2_x2y00{"p(b=0,a2=x1|x2y=00)", 1.0, [](const S& s) { return s.x2 == 0 && s.y == 0; },
                             [](const E& e) { return e.b == 0 && e.a2 == e.x1; }};
  const TermSpec b1_a1_x1y00{"p(b=1,a1=x2|x1y=00)", 1.0, [](const S& s) { return s.x1 == 0 && s.y == 0; },
                             [](const E& e) { return e.b == 1 && e.a1 == e.x2; }};
  const TermSpec game_yz{"p(b^c=yz|x1=x2=0)", 1.0, [](const S& s) { return s.x1 == 0 && s.x2 == 0; },
                         [](const E& e) { return (e.b ^ e.c) == (e.y & e.z); }};
  const TermSpec game_x2y{"p(b^c=x2y|x1=0)", 1.0, [](const S& s) { return s.x1 == 0; },
                          [](const E& e) { return (e.b ^ e.c) == (e.x2 & e.y); }};
  const TermSpec extra{"p(a2=1,c^1=b=y|x1x2=00)", 1.0, [](const S& s) { return s.x1 == 0 && s.x2 == 0; },
                       [](const E& e) { return e.a2 == 1 && (e.c ^ 1) == e.b && e.b == e.y; }};
  const TermSpec a1_10{"p(a1=0|x1x2=10)", 0.5, [](const S& s) { return s.x1 == 1 && s.x2 == 0; },
                       [](const E& e) { return e.a1 == 0; }};
  const TermSpec a2_01{"p(a2=0|x1x2=01)", 0.5, [](const S& s) { return s.x1 == 0 && s.x2 == 1; },
                       [](const E& e) { return e.a2 == 0; }};
  const TermSpec a12_11{"p(a1a2=00|x1x2=11)", -0.5, [](const S& s) { return s.x1 == 1 && s.x2 == 1; },
                        [](const E& e) { return e.a1 == 0 && e.a2 == 0; }};
  // c here is the announced outcome; the x2 a1 + (x2 xor 1) c wiring is applied to it literally.
  const TermSpec game_wired{"p((x2a1+(x2^1)c)^b=x2y|x1=x2)", 1.0, [](const S& s) { return s.x1 == s.x2; },
                            [](const E& e) { return ((e.x2 == 1 ? e.a1 : e.c) ^ e.b) == (e.x2 & e.y); }};
  return {
      {1, {b0_a2_y0, b1_a1_y0, game_yz}, 2},
      {2, {b0_a2_y0, b1_a1_y0, game_x2y}, 2},
      {3, {b0_a2_x2y00, b1_a1_x1y00, game_x2y}, 2},
      {4, {b0_a2_x2y00, b1_a1_x1y00, game_x2y, extra}, 2},
      {5, {a1_10, a2_01, a12_11, game_wired}, 3},
  };
}

}  // namespace detail

/// Throws std::invalid_argument for ids outside 1..5.
inline const InequalitySpec& inequality(int id) {
  static const std::vector<InequalitySpec> all = detail::build_inequalities();
  if (id < 1 || id > static_cast<int>(all.size()))
    throw std::invalid_argument("unknown inequality id " + std::to_string(id) + " (expected 1..5)");
  return all[static_cast<std::size_t>(id - 1)];
}

struct InequalityReport {
  int inequality_id = 0;
  std::vector<std::string> term_labels;
  std::vector<double> term_values;  ///< coefficient included
  double total = 0.0;
  double bound = 1.75;
  double algebraic_bound = 2.0;
  bool violated = false;
  std::size_t game_term = 0;

  double game_value() const { return term_values.at(game_term); }
};

inline InequalityReport eval_inequality(const ConditionalDistribution& dist, int id) {
  const auto& spec = inequality(id);
  InequalityReport r;
  r.inequality_id = id;
  r.bound = spec.bound;
  r.algebraic_bound = spec.algebraic_bound;
  r.game_term = spec.game_term;
  for (const auto& t : spec.terms) {
    r.term_labels.push_back(t.label);
    r.term_values.push_back(eval_term(dist, t));
    r.total += r.term_values.back();
  }
  r.violated = r.total > r.bound + 1e-9;
  return r;
}

/// Binary measurement {e0, e1} with e0 + e1 = unit.
struct BinaryMeasurement {
  std::string name;
  HermitianOperator e0;
  HermitianOperator e1;
};

/// All ordered pairs (e, u - e) where both e and u - e are listed effects of
/// the space, in effect-list order. Requires a Hermitian (qubit) embedding.
inline std::vector<BinaryMeasurement> binary_measurements(const GptSpace& space, double tol = kDefaultTolerance) {
  std::vector<BinaryMeasurement> out;
  for (std::size_t i = 0; i < space.effects.size(); ++i) {
    const GptVector complement = space.unit - space.effects[i];
    for (std::size_t j = 0; j < space.effects.size(); ++j) {
      if (!same_functional(space, space.effects[j], complement, tol)) continue;
      const auto e0 = to_operator(space.effects[i]);
      const auto e1 = to_operator(space.effects[j]);
      if ((e0 + e1).max_abs_diff(HermitianOperator::identity(e0.dim())) > tol)
        throw InvariantViolation("measurement " + space.effect_name(i) + " does not sum to the unit");
      out.push_back({space.effect_name(i) + "|" + space.effect_name(j), e0, e1});
      break;
    }
  }
  return out;
}

/// Candidate measurements for labs C and B. A strategy picks one candidate
/// per setting: index order (C z=0, C z=1, B y=0, B y=1), lexicographic.
struct StrategyGrid {
  std::vector<BinaryMeasurement> c_candidates;
  std::vector<BinaryMeasurement> b_candidates;

  struct Choice {
    std::size_t c0 = 0, c1 = 0, b0 = 0, b1 = 0;
  };

  std::size_t size() const {
    return c_candidates.size() * c_candidates.size() * b_candidates.size() * b_candidates.size();
  }
  Choice decode(std::size_t index) const {
    const std::size_t nb = b_candidates.size();
    const std::size_t nc = c_candidates.size();
    Choice ch;
    ch.b1 = index % nb;
    index /= nb;
    ch.b0 = index % nb;
    index /= nb;
    ch.c1 = index % nc;
    ch.c0 = index / nc;
    return ch;
  }
  EffectTable c_effects(const Choice& ch) const {
    const auto& m0 = c_candidates.at(ch.c0);
    const auto& m1 = c_candidates.at(ch.c1);
    return {{{m0.e0, m0.e1}, {m1.e0, m1.e1}}};
  }
  EffectTable b_effects(const Choice& ch) const {
    const auto& m0 = b_candidates.at(ch.b0);
    const auto& m1 = b_candidates.at(ch.b1);
    return {{{m0.e0, m0.e1}, {m1.e0, m1.e1}}};
  }
  std::string describe(const Choice& ch) const {
    return "C[z=0]=" + c_candidates[ch.c0].name + "; C[z=1]=" + c_candidates[ch.c1].name +
           "; B[y=0]=" + b_candidates[ch.b0].name + "; B[y=1]=" + b_candidates[ch.b1].name;
  }

  static StrategyGrid from_spaces(const GptSpace& c_space, const GptSpace& b_space, double tol = kDefaultTolerance) {
    return {binary_measurements(c_space, tol), binary_measurements(b_space, tol)};
  }
};

struct OptimizationResult {
  StrategyGrid::Choice best;
  std::string strategy;
  InequalityReport report;        ///< at the argmax of the total
  double best_game_value = 0.0;   ///< max of the game term alone over the grid
  std::string best_game_strategy;
  std::vector<StrategyGrid::Choice> co_optimal;  ///< totals within 1e-9 of the maximum, grid order
  std::size_t evaluated = 0;
};

/// Exhaustive search over `grid` with labs C and B replaced in `fixed`. The
/// first strategy in grid order wins ties. Every evaluated table is checked
/// against the distribution invariants.
inline OptimizationResult optimize_strategy(int id, const StrategyGrid& grid, const SwitchScenario& fixed,
                                            double tol = kDefaultTolerance) {
  inequality(id);
  if (grid.size() == 0) throw std::invalid_argument("optimize_strategy: empty strategy grid");
  const SwitchKernel kernel(fixed);
  const PostProcess* post = fixed.post_process ? &*fixed.post_process : nullptr;
  std::vector<double> totals(grid.size());
  std::vector<double> games(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto ch = grid.decode(i);
    const auto dist = kernel.distribution(grid.c_effects(ch), grid.b_effects(ch), post, tol);
    dist.check_invariants(tol);
    const auto rep = eval_inequality(dist, id);
    totals[i] = rep.total;
    games[i] = rep.game_value();
  }
  OptimizationResult out;
  out.evaluated = grid.size();
  const std::size_t best = static_cast<std::size_t>(std::max_element(totals.begin(), totals.end()) - totals.begin());
  const std::size_t best_game = static_cast<std::size_t>(std::max_element(games.begin(), games.end()) - games.begin());
  out.best = grid.decode(best);
  out.strategy = grid.describe(out.best);
  out.report = eval_inequality(kernel.distribution(grid.c_effects(out.best), grid.b_effects(out.best), post, tol), id);
  out.best_game_value = games[best_game];
  out.best_game_strategy = grid.describe(grid.decode(best_game));
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (totals[i] >= totals[best] - 1e-9) out.co_optimal.push_back(grid.decode(i));
  return out;
}

struct MixtureCheck {
  bool dominated = true;
  double grid_maximum = 0.0;
  double mixture_maximum = 0.0;
  int samples = 0;
};

/// Samples `samples` strategies in which every lab setting uses a random
/// two-point mixture w m_i + (1-w) m_j of that lab's grid candidates, and
/// checks none beats the extremal-grid optimum by more than 1e-9.
inline MixtureCheck mixture_dominance_check(int id, const StrategyGrid& grid, const SwitchScenario& fixed, int samples,
                                            std::uint64_t seed = 0, double tol = kDefaultTolerance) {
  MixtureCheck out;
  out.samples = samples;
  out.grid_maximum = optimize_strategy(id, grid, fixed, tol).report.total;
  out.mixture_maximum = -1.0;
  const SwitchKernel kernel(fixed);
  const PostProcess* post = fixed.post_process ? &*fixed.post_process : nullptr;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> weight(0.0, 1.0);
  auto mix = [&](const std::vector<BinaryMeasurement>& cands) {
    std::uniform_int_distribution<std::size_t> pick(0, cands.size() - 1);
    const auto& m = cands[pick(rng)];
    const auto& n = cands[pick(rng)];
    const double w = weight(rng);
    return std::array<HermitianOperator, 2>{w * m.e0 + (1.0 - w) * n.e0, w * m.e1 + (1.0 - w) * n.e1};
  };
  for (int s = 0; s < samples; ++s) {
    const EffectTable c{mix(grid.c_candidates), mix(grid.c_candidates)};
    const EffectTable b{mix(grid.b_candidates), mix(grid.b_candidates)};
    const auto dist = kernel.distribution(c, b, post, tol);
    dist.check_invariants(tol);
    const double total = eval_inequality(dist, id).total;
    out.mixture_maximum = std::max(out.mixture_maximum, total);
    if (total > out.grid_maximum + 1e-9) out.dominated = false;
  }
  return out;
}

}  // namespace gptlab
