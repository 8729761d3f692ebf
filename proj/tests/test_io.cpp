#include <catch_amalgamated.hpp>
#include <gptlab/json_io.hpp>
#include <gptlab/presets.hpp>

#include <sstream>

using namespace gptlab;
using Catch::Matchers::WithinAbs;
using io::json;

namespace {

double table_diff(const ConditionalDistribution& a, const ConditionalDistribution& b) {
  double d = 0.0;
  for (int i = 0; i < 256; ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST_CASE("space JSON round trip") {
  for (const auto& label : {"gbit", "hex", "boxworld-III"}) {
    INFO(label);
    const auto s = spaces::by_label(label);
    const auto back = io::space_from_json(json::parse(io::space_to_json(s)));
    CHECK(back.label == s.label);
    REQUIRE(back.states.size() == s.states.size());
    REQUIRE(back.effects.size() == s.effects.size());
    for (std::size_t i = 0; i < s.states.size(); ++i) CHECK(back.states[i].max_abs_diff(s.states[i]) == 0.0);
    for (std::size_t i = 0; i < s.effects.size(); ++i) CHECK(back.effects[i].max_abs_diff(s.effects[i]) == 0.0);
    CHECK(back.effect_names == s.effect_names);
  }
}

TEST_CASE("malformed space JSON") {
  CHECK_THROWS_AS(io::space_from_json(json::parse(R"({"label": "x"})")), io::ParseError);
  CHECK_THROWS_AS(io::space_from_json(json::parse(R"({"label": "x", "ambient_dim": 2, "states": [[1, 0, 0]],
                                                     "effects": [], "unit": [1, 1]})")),
                  io::ParseError);
  CHECK_THROWS_AS(io::space_from_json(json::parse(R"({"label": "x", "ambient_dim": 2, "states": [],
                                                     "effects": [], "unit": [1, 1]})")),
                  io::ParseError);
}

TEST_CASE("scenario JSON round trip reproduces the table") {
  for (const auto& name : presets::names()) {
    INFO(name);
    const auto scn = presets::by_name(name);
    const auto back = io::scenario_from_json(json::parse(io::scenario_to_json(scn).dump()));
    CHECK(back.name == scn.name);
    CHECK(back.post_process.has_value() == scn.post_process.has_value());
    CHECK(back.local_spaces == scn.local_spaces);
    CHECK(table_diff(switch_distribution(back), switch_distribution(scn)) < 1e-15);
  }
}

TEST_CASE("shipped preset files match the built-ins") {
  for (const auto& name : presets::names()) {
    INFO(name);
    const auto file = io::scenario_from_json(io::read_json_file(std::string(GPTLAB_SOURCE_DIR) + "/data/presets/" + name + ".json"));
    CHECK(table_diff(switch_distribution(file), switch_distribution(presets::by_name(name))) < 1e-12);
  }
}

TEST_CASE("custom post-processing tables survive a round trip") {
  auto scn = presets::hexsquare_vb();
  std::vector<int> flip(256);
  for (int i = 0; i < 256; ++i) flip[i] = (i & 1) ^ 1;
  scn.post_process = PostProcess::from_table("flip-c", flip);
  const auto j = io::scenario_to_json(scn);
  CHECK(j["post_process"]["name"] == "flip-c");
  const auto back = io::scenario_from_json(j);
  CHECK(back.post_process->map == scn.post_process->map);
}

TEST_CASE("malformed scenario JSON") {
  auto j = io::scenario_to_json(presets::quantum_iib());
  auto bad = j;
  bad["post_process"] = "unknown";
  CHECK_THROWS_AS(io::scenario_from_json(bad), io::ParseError);
  bad = j;
  bad["labB"]["settings"][0]["kets"][1] = bad["labB"]["settings"][0]["kets"][0];
  CHECK_THROWS_AS(io::scenario_from_json(bad), io::ParseError);
  bad = j;
  bad["shared_state"][0][1] = json::array({0.3, 0.0});
  CHECK_THROWS_AS(io::scenario_from_json(bad), io::ParseError);
  bad = j;
  bad.erase("labC");
  CHECK_THROWS_AS(io::scenario_from_json(bad), io::ParseError);
}

TEST_CASE("effects files") {
  const auto a = io::effects_from_json(json::parse(R"({"bloch_effects": [[0.5, 0, 0, 0.5], [0.5, 0, 0, -0.5]]})"));
  REQUIRE(a.size() == 2);
  CHECK(a[0].max_abs_diff(HermitianOperator::projector(kets::zero())) < 1e-15);
  const auto b = io::effects_from_json(json::parse(R"({"effects": [[[1, 0], [0, 0]], [[0, 0], [0, 0]]]})"));
  REQUIRE(b.size() == 2);
  CHECK_THROWS_AS(io::effects_from_json(json::parse(R"({"bloch_effects": [[1, 2]]})")), io::ParseError);
}

TEST_CASE("distribution CSV round trip") {
  const auto d = switch_distribution(presets::hexsquare_vc());
  std::istringstream in(io::distribution_csv(d));
  const auto back = io::distribution_from_csv(in);
  CHECK(table_diff(back, d) == 0.0);

  std::istringstream no_header("1,2,3\n");
  CHECK_THROWS_AS(io::distribution_from_csv(no_header), io::ParseError);
  std::string text = io::distribution_csv(d);
  text.resize(text.rfind('\n', text.size() - 2) + 1);  // drop the last event
  std::istringstream missing(text);
  CHECK_THROWS_AS(io::distribution_from_csv(missing), io::ParseError);
}

TEST_CASE("reports") {
  const auto r = eval_inequality(switch_distribution(presets::hexsquare_va()), 1);
  const auto j = io::report_to_json(r, "preset", "hexsquare-V.A");
  CHECK(j["inequality_id"] == 1);
  CHECK(j["terms"].size() == 3);
  CHECK(j["total"].get<double>() == 1.926776695297);
  CHECK(j["violated"] == true);
  CHECK(j["game_term"].get<double>() == 0.926776695297);
  CHECK(io::summary_csv_row("hexsquare-V.A", r) == "hexsquare-V.A,1,1.926776695297,1.75,true\n");
}

TEST_CASE("number formatting") {
  CHECK(io::format17(-0.0) == "0");
  CHECK(io::report_value(-1e-14) == 0.0);
  CHECK_FALSE(std::signbit(io::report_value(-1e-14)));
  CHECK(io::slice_csv({{-0.0, 1.0}}) == "x,z\n0,1\n");
  const json j = {{"v", {1, 2, 3}}, {"nested", {{"k", {0.5, -1}}}}};
  CHECK(io::dump_compact(j) == "{\n  \"v\": [1, 2, 3],\n  \"nested\": {\n    \"k\": [0.5, -1]\n  }\n}\n");
}
