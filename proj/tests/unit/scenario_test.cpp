#include <doctest.h>

#include <set>

#include "fixtures.hpp"
#include "mcpf/json_io.hpp"
#include "mcpf/scenario.hpp"

using namespace mcpf;
using mcpf::testing::grid;

namespace {

const std::string kMap = std::string(MCPF_DATA_DIR) + "/random-32-32-20.map";
const std::string kScen = std::string(MCPF_DATA_DIR) + "/random-32-32-20.scen";

int error_line(const std::string& text) {
  try {
    parse_scen(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("parse_scen") {
  CHECK(parse_scen("version 1\n").empty());
  CHECK(parse_scen("version 1.0\n\n").empty());

  const auto one = parse_scen("version 1\n3\tm.map\t8\t6\t1\t2\t7\t5\t9.5\n");
  REQUIRE(one.size() == 1);
  CHECK(one[0].bucket == 3);
  CHECK(one[0].map == "m.map");
  CHECK(one[0].width == 8);
  CHECK(one[0].height == 6);
  CHECK(one[0].start == Cell{2, 1});
  CHECK(one[0].goal == Cell{5, 7});
  CHECK(one[0].optimal == 9.5);
  CHECK(parse_scen(to_scen_text(one))[0].goal == one[0].goal);

  CHECK(error_line("version 2\n") == 1);
  CHECK(error_line("") == 1);
  CHECK(error_line("version 1\n0\tm.map\t8\t6\t1\t2\t7\t5\t1\n0\tm.map\t8\t6\t1\t2\t7\n") == 3);
  CHECK(error_line("version 1\n0\tm.map\t8\t6\tx\t2\t7\t5\t1\n") == 2);
  CHECK(error_line("version 1\n0\tm.map\t8\t6\t8\t2\t7\t5\t1\n") == 2);
}

TEST_CASE("eligibility spec") {
  CHECK(EligibilitySpec::parse("all").mode == EligibilitySpec::Mode::All);
  const auto r = EligibilitySpec::parse("random:2");
  CHECK(r.mode == EligibilitySpec::Mode::Random);
  CHECK(r.k == 2);
  CHECK(r.str() == "random:2");
  CHECK_THROWS_AS(EligibilitySpec::parse("random:0"), ContractViolation);
  CHECK_THROWS_AS(EligibilitySpec::parse("some"), ContractViolation);
}

TEST_CASE("make_instance") {
  const auto g = load_map_file(kMap);
  const auto scen = load_scen_file(kScen);

  const auto single = make_instance(g, scen, 1, 0, 0);
  CHECK(single.num_agents == 1);
  CHECK(single.targets.empty());
  CHECK(single.starts[0] == g.vertex(scen[0].start));
  CHECK(single.goals[0] == g.vertex(scen[0].goal));
  CHECK_NOTHROW(validate_instance(g, single));

  const auto a = problem_to_json(g, make_instance(g, scen, 4, 10, 17)).dump();
  const auto b = problem_to_json(g, make_instance(g, scen, 4, 10, 17)).dump();
  CHECK(a == b);
  CHECK(a != problem_to_json(g, make_instance(g, scen, 4, 10, 18)).dump());

  const auto big = make_instance(g, scen, 5, 20, 3);
  std::set<Vertex> cells(big.starts.begin(), big.starts.end());
  cells.insert(big.goals.begin(), big.goals.end());
  cells.insert(big.targets.begin(), big.targets.end());
  CHECK(cells.size() == 30);
  for (Vertex v : cells) CHECK(g.passable(v));
  CHECK_NOTHROW(validate_instance(g, big));

  const auto restricted = make_instance(g, scen, 5, 20, 3, EligibilitySpec::parse("random:2"));
  for (const auto& s : restricted.target_eligibility) CHECK(s.size() == 2);
  CHECK(restricted.targets == big.targets);

  CHECK_THROWS_AS(make_instance(g, scen, 200, 0, 0), ContractViolation);
  CHECK_THROWS_AS(make_instance(g, scen, 50, 128, 0), ContractViolation);
}

TEST_CASE("instance JSON round trip") {
  const auto g = load_map_file(kMap);
  const auto scen = load_scen_file(kScen);
  auto inst = make_instance(g, scen, 3, 6, 5, EligibilitySpec::parse("random:2"));
  const Json j = problem_to_json(g, inst);
  CHECK(j["schema"] == kSchemaVersion);
  const Problem p = problem_from_json(j);
  CHECK(p.graph.rows() == g.rows());
  CHECK(p.inst.starts == inst.starts);
  CHECK(p.inst.targets == inst.targets);
  CHECK(p.inst.target_eligibility == inst.target_eligibility);
  CHECK(problem_to_json(p.graph, p.inst).dump() == j.dump());

  Json bad = j;
  bad["schema"] = 7;
  CHECK_THROWS_AS(problem_from_json(bad), ParseError);
  Json missing = j;
  missing.erase("starts");
  CHECK_THROWS_AS(problem_from_json(missing), ParseError);
}

TEST_CASE("generated maps and scenarios") {
  const auto g = generate_random_map(16, 12, 20, 4, "gen");
  CHECK(g.width() == 16);
  CHECK(g.height() == 12);
  CHECK(g.num_passable() == 16 * 12 - (16 * 12 * 20) / 100);
  const auto scen = generate_scen(g, "gen.map", 20, 4);
  REQUIRE(scen.size() == 20);
  std::set<Vertex> starts, goals;
  for (const auto& e : scen) {
    starts.insert(g.vertex(e.start));
    goals.insert(g.vertex(e.goal));
    CHECK(g.shortest_cost(g.vertex(e.start), g.vertex(e.goal)).has_value());
  }
  CHECK(starts.size() == 20);
  CHECK(goals.size() == 20);
  for (Vertex v : goals) CHECK(starts.count(v) == 0);
  CHECK(to_map_text(generate_random_map(16, 12, 20, 4, "gen")) == to_map_text(g));
}
