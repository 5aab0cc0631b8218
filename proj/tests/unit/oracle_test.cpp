#include <doctest.h>

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "generators.hpp"
#include "mcpf/oracle.hpp"

using namespace mcpf;
using mcpf::testing::at;
using mcpf::testing::grid;

namespace {

bool has(const ValidationReport& r, ViolationKind k) {
  return std::any_of(r.violations.begin(), r.violations.end(), [&](const Violation& v) { return v.kind == k; });
}

}  // namespace

TEST_CASE("oracle: single agent is a shortest path") {
  const auto g = grid({"....", ".@@.", "...."});
  auto inst = Instance::all_eligible({at(g, 0, 0)}, {at(g, 2, 3)}, {});
  const auto r = joint_astar(inst, g);
  REQUIRE(r.status == OracleStatus::Solved);
  CHECK(r.makespan == *g.shortest_cost(at(g, 0, 0), at(g, 2, 3)));
  CHECK(validate_solution(g, inst, r.path).ok());
}

TEST_CASE("oracle: swaps and refusals") {
  const auto g = grid({".."});
  auto inst = Instance::all_eligible({at(g, 0, 0), at(g, 0, 1)}, {at(g, 0, 1), at(g, 0, 0)}, {});
  inst.goal_eligibility[0] = AgentSet::single(0);
  inst.goal_eligibility[1] = AgentSet::single(1);
  CHECK(joint_astar(inst, g).status == OracleStatus::Unsolvable);

  // with free goal choice nobody needs to move
  auto free = Instance::all_eligible({at(g, 0, 0), at(g, 0, 1)}, {at(g, 0, 1), at(g, 0, 0)}, {});
  const auto r = joint_astar(free, g);
  REQUIRE(r.status == OracleStatus::Solved);
  CHECK(r.makespan == 0);

  const auto big = grid(std::vector<std::string>(11, "..........."));
  auto far = Instance::all_eligible({at(big, 0, 0)}, {at(big, 10, 10)}, {});
  const auto refused = joint_astar(far, big);
  CHECK(refused.status == OracleStatus::Refused);
  CHECK_FALSE(refused.reason.empty());

  OracleLimits tight;
  tight.max_states = 3;
  const auto g3 = grid({"....."});
  auto walk = Instance::all_eligible({at(g3, 0, 0)}, {at(g3, 0, 4)}, {});
  CHECK(joint_astar(walk, g3, tight).status == OracleStatus::Refused);
}

TEST_CASE("oracle solutions are valid on random small cases") {
  std::mt19937_64 rng(3);
  for (int it = 0; it < 60; ++it) {
    const auto c = mcpf::testing::random_small_case(rng, it % 2 == 1);
    const auto r = joint_astar(c.inst, c.graph);
    if (r.status != OracleStatus::Solved) continue;
    const auto rep = validate_solution(c.graph, c.inst, r.path);
    CHECK(rep.ok());
    CHECK(rep.makespan == r.makespan);
  }
}

TEST_CASE("mhpp_brute small cases") {
  const auto g = grid({"....."});
  auto goals_only = Instance::all_eligible({at(g, 0, 0), at(g, 0, 1)}, {at(g, 0, 3), at(g, 0, 4)}, {});
  const auto tg = build_target_graph(g, goals_only, goals_only.starts, {});
  // min over the two assignments of the larger trip: max(3,3) beats max(4,2)
  CHECK(mhpp_brute(tg) == 3);

  auto one = Instance::all_eligible({at(g, 0, 2)}, {at(g, 0, 3)}, {at(g, 0, 0), at(g, 0, 4)});
  const auto tg1 = build_target_graph(g, one, one.starts, {});
  // 2 -> 0 -> 4 -> 3 = 2 + 4 + 1 beats 2 -> 4 -> 0 -> 3 = 2 + 4 + 3
  CHECK(mhpp_brute(tg1) == 7);

  const auto g6 = grid({"........"});
  auto six = Instance::all_eligible({at(g6, 0, 0)}, {at(g6, 0, 7)},
                                    {at(g6, 0, 1), at(g6, 0, 2), at(g6, 0, 3), at(g6, 0, 4), at(g6, 0, 5), at(g6, 0, 6)});
  CHECK_THROWS_AS(mhpp_brute(build_target_graph(g6, six, six.starts, {})), ContractViolation);
}

TEST_CASE("validator catches swaps, missing claims and bad goals") {
  const auto g = grid({"...."});
  auto inst = Instance::all_eligible({at(g, 0, 1), at(g, 0, 2)}, {at(g, 0, 2), at(g, 0, 1)}, {});
  JointPath swap;
  swap.steps = {{at(g, 0, 1), at(g, 0, 2)}, {at(g, 0, 2), at(g, 0, 1)}};
  const auto rep = validate_solution(g, inst, swap);
  REQUIRE(has(rep, ViolationKind::EdgeConflict));
  const auto it = std::find_if(rep.violations.begin(), rep.violations.end(),
                               [](const Violation& v) { return v.kind == ViolationKind::EdgeConflict; });
  // transitions are reported at their departure time
  CHECK(it->t == 0);

  auto with_target = Instance::all_eligible({at(g, 0, 0)}, {at(g, 0, 2)}, {at(g, 0, 3)});
  JointPath skip;
  skip.steps = {{at(g, 0, 0)}, {at(g, 0, 1)}, {at(g, 0, 2)}};
  const auto missing = validate_solution(g, with_target, skip);
  REQUIRE(has(missing, ViolationKind::MissingTarget));
  CHECK(std::any_of(missing.violations.begin(), missing.violations.end(),
                    [](const Violation& v) { return v.kind == ViolationKind::MissingTarget && v.target == 0; }));

  JointPath full;
  full.steps = {{at(g, 0, 0)}, {at(g, 0, 1)}, {at(g, 0, 2)}, {at(g, 0, 3)}, {at(g, 0, 2)}};
  full.claims = {Claim{3, 0, 0}};
  const auto good = validate_solution(g, with_target, full);
  CHECK(good.ok());
  CHECK(good.makespan == 4);

  JointPath jump = full;
  jump.steps[1] = {at(g, 0, 3)};
  CHECK(has(validate_solution(g, with_target, jump), ViolationKind::NotAdjacent));

  JointPath stray = full;
  stray.steps.pop_back();
  CHECK(has(validate_solution(g, with_target, stray), ViolationKind::BadGoal));

  JointPath same;
  same.steps = {{at(g, 0, 1), at(g, 0, 2)}, {at(g, 0, 1), at(g, 0, 1)}};
  CHECK(has(validate_solution(g, inst, same), ViolationKind::VertexConflict));

  JointPath empty;
  CHECK(has(validate_solution(g, inst, empty), ViolationKind::Malformed));
}
