#pragma once

#include <vector>

#include "mcpf/target_graph.hpp"

namespace mcpf {

// gamma^i: the agent's current vertex, the instance target indices it will
// claim in order, and the goal index it ends at.
struct AgentRoute {
  Vertex start = -1;
  std::vector<int> targets;
  int goal = -1;
  bool operator==(const AgentRoute&) const = default;
};

// One route per agent; every unvisited target appears in exactly one route.
struct JointSequence {
  std::vector<AgentRoute> routes;
  bool operator==(const JointSequence&) const = default;
};

inline constexpr int kDefaultExactCap = 12;

// h^i = sum of target-graph costs along gamma^i. Throws ContractViolation if
// a route references a vertex absent from tg.
std::vector<Cost> sequence_cost(const TargetGraph& tg, const JointSequence& seq);
Cost max_cost(const std::vector<Cost>& h);

// Throws ContractViolation unless seq is a feasible joint sequence over tg
// (starts, coverage, eligibility, distinct eligible goals, finite costs).
void check_sequence(const TargetGraph& tg, const JointSequence& seq);

// Exact min-max MHPP: per-agent Held-Karp tables over target subsets, then a
// threshold search over (target partition, goal assignment). Refuses with
// ContractViolation when more than `exact_cap` targets are unvisited; throws
// InfeasibleError when no feasible joint sequence exists.
JointSequence solve_mhpp_exact(const TargetGraph& tg, int exact_cap = kDefaultExactCap);

// Greedy insertion followed by relocate / 2-opt / goal-exchange local search.
// Feasible but not necessarily optimal; identical to the exact solver when no
// targets are unvisited.
JointSequence solve_mhpp_heuristic(const TargetGraph& tg);

}  // namespace mcpf
