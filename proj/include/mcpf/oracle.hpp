#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mcpf/instance.hpp"
#include "mcpf/joint_path.hpp"
#include "mcpf/target_graph.hpp"
#include "mcpf/workspace_graph.hpp"

namespace mcpf {

// Size guards for the brute-force joint search. Exceeding any of them is a
// refusal, never a guessed answer.
struct OracleLimits {
  int max_agents = 3;
  int max_targets = 4;
  int max_cells = 100;  // width * height
  std::int64_t max_states = 4'000'000;
};

enum class OracleStatus { Solved, Unsolvable, Refused };

std::string to_string(OracleStatus s);

struct OracleResult {
  OracleStatus status = OracleStatus::Refused;
  Cost makespan = 0;
  JointPath path;
  std::int64_t states = 0;
  std::string reason;  // why the oracle refused
};

// Breadth-first search over (joint vertex, claimed targets) by timestep. The
// first layer containing a finished state gives the optimal makespan: after
// that time every agent only waits on its goal, which costs nothing.
OracleResult joint_astar(const Instance& inst, const WorkspaceGraph& g,
                         const OracleLimits& limits = {});

// Minimum over all target partitions, per-agent orders and goal assignments of
// the largest agent cost. nullopt when nothing is feasible. Throws
// ContractViolation above 5 unvisited targets or 3 agents.
std::optional<Cost> mhpp_brute(const TargetGraph& tg);

enum class ViolationKind {
  Malformed,
  NotAdjacent,
  VertexConflict,
  EdgeConflict,
  BadClaim,
  DuplicateClaim,
  MissingTarget,
  BadGoal,
  SharedGoal,
};

std::string to_string(ViolationKind k);

struct Violation {
  ViolationKind kind;
  int t = -1;  // timestep; a move from t to t + 1 is reported at t
  std::vector<int> agents;
  int target = -1;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  Cost makespan = 0;  // largest individual arrival cost along the path
  bool ok() const { return violations.empty(); }
};

// Checks adjacency, conflicts, claims, coverage and terminal goals. Reports
// every problem it finds and never throws.
ValidationReport validate_solution(const WorkspaceGraph& g, const Instance& inst,
                                   const JointPath& path);

}  // namespace mcpf
