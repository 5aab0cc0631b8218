#pragma once

#include <vector>

#include "mcpf/instance.hpp"
#include "mcpf/mhpp.hpp"
#include "mcpf/workspace_graph.hpp"

namespace mcpf {

// Cost vector after one joint step at time depth -> depth + 1. Waiting on an
// eligible goal is free; every other action charges the agent up to depth + 1
// (so an agent that leaves a goal pays for the time it spent parked).
std::vector<Cost> step_costs(const VertexRoles& roles, const JointVertex& from,
                             const JointVertex& to, const std::vector<Cost>& g, int depth);

// The label a policy is rooted at.
struct PolicyOrigin {
  JointVertex v;
  TargetBits claimed;
  std::vector<Cost> g;
  int depth = 0;
};

// Joint path obtained by expanding a joint sequence with shortest paths, padded
// with goal waits so every individual path has the same length.
struct Policy {
  JointSequence sequence;
  std::vector<std::vector<Vertex>> paths;   // [agent][step], all length() + 1 long
  std::vector<int> arrival;                 // step at which agent i reaches its goal
  std::vector<std::vector<int>> visit_step;  // [agent][k]: step reaching sequence target k
  std::vector<TargetBits> claimed;          // a_k
  std::vector<std::vector<Cost>> costs;     // g_k

  int length() const { return paths.empty() ? 0 : static_cast<int>(paths[0].size()) - 1; }
  JointVertex joint_at(int step) const;
  Vertex next(int agent, int step) const;
  // Cost-to-go of the agent along the policy from `step`.
  Cost remaining(int agent, int step) const { return arrival[agent] > step ? arrival[agent] - step : 0; }
  // Targets of the agent's route not yet reached at `step`.
  std::vector<int> pending_targets(int agent, int step) const;
};

// Expands `seq` from `origin`. Throws ContractViolation if a route does not
// start at the origin vertex of its agent. With trace = false the per-step
// claimed/costs vectors are left empty (the search only needs the paths).
Policy build_policy(const WorkspaceGraph& g, const Instance& inst, const VertexRoles& roles,
                    const PolicyOrigin& origin, const JointSequence& seq, bool trace = true);

}  // namespace mcpf
