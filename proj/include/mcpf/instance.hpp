#pragma once

#include <optional>
#include <vector>

#include "mcpf/types.hpp"
#include "mcpf/workspace_graph.hpp"

namespace mcpf {

// An MCPF-max problem: N agents, ordered targets (index m is the binary-vector
// position), N goals, and the eligibility map for every target and goal.
struct Instance {
  int num_agents = 0;
  std::vector<Vertex> starts;
  std::vector<Vertex> goals;
  std::vector<Vertex> targets;
  std::vector<AgentSet> target_eligibility;  // parallel to targets
  std::vector<AgentSet> goal_eligibility;    // parallel to goals

  int num_targets() const { return static_cast<int>(targets.size()); }

  // Every agent eligible for every target and goal.
  static Instance all_eligible(std::vector<Vertex> starts, std::vector<Vertex> goals,
                               std::vector<Vertex> targets);
};

// Throws ContractViolation describing the first broken invariant.
void validate_instance(const WorkspaceGraph& g, const Instance& inst);

// Reverse lookups from workspace vertex to target / goal index.
class VertexRoles {
 public:
  VertexRoles(const WorkspaceGraph& g, const Instance& inst);

  std::optional<int> target_at(Vertex v) const {
    const int m = target_of_[v];
    return m < 0 ? std::nullopt : std::optional<int>(m);
  }
  std::optional<int> goal_at(Vertex v) const {
    const int j = goal_of_[v];
    return j < 0 ? std::nullopt : std::optional<int>(j);
  }
  // True iff v is a goal and `agent` may terminate there.
  bool eligible_goal(Vertex v, int agent) const {
    const int j = goal_of_[v];
    return j >= 0 && goal_eligibility_[j].contains(agent);
  }
  bool eligible_target(int m, int agent) const { return target_eligibility_[m].contains(agent); }

 private:
  std::vector<int> target_of_;
  std::vector<int> goal_of_;
  std::vector<AgentSet> target_eligibility_;
  std::vector<AgentSet> goal_eligibility_;
};

// Apply the claiming rule for one timestep: every agent standing on an
// unclaimed target it is eligible for claims it. Returns (agent, target) pairs.
std::vector<std::pair<int, int>> apply_claims(const VertexRoles& roles, const JointVertex& v,
                                              TargetBits& claimed);

}  // namespace mcpf
