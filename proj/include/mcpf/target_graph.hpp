#pragma once

#include <limits>
#include <vector>

#include "mcpf/instance.hpp"
#include "mcpf/types.hpp"
#include "mcpf/workspace_graph.hpp"

namespace mcpf {

inline constexpr Cost kInfiniteCost = std::numeric_limits<Cost>::max() / 4;

enum class NodeRole { AgentPosition, Target, Goal };

struct TargetNode {
  NodeRole role;
  int index;  // agent i, target m, or goal j
  Vertex vertex;
};

// Complete graph over current agent positions, unvisited targets, and goals.
// Node layout: [0, N) agents, [N, N+K) unvisited targets in ascending target
// index, [N+K, N+K+N) goals. Unreachable pairs carry kInfiniteCost.
class TargetGraph {
 public:
  TargetGraph(int num_agents, std::vector<TargetNode> nodes, std::vector<Cost> costs,
              std::vector<AgentSet> target_eligibility, std::vector<AgentSet> goal_eligibility);

  int num_agents() const { return num_agents_; }
  int num_targets() const { return num_targets_; }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }

  int agent_node(int agent) const { return agent; }
  int target_node(int k) const { return num_agents_ + k; }
  int goal_node(int j) const { return num_agents_ + num_targets_ + j; }

  const TargetNode& node(int u) const { return nodes_[u]; }
  Cost cost(int u, int v) const { return costs_[static_cast<std::size_t>(u) * nodes_.size() + v]; }

  // local target k (0..K-1) <-> instance target index m
  int target_index(int k) const { return nodes_[target_node(k)].index; }
  int local_target(int m) const;  // -1 if m is not an unvisited target here

  AgentSet target_eligibility(int k) const { return target_eligibility_[k]; }
  AgentSet goal_eligibility(int j) const { return goal_eligibility_[j]; }

 private:
  int num_agents_;
  int num_targets_;
  std::vector<TargetNode> nodes_;
  std::vector<Cost> costs_;
  std::vector<AgentSet> target_eligibility_;
  std::vector<AgentSet> goal_eligibility_;
};

// Target graph for agents at `positions` with targets in `claimed` removed.
// Throws InfeasibleError when some unvisited target is unreachable for all of
// its eligible agents, or some agent cannot reach any eligible goal.
TargetGraph build_target_graph(const WorkspaceGraph& g, const Instance& inst,
                               const JointVertex& positions, const TargetBits& claimed);

}  // namespace mcpf
