#include "mcpf/target_graph.hpp"

#include <string>

namespace mcpf {

TargetGraph::TargetGraph(int num_agents, std::vector<TargetNode> nodes, std::vector<Cost> costs,
                         std::vector<AgentSet> target_eligibility,
                         std::vector<AgentSet> goal_eligibility)
    : num_agents_(num_agents),
      num_targets_(static_cast<int>(nodes.size()) - 2 * num_agents),
      nodes_(std::move(nodes)),
      costs_(std::move(costs)),
      target_eligibility_(std::move(target_eligibility)),
      goal_eligibility_(std::move(goal_eligibility)) {
  if (num_targets_ < 0 || static_cast<int>(target_eligibility_.size()) != num_targets_ ||
      static_cast<int>(goal_eligibility_.size()) != num_agents_ ||
      costs_.size() != nodes_.size() * nodes_.size())
    throw ContractViolation("inconsistent target graph layout");
}

int TargetGraph::local_target(int m) const {
  for (int k = 0; k < num_targets_; ++k)
    if (target_index(k) == m) return k;
  return -1;
}

TargetGraph build_target_graph(const WorkspaceGraph& g, const Instance& inst,
                               const JointVertex& positions, const TargetBits& claimed) {
  const int n = inst.num_agents;
  if (static_cast<int>(positions.size()) != n)
    throw ContractViolation("joint vertex size does not match agent count");

  std::vector<TargetNode> nodes;
  std::vector<AgentSet> target_elig;
  for (int i = 0; i < n; ++i) nodes.push_back({NodeRole::AgentPosition, i, positions[i]});
  for (int m = 0; m < inst.num_targets(); ++m) {
    if (claimed.test(m)) continue;
    nodes.push_back({NodeRole::Target, m, inst.targets[m]});
    target_elig.push_back(inst.target_eligibility[m]);
  }
  for (int j = 0; j < n; ++j) nodes.push_back({NodeRole::Goal, j, inst.goals[j]});

  // Only targets and goals are used as BFS roots; the metric is symmetric.
  const std::size_t size = nodes.size();
  std::vector<Cost> costs(size * size, kInfiniteCost);
  for (std::size_t u = 0; u < size; ++u) costs[u * size + u] = 0;
  for (std::size_t v = n; v < size; ++v) {
    const auto& dist = g.distances_to(nodes[v].vertex);
    for (std::size_t u = 0; u < size; ++u) {
      const Cost d = dist[nodes[u].vertex];
      if (d < 0) continue;
      costs[u * size + v] = d;
      costs[v * size + u] = d;
    }
  }
  // agent-agent pairs are never used by any sequence but keep the matrix metric
  for (int i = 0; i < n; ++i) {
    const auto& dist = g.distances_to(positions[i]);
    for (int k = 0; k < n; ++k)
      if (dist[positions[k]] >= 0) costs[static_cast<std::size_t>(k) * size + i] = dist[positions[k]];
  }

  TargetGraph tg(n, std::move(nodes), std::move(costs), std::move(target_elig),
                 inst.goal_eligibility);

  for (int k = 0; k < tg.num_targets(); ++k) {
    bool served = false;
    for (int i : tg.target_eligibility(k).members())
      if (tg.cost(tg.agent_node(i), tg.target_node(k)) < kInfiniteCost) served = true;
    if (!served)
      throw InfeasibleError(tg.node(tg.target_node(k)).vertex,
                            "target " + std::to_string(tg.target_index(k)) +
                                " is unreachable for every eligible agent");
  }
  for (int i = 0; i < n; ++i) {
    bool served = false;
    for (int j = 0; j < n; ++j)
      if (tg.goal_eligibility(j).contains(i) && tg.cost(i, tg.goal_node(j)) < kInfiniteCost)
        served = true;
    if (!served)
      throw InfeasibleError(positions[i],
                            "agent " + std::to_string(i) + " cannot reach any eligible goal");
  }
  return tg;
}

}  // namespace mcpf
