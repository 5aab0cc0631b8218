#include "mcpf/instance.hpp"

#include <set>
#include <string>

namespace mcpf {

Instance Instance::all_eligible(std::vector<Vertex> starts, std::vector<Vertex> goals,
                                std::vector<Vertex> targets) {
  Instance inst;
  inst.num_agents = static_cast<int>(starts.size());
  const AgentSet everyone = AgentSet::all(inst.num_agents);
  inst.target_eligibility.assign(targets.size(), everyone);
  inst.goal_eligibility.assign(goals.size(), everyone);
  inst.starts = std::move(starts);
  inst.goals = std::move(goals);
  inst.targets = std::move(targets);
  return inst;
}

void validate_instance(const WorkspaceGraph& g, const Instance& inst) {
  const int n = inst.num_agents;
  if (n <= 0 || n > kMaxAgents) throw ContractViolation("agent count must be in [1, 64]");
  if (inst.num_targets() > kMaxTargets) throw ContractViolation("at most 128 targets supported");
  if (static_cast<int>(inst.starts.size()) != n) throw ContractViolation("need one start per agent");
  if (static_cast<int>(inst.goals.size()) != n) throw ContractViolation("need exactly N goals");
  if (inst.target_eligibility.size() != inst.targets.size())
    throw ContractViolation("target eligibility size mismatch");
  if (inst.goal_eligibility.size() != inst.goals.size())
    throw ContractViolation("goal eligibility size mismatch");

  auto check_cells = [&](const std::vector<Vertex>& vs, const char* what) {
    std::set<Vertex> seen;
    for (Vertex v : vs) {
      if (!g.passable(v))
        throw ContractViolation(std::string(what) + " vertex " + std::to_string(v) +
                                " is not passable");
      if (!seen.insert(v).second)
        throw ContractViolation(std::string(what) + " vertices must be pairwise distinct");
    }
  };
  check_cells(inst.starts, "start");
  check_cells(inst.goals, "goal");
  check_cells(inst.targets, "target");

  const AgentSet everyone = AgentSet::all(n);
  for (const auto& e : inst.target_eligibility)
    if (e.empty() || !e.subset_of(everyone))
      throw ContractViolation("every target needs a nonempty eligible agent subset");
  for (const auto& e : inst.goal_eligibility)
    if (e.empty() || !e.subset_of(everyone))
      throw ContractViolation("every goal needs a nonempty eligible agent subset");
}

VertexRoles::VertexRoles(const WorkspaceGraph& g, const Instance& inst)
    : target_of_(g.num_cells(), -1),
      goal_of_(g.num_cells(), -1),
      target_eligibility_(inst.target_eligibility),
      goal_eligibility_(inst.goal_eligibility) {
  for (int m = 0; m < inst.num_targets(); ++m) target_of_[inst.targets[m]] = m;
  for (int j = 0; j < static_cast<int>(inst.goals.size()); ++j) goal_of_[inst.goals[j]] = j;
}

std::vector<std::pair<int, int>> apply_claims(const VertexRoles& roles, const JointVertex& v,
                                              TargetBits& claimed) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < static_cast<int>(v.size()); ++i) {
    const auto m = roles.target_at(v[i]);
    if (m && !claimed.test(*m) && roles.eligible_target(*m, i)) {
      claimed.set(*m);
      out.emplace_back(i, *m);
    }
  }
  return out;
}

}  // namespace mcpf
