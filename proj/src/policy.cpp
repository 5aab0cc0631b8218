#include "mcpf/policy.hpp"

#include <algorithm>
#include <string>

namespace mcpf {

std::vector<Cost> step_costs(const VertexRoles& roles, const JointVertex& from,
                             const JointVertex& to, const std::vector<Cost>& g, int depth) {
  std::vector<Cost> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const bool parked = from[i] == to[i] && roles.eligible_goal(from[i], static_cast<int>(i));
    out[i] = parked ? g[i] : depth + 1;
  }
  return out;
}

JointVertex Policy::joint_at(int step) const {
  JointVertex v(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i) v[i] = paths[i][std::min(step, length())];
  return v;
}

Vertex Policy::next(int agent, int step) const {
  return paths[agent][std::min(step + 1, length())];
}

std::vector<int> Policy::pending_targets(int agent, int step) const {
  std::vector<int> out;
  const auto& route = sequence.routes[agent];
  for (std::size_t k = 0; k < route.targets.size(); ++k)
    if (visit_step[agent][k] > step) out.push_back(route.targets[k]);
  return out;
}

Policy build_policy(const WorkspaceGraph& g, const Instance& inst, const VertexRoles& roles,
                    const PolicyOrigin& origin, const JointSequence& seq, bool trace) {
  const int n = inst.num_agents;
  if (static_cast<int>(seq.routes.size()) != n || static_cast<int>(origin.v.size()) != n)
    throw ContractViolation("policy origin and sequence disagree on agent count");

  Policy p;
  p.sequence = seq;
  p.paths.resize(n);
  p.arrival.resize(n);
  p.visit_step.resize(n);
  for (int i = 0; i < n; ++i) {
    const auto& route = seq.routes[i];
    if (route.start != origin.v[i])
      throw ContractViolation("route " + std::to_string(i) + " does not start at the origin vertex");
    auto& path = p.paths[i];
    path.push_back(origin.v[i]);
    auto extend = [&](Vertex to) {
      const auto leg = g.shortest_path(path.back(), to);
      path.insert(path.end(), leg.begin() + 1, leg.end());
    };
    for (int m : route.targets) {
      extend(inst.targets[m]);
      p.visit_step[i].push_back(static_cast<int>(path.size()) - 1);
    }
    extend(inst.goals[route.goal]);
    p.arrival[i] = static_cast<int>(path.size()) - 1;
  }

  int len = 0;
  for (const auto& path : p.paths) len = std::max(len, static_cast<int>(path.size()) - 1);
  for (auto& path : p.paths) path.resize(len + 1, path.back());
  if (!trace) return p;

  p.claimed.reserve(len + 1);
  p.costs.reserve(len + 1);
  TargetBits a = origin.claimed;
  apply_claims(roles, origin.v, a);
  p.claimed.push_back(a);
  p.costs.push_back(origin.g);
  JointVertex prev = origin.v;
  for (int k = 1; k <= len; ++k) {
    JointVertex cur = p.joint_at(k);
    apply_claims(roles, cur, a);
    p.claimed.push_back(a);
    p.costs.push_back(step_costs(roles, prev, cur, p.costs.back(), origin.depth + k - 1));
    prev = std::move(cur);
  }
  return p;
}

}  // namespace mcpf
