#include "mcpf/conflict.hpp"

namespace mcpf {

ConflictSet check_conflict(const JointVertex& from, const JointVertex& to) {
  if (from.size() != to.size()) throw ContractViolation("joint vertices differ in agent count");
  ConflictSet out;
  const int n = static_cast<int>(to.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const bool vertex_conflict = to[i] == to[j];
      const bool edge_conflict = from[i] != to[i] && from[i] == to[j] && to[i] == from[j];
      if (vertex_conflict || edge_conflict) {
        out.insert(i);
        out.insert(j);
      }
    }
  }
  return out;
}

}  // namespace mcpf
