#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "mcpf/instance.hpp"
#include "mcpf/policy.hpp"
#include "mcpf/types.hpp"

namespace mcpf {

using LabelId = int;
inline constexpr LabelId kNoLabel = -1;

// Search node: a joint path from the start identified by where it ends (v),
// which targets it claimed (a) and what each agent has paid so far (g).
struct Label {
  JointVertex v;
  TargetBits a;
  std::vector<Cost> g;
  int depth = 0;  // transitions from the root

  double f_temp = 0.0;
  std::optional<double> f_max;
  ConflictSet conflict;
  LabelId parent = kNoLabel;
  std::vector<LabelId> back_set;

  // Sequence/policy this label follows and its position along it. Set at
  // generation for on-policy labels, otherwise by target sequencing.
  std::shared_ptr<const Policy> policy;
  int policy_step = 0;
  bool on_policy = false;
  bool sequenced = false;
  std::vector<Cost> h;

  bool in_open = false;
  bool pruned = false;  // removed from its frontier set by a dominating label
  bool dead = false;    // no feasible joint sequence from here

  Cost g_max() const;
};

enum class DominanceRule { GMax, Vector };

// a visits every target b visits and at least one more.
bool binary_dominates(const TargetBits& a, const TargetBits& b);
bool binary_dominates(const std::vector<bool>& a, const std::vector<bool>& b);

// Label dominance at a shared joint vertex. GMax compares g_max only; Vector
// compares the cost vectors component-wise. Throws ContractViolation when the
// labels sit at different joint vertices.
bool label_dominates(const Label& l1, const Label& l2, DominanceRule rule);
bool labels_equal(const Label& l1, const Label& l2, DominanceRule rule);

// Parent heuristic decremented by one step per agent, floored at zero.
std::vector<Cost> simple_heu(const Label& parent);

// All targets claimed and every agent on a distinct goal it is eligible for.
bool check_success(const Instance& inst, const VertexRoles& roles, const Label& l);

}  // namespace mcpf
