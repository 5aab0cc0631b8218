#pragma once

#include "mcpf/types.hpp"

namespace mcpf {

// Agents involved in a vertex conflict (same cell after the step) or an edge
// conflict (two agents swapping across one edge) on the transition from -> to.
// Empty iff the joint move is conflict-free.
ConflictSet check_conflict(const JointVertex& from, const JointVertex& to);

}  // namespace mcpf
