#pragma once

#include <vector>

#include "mcpf/types.hpp"

namespace mcpf {

// Agent `agent` claims target `target` at timestep t.
struct Claim {
  int t = 0;
  int agent = 0;
  int target = 0;
  bool operator==(const Claim&) const = default;
};

// steps[t] is the joint vertex at time t; steps[0] holds the starts.
struct JointPath {
  std::vector<JointVertex> steps;
  std::vector<Claim> claims;
  bool operator==(const JointPath&) const = default;
};

}  // namespace mcpf
