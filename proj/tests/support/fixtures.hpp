#pragma once

#include <string>
#include <vector>

#include "mcpf/instance.hpp"
#include "mcpf/workspace_graph.hpp"

namespace mcpf::testing {

// Grid from map rows ('.' open, '@' blocked).
inline WorkspaceGraph grid(const std::vector<std::string>& rows) {
  std::string text = "type octile\nheight " + std::to_string(rows.size()) + "\nwidth " +
                     std::to_string(rows.empty() ? 0 : rows[0].size()) + "\nmap\n";
  for (const auto& r : rows) text += r + "\n";
  return load_map(text, "fixture");
}

inline Vertex at(const WorkspaceGraph& g, int row, int col) { return g.vertex(row, col); }

}  // namespace mcpf::testing
