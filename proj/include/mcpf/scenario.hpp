#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mcpf/instance.hpp"
#include "mcpf/workspace_graph.hpp"

namespace mcpf {

// One row of a movingai .scen file.
struct ScenEntry {
  int bucket = 0;
  std::string map;
  int width = 0;
  int height = 0;
  Cell start;
  Cell goal;
  double optimal = 0.0;
};

// Header `version 1` (or `version 1.0`), then tab-separated rows. Throws
// ParseError naming the offending line.
std::vector<ScenEntry> parse_scen(const std::string& text);
std::vector<ScenEntry> load_scen_file(const std::string& path);
std::string to_scen_text(const std::vector<ScenEntry>& entries);

struct EligibilitySpec {
  enum class Mode { All, Random } mode = Mode::All;
  int k = 0;  // subset size per target for Random

  static EligibilitySpec parse(const std::string& text);  // "all" or "random:K"
  std::string str() const;
};

// Starts and goals from the first n rows; m targets drawn (seeded) from the
// start cells of the remaining rows, distinct from every start and goal.
// Throws ContractViolation when the scen cannot supply them.
Instance make_instance(const WorkspaceGraph& g, const std::vector<ScenEntry>& scen, int n, int m,
                       std::uint64_t seed, const EligibilitySpec& elig = {});

// Random grid with about `percent` % blocked cells.
WorkspaceGraph generate_random_map(int width, int height, int percent, std::uint64_t seed,
                                   const std::string& name);

// `count` rows over the largest connected component; starts pairwise distinct
// and goals pairwise distinct and disjoint from every start.
std::vector<ScenEntry> generate_scen(const WorkspaceGraph& g, const std::string& map_name, int count,
                                     std::uint64_t seed);

}  // namespace mcpf
