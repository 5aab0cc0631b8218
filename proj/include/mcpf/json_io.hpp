#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "mcpf/dms_star.hpp"
#include "mcpf/instance.hpp"
#include "mcpf/oracle.hpp"
#include "mcpf/workspace_graph.hpp"

namespace mcpf {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// Map plus instance, read from / written to one document. Cells are [row, col].
struct Problem {
  WorkspaceGraph graph;
  Instance inst;
};

// Embeds the map rows so the document is self-contained.
Json problem_to_json(const WorkspaceGraph& g, const Instance& inst);
// Accepts an embedded "map" object or a "map_file" path resolved against
// `base_dir`. Throws ParseError on schema problems and ContractViolation if
// the instance itself is invalid.
Problem problem_from_json(const Json& j, const std::string& base_dir = ".");

Json config_to_json(const SearchConfig& cfg);

// Status, makespan, stats, the joint path, claimed targets per step, and the
// claim events. With timing = false the wall-clock fields are left out.
Json result_to_json(const WorkspaceGraph& g, const SearchConfig& cfg,
                    const SolveResult& r, bool timing = true);
Json oracle_to_json(const WorkspaceGraph& g, const OracleResult& r);
Json report_to_json(const ValidationReport& rep);

// Reads "path" and "claims" out of a result document.
JointPath path_from_json(const WorkspaceGraph& g, const Json& j);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace mcpf
