#include "mcpf/json_io.hpp"

#include <algorithm>
#include <filesystem>
#include <optional>
#include <fstream>
#include <sstream>

namespace mcpf {

namespace {

Json cell_json(const WorkspaceGraph& g, Vertex v) {
  const Cell c = g.cell(v);
  return Json::array({c.row, c.col});
}

Json cells_json(const WorkspaceGraph& g, const std::vector<Vertex>& vs) {
  Json out = Json::array();
  for (Vertex v : vs) out.push_back(cell_json(g, v));
  return out;
}

Json agents_json(AgentSet s) {
  Json out = Json::array();
  for (int i : s.members()) out.push_back(i);
  return out;
}

[[noreturn]] void schema_error(const std::string& what) { throw ParseError(0, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) schema_error(std::string("missing field '") + key + "'");
  return j.at(key);
}

Vertex cell_from(const WorkspaceGraph& g, const Json& c) {
  if (!c.is_array() || c.size() != 2 || !c[0].is_number_integer() || !c[1].is_number_integer())
    schema_error("cells must be [row, col] integer pairs");
  const int r = c[0].get<int>(), col = c[1].get<int>();
  if (!g.in_bounds(r, col)) schema_error("cell [" + std::to_string(r) + ", " + std::to_string(col) + "] is off the map");
  return g.vertex(r, col);
}

std::vector<Vertex> cells_from(const WorkspaceGraph& g, const Json& arr) {
  if (!arr.is_array()) schema_error("expected an array of cells");
  std::vector<Vertex> out;
  for (const auto& c : arr) out.push_back(cell_from(g, c));
  return out;
}

AgentSet agents_from(const Json& arr, int n) {
  if (!arr.is_array()) schema_error("eligibility entries must be arrays of agent indices");
  AgentSet s;
  for (const auto& x : arr) {
    if (!x.is_number_integer() || x.get<int>() < 0 || x.get<int>() >= n)
      schema_error("eligibility names an unknown agent");
    s.insert(x.get<int>());
  }
  return s;
}

Json stats_json(const SearchStats& s, bool timing) {
  Json j = {{"expansions", s.expansions},     {"generations", s.generations},
            {"mhpp_calls", s.mhpp_calls},     {"policy_builds", s.policy_builds},
            {"requeues", s.requeues},         {"reopens", s.reopens},
            {"reinsertions", s.reinsertions()}};
  if (timing) {
    j["mhpp_time_s"] = s.mhpp_time;
    j["total_time_s"] = s.total_time;
    j["wall_time_s"] = s.wall_time;
  }
  return j;
}

void put_path(Json& j, const WorkspaceGraph& g, const JointPath& p) {
  Json steps = Json::array();
  for (const auto& s : p.steps) steps.push_back(cells_json(g, s));
  j["path"] = std::move(steps);

  // claimed target indices after each step
  Json claimed = Json::array();
  std::vector<int> have;
  std::size_t next = 0;
  for (std::size_t t = 0; t < p.steps.size(); ++t) {
    while (next < p.claims.size() && p.claims[next].t == static_cast<int>(t)) have.push_back(p.claims[next++].target);
    std::vector<int> sorted = have;
    std::sort(sorted.begin(), sorted.end());
    claimed.push_back(sorted);
  }
  j["claimed"] = std::move(claimed);
  Json claims = Json::array();
  for (const auto& c : p.claims) claims.push_back({{"t", c.t}, {"agent", c.agent}, {"target", c.target}});
  j["claims"] = std::move(claims);
}

}  // namespace

Json problem_to_json(const WorkspaceGraph& g, const Instance& inst) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["map"] = {{"name", g.name()}, {"width", g.width()}, {"height", g.height()}, {"rows", g.rows()}};
  j["agents"] = inst.num_agents;
  j["starts"] = cells_json(g, inst.starts);
  j["goals"] = cells_json(g, inst.goals);
  j["targets"] = cells_json(g, inst.targets);
  Json te = Json::array(), ge = Json::array();
  for (AgentSet s : inst.target_eligibility) te.push_back(agents_json(s));
  for (AgentSet s : inst.goal_eligibility) ge.push_back(agents_json(s));
  j["target_eligibility"] = std::move(te);
  j["goal_eligibility"] = std::move(ge);
  return j;
}

static Problem problem_from_json_unchecked(const Json& j, const std::string& base_dir) {
  const Json& schema = field(j, "schema");
  if (!schema.is_number_integer() || schema.get<int>() != kSchemaVersion)
    schema_error("unsupported schema version");

  std::optional<WorkspaceGraph> g;
  if (j.contains("map")) {
    const Json& m = j.at("map");
    const Json& rows = field(m, "rows");
    if (!rows.is_array()) schema_error("map rows must be an array of strings");
    std::ostringstream text;
    text << "type octile\nheight " << rows.size() << "\nwidth "
         << (rows.empty() ? 0 : rows[0].get<std::string>().size()) << "\nmap\n";
    for (const auto& r : rows) {
      if (!r.is_string()) schema_error("map rows must be strings");
      text << r.get<std::string>() << '\n';
    }
    g = load_map(text.str(), m.value("name", std::string{}));
  } else if (j.contains("map_file")) {
    g = load_map_file((std::filesystem::path(base_dir) / j.at("map_file").get<std::string>()).string());
  } else {
    schema_error("instance needs 'map' or 'map_file'");
  }

  Instance inst;
  const Json& n = field(j, "agents");
  if (!n.is_number_integer() || n.get<int>() < 1 || n.get<int>() > kMaxAgents)
    schema_error("'agents' must be an integer in [1, 64]");
  inst.num_agents = n.get<int>();
  inst.starts = cells_from(*g, field(j, "starts"));
  inst.goals = cells_from(*g, field(j, "goals"));
  inst.targets = cells_from(*g, j.contains("targets") ? j.at("targets") : Json::array());
  if (j.contains("target_eligibility")) {
    for (const auto& e : j.at("target_eligibility")) inst.target_eligibility.push_back(agents_from(e, inst.num_agents));
  } else {
    inst.target_eligibility.assign(inst.targets.size(), AgentSet::all(inst.num_agents));
  }
  if (j.contains("goal_eligibility")) {
    for (const auto& e : j.at("goal_eligibility")) inst.goal_eligibility.push_back(agents_from(e, inst.num_agents));
  } else {
    inst.goal_eligibility.assign(inst.goals.size(), AgentSet::all(inst.num_agents));
  }
  validate_instance(*g, inst);
  return Problem{std::move(*g), std::move(inst)};
}

Json config_to_json(const SearchConfig& cfg) {
  return {{"mode", to_string(cfg.mode)},
          {"w", cfg.w},
          {"mhpp", to_string(cfg.mhpp)},
          {"dominance", to_string(cfg.dominance)},
          {"strict_backprop", cfg.strict_backprop},
          {"time_limit_s", cfg.time_limit}};
}

Json result_to_json(const WorkspaceGraph& g, const SearchConfig& cfg,
                    const SolveResult& r, bool timing) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["status"] = to_string(r.status);
  if (r.status == SolveStatus::Solved) j["makespan"] = r.makespan;
  j["config"] = config_to_json(cfg);
  j["stats"] = stats_json(r.stats, timing);
  if (r.status == SolveStatus::Solved) put_path(j, g, r.path);
  return j;
}

Json oracle_to_json(const WorkspaceGraph& g, const OracleResult& r) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["status"] = to_string(r.status);
  if (r.status == OracleStatus::Solved) j["makespan"] = r.makespan;
  j["states"] = r.states;
  if (!r.reason.empty()) j["reason"] = r.reason;
  if (r.status == OracleStatus::Solved) put_path(j, g, r.path);
  return j;
}

Json report_to_json(const ValidationReport& rep) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["ok"] = rep.ok();
  j["makespan"] = rep.makespan;
  Json vs = Json::array();
  for (const auto& v : rep.violations)
    vs.push_back({{"kind", to_string(v.kind)},
                  {"t", v.t},
                  {"agents", v.agents},
                  {"target", v.target},
                  {"message", v.message}});
  j["violations"] = std::move(vs);
  return j;
}

static JointPath path_from_json_unchecked(const WorkspaceGraph& g, const Json& j) {
  JointPath p;
  const Json& steps = field(j, "path");
  if (!steps.is_array()) schema_error("'path' must be an array of joint vertices");
  for (const auto& s : steps) p.steps.push_back(cells_from(g, s));
  if (j.contains("claims")) {
    for (const auto& c : j.at("claims")) {
      if (!c.is_object()) schema_error("claims must be objects");
      p.claims.push_back(Claim{field(c, "t").get<int>(), field(c, "agent").get<int>(),
                               field(c, "target").get<int>()});
    }
  }
  return p;
}

Problem problem_from_json(const Json& j, const std::string& base_dir) {
  try {
    return problem_from_json_unchecked(j, base_dir);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, e.what());
  }
}

JointPath path_from_json(const WorkspaceGraph& g, const Json& j) {
  try {
    return path_from_json_unchecked(g, j);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(0, path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace mcpf
