#include "mcpf/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "mcpf/rng.hpp"

namespace mcpf {

namespace {

template <class T>
bool parse_number(const std::string& s, T& out) {
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && p == end;
}

}  // namespace

std::vector<ScenEntry> parse_scen(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  std::vector<ScenEntry> out;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!header) {
      if (line != "version 1" && line != "version 1.0") throw ParseError(line_no, "expected 'version 1'");
      header = true;
      continue;
    }
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    std::vector<std::string> f;
    std::istringstream row(line);
    for (std::string tok; row >> tok;) f.push_back(tok);
    if (f.size() != 9)
      throw ParseError(line_no, "expected 9 fields, found " + std::to_string(f.size()));
    ScenEntry e;
    e.map = f[1];
    if (!parse_number(f[0], e.bucket) || !parse_number(f[2], e.width) ||
        !parse_number(f[3], e.height) || !parse_number(f[4], e.start.col) ||
        !parse_number(f[5], e.start.row) || !parse_number(f[6], e.goal.col) ||
        !parse_number(f[7], e.goal.row) || !parse_number(f[8], e.optimal))
      throw ParseError(line_no, "malformed numeric field");
    if (e.width <= 0 || e.height <= 0 || e.start.col < 0 || e.start.row < 0 || e.goal.col < 0 ||
        e.goal.row < 0 || e.start.col >= e.width || e.goal.col >= e.width ||
        e.start.row >= e.height || e.goal.row >= e.height)
      throw ParseError(line_no, "coordinates outside the stated map size");
    out.push_back(std::move(e));
  }
  if (!header) throw ParseError(1, "expected 'version 1'");
  return out;
}

std::vector<ScenEntry> load_scen_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scen(buf.str());
}

std::string to_scen_text(const std::vector<ScenEntry>& entries) {
  std::ostringstream out;
  out << "version 1\n";
  for (const auto& e : entries) {
    out << e.bucket << '\t' << e.map << '\t' << e.width << '\t' << e.height << '\t' << e.start.col
        << '\t' << e.start.row << '\t' << e.goal.col << '\t' << e.goal.row << '\t' << std::fixed
        << std::setprecision(8) << e.optimal << '\n';
  }
  return out.str();
}

EligibilitySpec EligibilitySpec::parse(const std::string& text) {
  if (text == "all") return {};
  if (text.rfind("random:", 0) == 0) {
    EligibilitySpec s;
    s.mode = Mode::Random;
    if (!parse_number(text.substr(7), s.k) || s.k < 1)
      throw ContractViolation("random eligibility needs a positive subset size");
    return s;
  }
  throw ContractViolation("eligibility must be 'all' or 'random:K'");
}

std::string EligibilitySpec::str() const {
  return mode == Mode::All ? "all" : "random:" + std::to_string(k);
}

Instance make_instance(const WorkspaceGraph& g, const std::vector<ScenEntry>& scen, int n, int m,
                       std::uint64_t seed, const EligibilitySpec& elig) {
  if (n < 1) throw ContractViolation("need at least one agent");
  if (m < 0 || m > kMaxTargets) throw ContractViolation("target count out of range");
  if (static_cast<int>(scen.size()) < n)
    throw ContractViolation("scenario has " + std::to_string(scen.size()) + " rows, need " +
                            std::to_string(n));
  auto to_vertex = [&](Cell c) {
    if (!g.in_bounds(c.row, c.col) || !g.passable(g.vertex(c)))
      throw ContractViolation("scenario cell (" + std::to_string(c.row) + "," + std::to_string(c.col) +
                              ") is not a passable map cell");
    return g.vertex(c);
  };

  Instance inst;
  inst.num_agents = n;
  std::set<Vertex> used;
  for (int i = 0; i < n; ++i) {
    inst.starts.push_back(to_vertex(scen[i].start));
    inst.goals.push_back(to_vertex(scen[i].goal));
    used.insert(inst.starts.back());
    used.insert(inst.goals.back());
  }
  std::vector<Vertex> pool;
  for (std::size_t r = n; r < scen.size(); ++r) {
    const Vertex v = to_vertex(scen[r].start);
    if (used.insert(v).second) pool.push_back(v);
  }
  if (static_cast<int>(pool.size()) < m)
    throw ContractViolation("scenario supplies only " + std::to_string(pool.size()) +
                            " free target cells, need " + std::to_string(m));
  SeededRng rng(seed);
  rng.shuffle(pool);
  inst.targets.assign(pool.begin(), pool.begin() + m);

  for (int k = 0; k < m; ++k) {
    if (elig.mode == EligibilitySpec::Mode::All) {
      inst.target_eligibility.push_back(AgentSet::all(n));
      continue;
    }
    std::vector<int> agents(n);
    for (int i = 0; i < n; ++i) agents[i] = i;
    rng.shuffle(agents);
    AgentSet s;
    for (int i = 0; i < std::min(elig.k, n); ++i) s.insert(agents[i]);
    inst.target_eligibility.push_back(s);
  }
  inst.goal_eligibility.assign(n, AgentSet::all(n));
  return inst;
}

WorkspaceGraph generate_random_map(int width, int height, int percent, std::uint64_t seed,
                                   const std::string& name) {
  if (width < 1 || height < 1 || percent < 0 || percent > 100)
    throw ContractViolation("bad map dimensions or obstacle percentage");
  const std::size_t cells = static_cast<std::size_t>(width) * height;
  const std::size_t blocked = cells * static_cast<std::size_t>(percent) / 100;
  std::vector<std::size_t> order(cells);
  for (std::size_t k = 0; k < cells; ++k) order[k] = k;
  SeededRng rng(seed);
  rng.shuffle(order);
  std::vector<bool> passable(cells, true);
  for (std::size_t k = 0; k < blocked; ++k) passable[order[k]] = false;
  return WorkspaceGraph(width, height, std::move(passable), name);
}

std::vector<ScenEntry> generate_scen(const WorkspaceGraph& g, const std::string& map_name, int count,
                                     std::uint64_t seed) {
  // largest component by BFS flood fill
  std::vector<int> comp(g.num_cells(), -1);
  std::vector<Vertex> best;
  for (Vertex s = 0; s < g.num_cells(); ++s) {
    if (!g.passable(s) || comp[s] >= 0) continue;
    std::vector<Vertex> members{s};
    comp[s] = s;
    for (std::size_t k = 0; k < members.size(); ++k)
      for (Vertex u : g.neighbors(members[k]))
        if (comp[u] < 0) {
          comp[u] = s;
          members.push_back(u);
        }
    if (members.size() > best.size()) best = std::move(members);
  }
  if (static_cast<int>(best.size()) < 2 * count)
    throw ContractViolation("largest component too small for " + std::to_string(count) + " rows");
  std::sort(best.begin(), best.end());
  SeededRng rng(seed);
  rng.shuffle(best);

  std::vector<ScenEntry> out;
  for (int r = 0; r < count; ++r) {
    ScenEntry e;
    e.map = map_name;
    e.width = g.width();
    e.height = g.height();
    e.start = g.cell(best[r]);
    e.goal = g.cell(best[count + r]);
    const Cost d = *g.shortest_cost(best[r], best[count + r]);
    e.optimal = d;
    e.bucket = d / 4;
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace mcpf
