#include "mcpf/workspace_graph.hpp"

#include <deque>
#include <fstream>
#include <mutex>
#include <sstream>

namespace mcpf {

namespace {

constexpr int kRowStep[4] = {-1, 1, 0, 0};
constexpr int kColStep[4] = {0, 0, -1, 1};

bool parse_int_field(std::string_view line, std::string_view key, int& out) {
  if (line.substr(0, key.size()) != key) return false;
  std::istringstream in{std::string(line.substr(key.size()))};
  int value = 0;
  std::string rest;
  if (!(in >> value) || value <= 0 || (in >> rest)) return false;
  out = value;
  return true;
}

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace

WorkspaceGraph::WorkspaceGraph(int width, int height, std::vector<bool> passable,
                               std::string name)
    : width_(width), height_(height), passable_(std::move(passable)), name_(std::move(name)) {
  if (width <= 0 || height <= 0) throw ContractViolation("grid dimensions must be positive");
  if (static_cast<int>(passable_.size()) != width * height)
    throw ContractViolation("passability mask size does not match grid dimensions");
}

WorkspaceGraph::WorkspaceGraph(const WorkspaceGraph& other)
    : width_(other.width_),
      height_(other.height_),
      passable_(other.passable_),
      name_(other.name_) {}

WorkspaceGraph& WorkspaceGraph::operator=(const WorkspaceGraph& other) {
  if (this == &other) return *this;
  width_ = other.width_;
  height_ = other.height_;
  passable_ = other.passable_;
  name_ = other.name_;
  std::unique_lock lock(cache_mutex_);
  bfs_cache_.clear();
  return *this;
}

WorkspaceGraph::WorkspaceGraph(WorkspaceGraph&& other) noexcept
    : width_(other.width_),
      height_(other.height_),
      passable_(std::move(other.passable_)),
      name_(std::move(other.name_)),
      bfs_cache_(std::move(other.bfs_cache_)) {}

WorkspaceGraph& WorkspaceGraph::operator=(WorkspaceGraph&& other) noexcept {
  width_ = other.width_;
  height_ = other.height_;
  passable_ = std::move(other.passable_);
  name_ = std::move(other.name_);
  bfs_cache_ = std::move(other.bfs_cache_);
  return *this;
}

WorkspaceGraph::~WorkspaceGraph() = default;

int WorkspaceGraph::num_passable() const {
  int n = 0;
  for (bool p : passable_) n += p ? 1 : 0;
  return n;
}

int WorkspaceGraph::num_edges() const {
  int edges = 0;
  for (int r = 0; r < height_; ++r) {
    for (int c = 0; c < width_; ++c) {
      if (!passable_[vertex(r, c)]) continue;
      if (c + 1 < width_ && passable_[vertex(r, c + 1)]) ++edges;
      if (r + 1 < height_ && passable_[vertex(r + 1, c)]) ++edges;
    }
  }
  return edges;
}

void WorkspaceGraph::require_passable(Vertex v, const char* what) const {
  if (!passable(v))
    throw ContractViolation(std::string(what) + ": vertex " + std::to_string(v) +
                            " is not a passable cell");
}

std::vector<Vertex> WorkspaceGraph::neighbors(Vertex v) const {
  require_passable(v, "neighbors");
  std::vector<Vertex> out;
  out.reserve(5);
  out.push_back(v);
  const Cell c = cell(v);
  for (int k = 0; k < 4; ++k) {
    const int r = c.row + kRowStep[k];
    const int col = c.col + kColStep[k];
    if (in_bounds(r, col) && passable_[vertex(r, col)]) out.push_back(vertex(r, col));
  }
  return out;
}

const std::vector<Cost>& WorkspaceGraph::distances_to(Vertex target) const {
  require_passable(target, "distances_to");
  {
    std::shared_lock lock(cache_mutex_);
    auto it = bfs_cache_.find(target);
    if (it != bfs_cache_.end()) return *it->second;
  }
  auto dist = std::make_unique<std::vector<Cost>>(num_cells(), -1);
  std::deque<Vertex> queue{target};
  (*dist)[target] = 0;
  while (!queue.empty()) {
    const Vertex u = queue.front();
    queue.pop_front();
    const Cell c = cell(u);
    for (int k = 0; k < 4; ++k) {
      const int r = c.row + kRowStep[k];
      const int col = c.col + kColStep[k];
      if (!in_bounds(r, col)) continue;
      const Vertex w = vertex(r, col);
      if (!passable_[w] || (*dist)[w] >= 0) continue;
      (*dist)[w] = (*dist)[u] + 1;
      queue.push_back(w);
    }
  }
  std::unique_lock lock(cache_mutex_);
  auto [it, inserted] = bfs_cache_.try_emplace(target, std::move(dist));
  return *it->second;
}

std::optional<Cost> WorkspaceGraph::shortest_cost(Vertex u, Vertex v) const {
  require_passable(u, "shortest_cost");
  const Cost d = distances_to(v)[u];
  if (d < 0) return std::nullopt;
  return d;
}

std::vector<Vertex> WorkspaceGraph::shortest_path(Vertex u, Vertex v) const {
  require_passable(u, "shortest_path");
  const auto& dist = distances_to(v);
  if (dist[u] < 0)
    throw InfeasibleError(v, "no path from " + std::to_string(u) + " to " + std::to_string(v));
  std::vector<Vertex> path{u};
  path.reserve(static_cast<std::size_t>(dist[u]) + 1);
  Vertex cur = u;
  while (cur != v) {
    Vertex best = -1;
    for (Vertex w : neighbors(cur)) {
      if (dist[w] == dist[cur] - 1 && (best < 0 || w < best)) best = w;
    }
    cur = best;
    path.push_back(cur);
  }
  return path;
}

std::vector<std::string> WorkspaceGraph::rows() const {
  std::vector<std::string> out(height_, std::string(width_, '.'));
  for (int r = 0; r < height_; ++r)
    for (int c = 0; c < width_; ++c)
      if (!passable_[vertex(r, c)]) out[r][c] = '@';
  return out;
}

WorkspaceGraph load_map(std::string_view text, std::string name) {
  std::vector<std::string_view> lines;
  for (std::size_t pos = 0; pos <= text.size();) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(strip_cr(text.substr(pos, end - pos)));
    pos = end + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();

  if (lines.size() < 4) throw ParseError(static_cast<int>(lines.size()) + 1, "truncated map header");
  if (lines[0].substr(0, 5) != "type ") throw ParseError(1, "expected 'type <name>'");
  int height = 0;
  int width = 0;
  if (!parse_int_field(lines[1], "height ", height)) throw ParseError(2, "expected 'height <H>'");
  if (!parse_int_field(lines[2], "width ", width)) throw ParseError(3, "expected 'width <W>'");
  if (lines[3] != "map") throw ParseError(4, "expected 'map'");
  if (static_cast<int>(lines.size()) - 4 != height)
    throw ParseError(static_cast<int>(lines.size()) + 1,
                     "expected " + std::to_string(height) + " map rows, found " +
                         std::to_string(lines.size() - 4));

  std::vector<bool> passable(static_cast<std::size_t>(width) * height, false);
  for (int r = 0; r < height; ++r) {
    const std::string_view row = lines[4 + r];
    const int line_no = 5 + r;
    if (static_cast<int>(row.size()) != width)
      throw ParseError(line_no, "row has " + std::to_string(row.size()) + " cells, expected " +
                                    std::to_string(width));
    for (int c = 0; c < width; ++c) {
      switch (row[c]) {
        case '.':
        case 'G':
          passable[static_cast<std::size_t>(r) * width + c] = true;
          break;
        case '@':
        case 'T':
        case 'O':
          break;
        default:
          throw ParseError(line_no, std::string("unknown cell character '") + row[c] + "'");
      }
    }
  }
  return WorkspaceGraph(width, height, std::move(passable), std::move(name));
}

WorkspaceGraph load_map_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open map file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string name = path;
  if (auto slash = name.find_last_of('/'); slash != std::string::npos) name = name.substr(slash + 1);
  return load_map(buf.str(), name);
}

std::string to_map_text(const WorkspaceGraph& g) {
  std::ostringstream out;
  out << "type octile\nheight " << g.height() << "\nwidth " << g.width() << "\nmap\n";
  for (const auto& row : g.rows()) out << row << '\n';
  return out.str();
}

}  // namespace mcpf
