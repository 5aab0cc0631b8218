#pragma once

#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mcpf/types.hpp"

namespace mcpf {

struct Cell {
  int row = 0;
  int col = 0;
  bool operator==(const Cell&) const = default;
};

// 4-connected unit-cost grid graph. Read-only after construction except for
// the BFS distance cache, which is guarded so concurrent solver runs can share
// one graph.
class WorkspaceGraph {
 public:
  WorkspaceGraph(int width, int height, std::vector<bool> passable, std::string name = {});

  WorkspaceGraph(const WorkspaceGraph& other);
  WorkspaceGraph& operator=(const WorkspaceGraph& other);
  WorkspaceGraph(WorkspaceGraph&&) noexcept;
  WorkspaceGraph& operator=(WorkspaceGraph&&) noexcept;
  ~WorkspaceGraph();

  int width() const { return width_; }
  int height() const { return height_; }
  int num_cells() const { return width_ * height_; }
  const std::string& name() const { return name_; }

  bool in_bounds(int row, int col) const {
    return row >= 0 && row < height_ && col >= 0 && col < width_;
  }
  bool is_vertex(Vertex v) const { return v >= 0 && v < num_cells(); }
  bool passable(Vertex v) const { return is_vertex(v) && passable_[v]; }
  Vertex vertex(int row, int col) const { return row * width_ + col; }
  Vertex vertex(Cell c) const { return vertex(c.row, c.col); }
  Cell cell(Vertex v) const { return {v / width_, v % width_}; }

  int num_passable() const;
  int num_edges() const;

  // Wait action first, then up, down, left, right (passable ones only).
  std::vector<Vertex> neighbors(Vertex v) const;

  // Breadth-first distance; nullopt when v is not reachable from u.
  std::optional<Cost> shortest_cost(Vertex u, Vertex v) const;

  // Path u..v with shortest_cost(u,v)+1 vertices. Each step moves to the
  // lowest-id neighbour one step closer to v.
  std::vector<Vertex> shortest_path(Vertex u, Vertex v) const;

  // Distances from every cell to `target` (-1 = unreachable), cached.
  const std::vector<Cost>& distances_to(Vertex target) const;

  // Rows as map characters ('.' or '@').
  std::vector<std::string> rows() const;

 private:
  void require_passable(Vertex v, const char* what) const;

  int width_ = 0;
  int height_ = 0;
  std::vector<bool> passable_;
  std::string name_;

  mutable std::shared_mutex cache_mutex_;
  mutable std::unordered_map<Vertex, std::unique_ptr<const std::vector<Cost>>> bfs_cache_;
};

// movingai .map text: "type ...", "height H", "width W", "map", then H rows.
WorkspaceGraph load_map(std::string_view text, std::string name = {});
WorkspaceGraph load_map_file(const std::string& path);

std::string to_map_text(const WorkspaceGraph& g);

}  // namespace mcpf
