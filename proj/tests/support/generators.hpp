#pragma once

// Seeded generators for small grids and instances shared by the unit and
// acceptance tests. Sampling uses plain modulo on mt19937_64 so the streams
// are identical on every standard library.

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "mcpf/instance.hpp"
#include "mcpf/target_graph.hpp"
#include "mcpf/workspace_graph.hpp"

namespace mcpf::testing {

inline std::uint64_t pick(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

template <class T>
void shuffle(std::mt19937_64& rng, std::vector<T>& xs) {
  for (std::size_t i = xs.size(); i > 1; --i) std::swap(xs[i - 1], xs[pick(rng, i)]);
}

// Obstacles with probability percent/100; passable cells may be disconnected.
inline WorkspaceGraph random_grid(std::mt19937_64& rng, int rows, int cols, int percent) {
  std::vector<bool> open(static_cast<std::size_t>(rows) * cols);
  for (std::size_t k = 0; k < open.size(); ++k) open[k] = static_cast<int>(pick(rng, 100)) >= percent;
  return WorkspaceGraph(cols, rows, std::move(open), "random");
}

// Eligibility: each target / goal gets a random nonempty agent subset when
// `restricted`, otherwise every agent.
inline AgentSet random_subset(std::mt19937_64& rng, int n) {
  std::uint64_t bits = 0;
  while (bits == 0) bits = pick(rng, std::uint64_t{1} << n);
  return AgentSet(bits);
}

// Distinct passable cells for starts, goals and targets. nullopt if the grid
// has too few passable cells.
inline std::optional<Instance> random_instance(std::mt19937_64& rng, const WorkspaceGraph& g, int n,
                                               int m, bool restricted) {
  std::vector<Vertex> cells;
  for (Vertex v = 0; v < g.num_cells(); ++v)
    if (g.passable(v)) cells.push_back(v);
  if (static_cast<int>(cells.size()) < 2 * n + m) return std::nullopt;
  shuffle(rng, cells);
  Instance inst;
  inst.num_agents = n;
  inst.starts.assign(cells.begin(), cells.begin() + n);
  inst.goals.assign(cells.begin() + n, cells.begin() + 2 * n);
  inst.targets.assign(cells.begin() + 2 * n, cells.begin() + 2 * n + m);
  for (int k = 0; k < m; ++k)
    inst.target_eligibility.push_back(restricted ? random_subset(rng, n) : AgentSet::all(n));
  for (int j = 0; j < n; ++j)
    inst.goal_eligibility.push_back(restricted ? random_subset(rng, n) : AgentSet::all(n));
  return inst;
}

struct SmallCase {
  WorkspaceGraph graph;
  Instance inst;
};

// Maps of 3..8 cells a side, N <= 3, M <= 4, ~15% obstacles.
inline SmallCase random_small_case(std::mt19937_64& rng, bool restricted) {
  while (true) {
    const int rows = 3 + static_cast<int>(pick(rng, 6));
    const int cols = 3 + static_cast<int>(pick(rng, 6));
    auto g = random_grid(rng, rows, cols, 15);
    const int n = 1 + static_cast<int>(pick(rng, 3));
    const int m = static_cast<int>(pick(rng, 5));
    auto inst = random_instance(rng, g, n, m, restricted);
    if (inst) return SmallCase{std::move(g), std::move(*inst)};
  }
}

}  // namespace mcpf::testing
