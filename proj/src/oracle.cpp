#include "mcpf/oracle.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <unordered_map>

namespace mcpf {

std::string to_string(OracleStatus s) {
  switch (s) {
    case OracleStatus::Solved: return "solved";
    case OracleStatus::Unsolvable: return "unsolvable";
    case OracleStatus::Refused: return "refused";
  }
  return "?";
}

namespace {

// Packs (positions, claimed) into one integer: each position takes `pos_bits`
// bits, the claimed mask sits on top.
struct StateCodec {
  int n;
  int pos_bits;

  std::uint64_t encode(const std::vector<Vertex>& v, std::uint32_t claimed) const {
    std::uint64_t key = claimed;
    for (int i = n - 1; i >= 0; --i) key = (key << pos_bits) | static_cast<std::uint64_t>(v[i]);
    return key;
  }
  void decode(std::uint64_t key, std::vector<Vertex>& v, std::uint32_t& claimed) const {
    v.resize(n);
    const std::uint64_t mask = (std::uint64_t{1} << pos_bits) - 1;
    for (int i = 0; i < n; ++i) {
      v[i] = static_cast<Vertex>(key & mask);
      key >>= pos_bits;
    }
    claimed = static_cast<std::uint32_t>(key);
  }
};

class OracleRules {
 public:
  OracleRules(const WorkspaceGraph& g, const Instance& inst)
      : inst_(inst), target_at_(g.num_cells(), -1), goal_at_(g.num_cells(), -1) {
    for (int m = 0; m < inst.num_targets(); ++m) target_at_[inst.targets[m]] = m;
    for (int j = 0; j < inst.num_agents; ++j) goal_at_[inst.goals[j]] = j;
  }

  // Greedy rule: in agent order, an agent on an unclaimed target it may claim
  // takes it.
  std::uint32_t claim(const std::vector<Vertex>& v, std::uint32_t claimed,
                      std::vector<Claim>* out = nullptr, int t = 0) const {
    for (int i = 0; i < inst_.num_agents; ++i) {
      const int m = target_at_[v[i]];
      if (m < 0 || (claimed >> m) & 1U) continue;
      if (!inst_.target_eligibility[m].contains(i)) continue;
      claimed |= 1U << m;
      if (out) out->push_back(Claim{t, i, m});
    }
    return claimed;
  }

  bool finished(const std::vector<Vertex>& v, std::uint32_t claimed) const {
    const std::uint32_t full = (1U << inst_.num_targets()) - 1;
    if (claimed != full) return false;
    for (int i = 0; i < inst_.num_agents; ++i) {
      const int j = goal_at_[v[i]];
      if (j < 0 || !inst_.goal_eligibility[j].contains(i)) return false;
      for (int k = 0; k < i; ++k)
        if (v[k] == v[i]) return false;
    }
    return true;
  }

  static bool collide(const std::vector<Vertex>& from, const std::vector<Vertex>& to) {
    for (std::size_t i = 0; i < to.size(); ++i)
      for (std::size_t k = i + 1; k < to.size(); ++k) {
        if (to[i] == to[k]) return true;
        if (to[i] == from[k] && to[k] == from[i] && from[i] != from[k]) return true;
      }
    return false;
  }

 private:
  const Instance& inst_;
  std::vector<int> target_at_;
  std::vector<int> goal_at_;
};

}  // namespace

OracleResult joint_astar(const Instance& inst, const WorkspaceGraph& g, const OracleLimits& limits) {
  OracleResult res;
  const int n = inst.num_agents;
  if (n > limits.max_agents) {
    res.reason = "too many agents";
    return res;
  }
  if (inst.num_targets() > limits.max_targets || inst.num_targets() > 16) {
    res.reason = "too many targets";
    return res;
  }
  if (g.num_cells() > limits.max_cells) {
    res.reason = "map too large";
    return res;
  }
  const int pos_bits = std::max(1, static_cast<int>(std::bit_width(static_cast<unsigned>(g.num_cells()))));
  if (pos_bits * n + inst.num_targets() > 64) {
    res.reason = "state does not fit the key";
    return res;
  }
  try {
    validate_instance(g, inst);
  } catch (const ContractViolation& e) {
    res.reason = std::string("invalid instance: ") + e.what();
    return res;
  }

  const StateCodec codec{n, pos_bits};
  const OracleRules rules(g, inst);
  std::vector<std::vector<Vertex>> moves(g.num_cells());

  std::vector<Vertex> start = inst.starts;
  const std::uint64_t root = codec.encode(start, rules.claim(start, 0));
  std::unordered_map<std::uint64_t, std::uint64_t> parent{{root, root}};
  std::vector<std::uint64_t> layer{root};
  std::optional<std::uint64_t> done;

  std::vector<Vertex> v, w(n);
  std::uint32_t claimed = 0;
  for (int t = 0; !layer.empty(); ++t) {
    for (std::uint64_t key : layer) {
      codec.decode(key, v, claimed);
      if (rules.finished(v, claimed)) {
        done = key;
        res.makespan = t;
        break;
      }
    }
    if (done) break;

    std::vector<std::uint64_t> next;
    for (std::uint64_t key : layer) {
      codec.decode(key, v, claimed);
      for (int i = 0; i < n; ++i)
        if (moves[v[i]].empty()) moves[v[i]] = g.neighbors(v[i]);
      std::vector<std::size_t> idx(n, 0);
      while (true) {
        for (int i = 0; i < n; ++i) w[i] = moves[v[i]][idx[i]];
        if (!OracleRules::collide(v, w)) {
          const std::uint64_t nk = codec.encode(w, rules.claim(w, claimed));
          if (parent.emplace(nk, key).second) next.push_back(nk);
        }
        int i = 0;
        while (i < n && ++idx[i] == moves[v[i]].size()) idx[i++] = 0;
        if (i == n) break;
      }
      if (static_cast<std::int64_t>(parent.size()) > limits.max_states) {
        res.states = static_cast<std::int64_t>(parent.size());
        res.reason = "state limit exceeded";
        return res;
      }
    }
    layer = std::move(next);
  }
  res.states = static_cast<std::int64_t>(parent.size());
  if (!done) {
    res.status = OracleStatus::Unsolvable;
    return res;
  }

  std::vector<std::uint64_t> chain{*done};
  while (parent[chain.back()] != chain.back()) chain.push_back(parent[chain.back()]);
  std::reverse(chain.begin(), chain.end());
  std::uint32_t a = 0;
  for (std::size_t t = 0; t < chain.size(); ++t) {
    codec.decode(chain[t], v, claimed);
    res.path.steps.push_back(v);
    a = rules.claim(v, a, &res.path.claims, static_cast<int>(t));
  }
  res.status = OracleStatus::Solved;
  return res;
}

std::optional<Cost> mhpp_brute(const TargetGraph& tg) {
  const int n = tg.num_agents();
  const int k = tg.num_targets();
  if (k > 5 || n > 3) throw ContractViolation("mhpp_brute is limited to 5 targets and 3 agents");
  using Wide = long long;
  const Wide inf = kInfiniteCost;
  auto edge = [&](int u, int v) -> Wide { return tg.cost(u, v) >= kInfiniteCost ? inf : tg.cost(u, v); };

  std::optional<Wide> best;
  std::vector<int> owner(k, -1);

  // cost[i][j]: cheapest order of agent i's targets ending at goal j
  auto evaluate = [&]() {
    std::vector<std::vector<Wide>> cost(n, std::vector<Wide>(n, inf));
    for (int i = 0; i < n; ++i) {
      std::vector<int> mine;
      for (int t = 0; t < k; ++t)
        if (owner[t] == i) mine.push_back(t);
      do {
        Wide c = 0;
        int at = tg.agent_node(i);
        for (int t : mine) {
          c = std::min(inf, c + edge(at, tg.target_node(t)));
          at = tg.target_node(t);
        }
        for (int j = 0; j < n; ++j) cost[i][j] = std::min(cost[i][j], std::min(inf, c + edge(at, tg.goal_node(j))));
      } while (std::next_permutation(mine.begin(), mine.end()));
    }
    std::vector<int> sigma(n);
    std::iota(sigma.begin(), sigma.end(), 0);
    do {
      Wide worst = 0;
      for (int i = 0; i < n && worst < inf; ++i)
        worst = tg.goal_eligibility(sigma[i]).contains(i) ? std::max(worst, cost[i][sigma[i]]) : inf;
      if (worst < inf && (!best || worst < *best)) best = worst;
    } while (std::next_permutation(sigma.begin(), sigma.end()));
  };

  auto assign = [&](auto&& self, int t) -> void {
    if (t == k) {
      evaluate();
      return;
    }
    for (int i = 0; i < n; ++i) {
      if (!tg.target_eligibility(t).contains(i)) continue;
      owner[t] = i;
      self(self, t + 1);
    }
    owner[t] = -1;
  };
  assign(assign, 0);
  if (!best) return std::nullopt;
  return static_cast<Cost>(*best);
}

std::string to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::Malformed: return "malformed";
    case ViolationKind::NotAdjacent: return "not-adjacent";
    case ViolationKind::VertexConflict: return "vertex-conflict";
    case ViolationKind::EdgeConflict: return "edge-conflict";
    case ViolationKind::BadClaim: return "bad-claim";
    case ViolationKind::DuplicateClaim: return "duplicate-claim";
    case ViolationKind::MissingTarget: return "missing-target";
    case ViolationKind::BadGoal: return "bad-goal";
    case ViolationKind::SharedGoal: return "shared-goal";
  }
  return "?";
}

ValidationReport validate_solution(const WorkspaceGraph& g, const Instance& inst,
                                   const JointPath& path) {
  ValidationReport rep;
  auto report = [&](ViolationKind kind, int t, std::vector<int> agents, int target,
                    std::string msg) {
    rep.violations.push_back(Violation{kind, t, std::move(agents), target, std::move(msg)});
  };
  const int n = inst.num_agents;
  const int m_count = inst.num_targets();

  if (path.steps.empty()) {
    report(ViolationKind::Malformed, -1, {}, -1, "path has no timesteps");
    return rep;
  }
  const int len = static_cast<int>(path.steps.size());
  for (int t = 0; t < len; ++t) {
    const auto& s = path.steps[t];
    if (static_cast<int>(s.size()) != n) {
      report(ViolationKind::Malformed, t, {}, -1, "joint vertex has the wrong number of agents");
      return rep;
    }
    for (int i = 0; i < n; ++i)
      if (s[i] < 0 || s[i] >= g.num_cells() || !g.passable(s[i])) {
        report(ViolationKind::Malformed, t, {i}, -1, "agent on a blocked or unknown cell");
        return rep;
      }
  }
  if (static_cast<int>(inst.starts.size()) == n && path.steps[0] != inst.starts)
    report(ViolationKind::Malformed, 0, {}, -1, "path does not begin at the starts");

  auto adjacent = [&](Vertex u, Vertex v) {
    if (u == v) return true;
    const Cell a = g.cell(u), b = g.cell(v);
    return std::abs(a.row - b.row) + std::abs(a.col - b.col) == 1;
  };
  auto goal_ok = [&](Vertex v, int agent) {
    for (int j = 0; j < static_cast<int>(inst.goals.size()); ++j)
      if (inst.goals[j] == v)
        return j < static_cast<int>(inst.goal_eligibility.size()) &&
               inst.goal_eligibility[j].contains(agent);
    return false;
  };

  std::vector<Cost> cost(n, 0);
  for (int t = 0; t < len; ++t) {
    const auto& s = path.steps[t];
    for (int i = 0; i < n; ++i)
      for (int k = i + 1; k < n; ++k)
        if (s[i] == s[k]) report(ViolationKind::VertexConflict, t, {i, k}, -1, "agents share a vertex");
    if (t + 1 == len) break;
    const auto& nx = path.steps[t + 1];
    for (int i = 0; i < n; ++i) {
      if (!adjacent(s[i], nx[i]))
        report(ViolationKind::NotAdjacent, t, {i}, -1, "agent jumps between non-adjacent cells");
      if (!(s[i] == nx[i] && goal_ok(s[i], i))) cost[i] = t + 1;
      for (int k = i + 1; k < n; ++k)
        if (s[i] == nx[k] && s[k] == nx[i] && s[i] != s[k])
          report(ViolationKind::EdgeConflict, t, {i, k}, -1, "agents swap along an edge");
    }
  }
  rep.makespan = n == 0 ? 0 : *std::max_element(cost.begin(), cost.end());

  std::vector<int> claims_of(m_count, 0);
  for (const Claim& c : path.claims) {
    if (c.t < 0 || c.t >= len || c.agent < 0 || c.agent >= n || c.target < 0 || c.target >= m_count) {
      report(ViolationKind::BadClaim, c.t, {c.agent}, c.target, "claim refers to an unknown step, agent or target");
      continue;
    }
    if (path.steps[c.t][c.agent] != inst.targets[c.target])
      report(ViolationKind::BadClaim, c.t, {c.agent}, c.target, "claiming agent is not on the target");
    if (c.target >= static_cast<int>(inst.target_eligibility.size()) ||
        !inst.target_eligibility[c.target].contains(c.agent))
      report(ViolationKind::BadClaim, c.t, {c.agent}, c.target, "agent may not claim this target");
    if (++claims_of[c.target] == 2)
      report(ViolationKind::DuplicateClaim, c.t, {c.agent}, c.target, "target claimed twice");
  }
  for (int m = 0; m < m_count; ++m)
    if (claims_of[m] == 0)
      report(ViolationKind::MissingTarget, -1, {}, m, "target " + std::to_string(m) + " never claimed");

  const auto& last = path.steps.back();
  for (int i = 0; i < n; ++i) {
    if (!goal_ok(last[i], i)) report(ViolationKind::BadGoal, len - 1, {i}, -1, "agent does not end on an eligible goal");
    for (int k = i + 1; k < n; ++k)
      if (last[i] == last[k]) report(ViolationKind::SharedGoal, len - 1, {i, k}, -1, "agents end on the same goal");
  }
  return rep;
}

}  // namespace mcpf
