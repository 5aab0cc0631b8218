#include "mcpf/mhpp.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <string>
#include <unordered_set>

namespace mcpf {

namespace {

using Mask = std::uint32_t;

Cost sat_add(Cost a, Cost b) {
  const std::int64_t s = static_cast<std::int64_t>(a) + b;
  return s >= kInfiniteCost ? kInfiniteCost : static_cast<Cost>(s);
}

// Local representation: routes over local target ids 0..K-1, goal index per agent.
struct LocalSolution {
  std::vector<std::vector<int>> order;
  std::vector<int> goal;
};

JointSequence to_joint_sequence(const TargetGraph& tg, const LocalSolution& s) {
  JointSequence seq;
  for (int i = 0; i < tg.num_agents(); ++i) {
    AgentRoute r;
    r.start = tg.node(tg.agent_node(i)).vertex;
    for (int k : s.order[i]) r.targets.push_back(tg.target_index(k));
    r.goal = s.goal[i];
    seq.routes.push_back(std::move(r));
  }
  return seq;
}

// Kuhn's augmenting-path matching of agents [first, n) to goals not in
// `used`. Agents are tried in index order and goals ascending, so the result
// is deterministic.
bool match_goals(int n, int first, std::uint64_t used, const std::function<bool(int, int)>& allowed,
                 std::vector<int>* agent_goal) {
  std::vector<int> goal_owner(n, -1);
  std::vector<char> seen;
  std::function<bool(int)> augment = [&](int a) -> bool {
    for (int j = 0; j < n; ++j) {
      if ((used >> j) & 1U || seen[j] || !allowed(a, j)) continue;
      seen[j] = 1;
      if (goal_owner[j] < 0 || augment(goal_owner[j])) {
        goal_owner[j] = a;
        return true;
      }
    }
    return false;
  };
  for (int a = first; a < n; ++a) {
    seen.assign(n, 0);
    if (!augment(a)) return false;
  }
  if (agent_goal) {
    agent_goal->assign(n, -1);
    for (int j = 0; j < n; ++j)
      if (goal_owner[j] >= 0) (*agent_goal)[goal_owner[j]] = j;
  }
  return true;
}

class ExactSolver {
 public:
  explicit ExactSolver(const TargetGraph& tg)
      : tg_(tg), n_(tg.num_agents()), k_(tg.num_targets()), full_(k_ == 0 ? 0 : (Mask{1} << k_) - 1) {
    elig_.assign(n_, 0);
    for (int t = 0; t < k_; ++t)
      for (int i : tg.target_eligibility(t).members())
        if (tg.cost(tg.agent_node(i), tg.target_node(t)) < kInfiniteCost) elig_[i] |= Mask{1} << t;
    suffix_elig_.assign(n_ + 1, 0);
    for (int i = n_ - 1; i >= 0; --i) suffix_elig_[i] = suffix_elig_[i + 1] | elig_[i];
    build_tables();
  }

  LocalSolution solve() {
    Cost lo = 0;
    Cost hi = 0;
    bool any_finite = false;
    for (const auto& table : end_)
      for (Cost c : table)
        if (c < kInfiniteCost) {
          hi = std::max(hi, c);
          any_finite = true;
        }
    if (!any_finite || !feasible(hi))
      throw InfeasibleError(tg_.node(0).vertex, "no feasible joint sequence exists");
    lo = lower_bound();
    while (lo < hi) {
      const Cost mid = lo + (hi - lo) / 2;
      if (feasible(mid))
        hi = mid;
      else
        lo = mid + 1;
    }
    feasible(hi);
    return reconstruct();
  }

 private:
  Cost hk(int i, Mask s, int t) const { return hk_[i][static_cast<std::size_t>(s) * k_ + t]; }
  Cost end(int i, int j, Mask s) const { return end_[i][(static_cast<std::size_t>(j) << k_) + s]; }

  void build_tables() {
    const std::size_t subsets = std::size_t{1} << k_;
    hk_.assign(n_, {});
    end_.assign(n_, std::vector<Cost>(subsets * n_, kInfiniteCost));
    for (int i = 0; i < n_; ++i) {
      auto& dp = hk_[i];
      dp.assign(subsets * std::max(k_, 1), kInfiniteCost);
      const int a = tg_.agent_node(i);
      for (Mask s = 1; s <= full_ && k_ > 0; ++s) {
        if (s & ~elig_[i]) continue;
        for (int t = 0; t < k_; ++t) {
          if (!((s >> t) & 1U)) continue;
          const Mask rest = s & ~(Mask{1} << t);
          Cost best = kInfiniteCost;
          if (rest == 0) {
            best = tg_.cost(a, tg_.target_node(t));
          } else {
            for (int u = 0; u < k_; ++u)
              if ((rest >> u) & 1U)
                best = std::min(best, sat_add(hk(i, rest, u), tg_.cost(tg_.target_node(u), tg_.target_node(t))));
          }
          dp[static_cast<std::size_t>(s) * k_ + t] = best;
        }
      }
      for (int j = 0; j < n_; ++j) {
        if (!tg_.goal_eligibility(j).contains(i)) continue;
        const int g = tg_.goal_node(j);
        for (Mask s = 0; s <= full_; ++s) {
          if (s & ~elig_[i]) continue;
          Cost best = kInfiniteCost;
          if (s == 0) {
            best = tg_.cost(a, g);
          } else {
            for (int t = 0; t < k_; ++t)
              if ((s >> t) & 1U) best = std::min(best, sat_add(hk(i, s, t), tg_.cost(tg_.target_node(t), g)));
          }
          end_[i][(static_cast<std::size_t>(j) << k_) + s] = best;
        }
      }
    }
  }

  Cost lower_bound() const {
    Cost lb = 0;
    for (int i = 0; i < n_; ++i) {
      Cost best = kInfiniteCost;
      for (int j = 0; j < n_; ++j) best = std::min(best, end(i, j, 0));
      lb = std::max(lb, best);
    }
    for (int t = 0; t < k_; ++t) {
      Cost best = kInfiniteCost;
      for (int i = 0; i < n_; ++i)
        if ((elig_[i] >> t) & 1U)
          for (int j = 0; j < n_; ++j) best = std::min(best, end(i, j, Mask{1} << t));
      lb = std::max(lb, best);
    }
    return lb;
  }

  struct Key {
    int agent;
    Mask remaining;
    std::uint64_t used_goals;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::uint64_t h = k.used_goals * 0x9E3779B97F4A7C15ULL;
      h ^= (static_cast<std::uint64_t>(k.remaining) << 8 | static_cast<std::uint64_t>(k.agent)) +
           0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2);
      return static_cast<std::size_t>(h);
    }
  };

  bool feasible(Cost threshold) {
    threshold_ = threshold;
    failed_.clear();
    choice_.assign(n_, {0, -1});
    return dfs(0, full_, 0);
  }

  bool dfs(int i, Mask remaining, std::uint64_t used_goals) {
    if (i == n_) return remaining == 0;
    if (remaining & ~suffix_elig_[i]) return false;
    const Key key{i, remaining, used_goals};
    if (failed_.count(key)) return false;
    const auto goal_ok = [&](int a, int j) { return end(a, j, 0) <= threshold_; };
    if (!match_goals(n_, i, used_goals, goal_ok, nullptr)) {
      failed_.insert(key);
      return false;
    }
    const Mask reach = remaining & elig_[i];
    std::vector<Mask> candidates;
    for (int j = 0; j < n_; ++j) {
      if ((used_goals >> j) & 1U || !goal_ok(i, j)) continue;
      candidates.clear();
      for (Mask s = reach;; s = (s - 1) & reach) {
        if (end(i, j, s) <= threshold_) {
          bool maximal = true;
          for (Mask extra = reach & ~s; extra != 0 && maximal; extra &= extra - 1) {
            const Mask bit = extra & (~extra + 1);
            if (end(i, j, s | bit) <= threshold_) maximal = false;
          }
          if (maximal) candidates.push_back(s);
        }
        if (s == 0) break;
      }
      std::sort(candidates.begin(), candidates.end(), [](Mask x, Mask y) {
        const int px = std::popcount(x);
        const int py = std::popcount(y);
        return px != py ? px > py : x < y;
      });
      for (Mask s : candidates) {
        choice_[i] = {s, j};
        if (dfs(i + 1, remaining & ~s, used_goals | (std::uint64_t{1} << j))) return true;
      }
    }
    failed_.insert(key);
    return false;
  }

  LocalSolution reconstruct() const {
    LocalSolution out;
    out.order.resize(n_);
    out.goal.resize(n_);
    for (int i = 0; i < n_; ++i) {
      auto [s, j] = choice_[i];
      out.goal[i] = j;
      if (s == 0) continue;
      const int g = tg_.goal_node(j);
      int last = -1;
      Cost best = kInfiniteCost;
      for (int t = 0; t < k_; ++t) {
        if (!((s >> t) & 1U)) continue;
        const Cost c = sat_add(hk(i, s, t), tg_.cost(tg_.target_node(t), g));
        if (c < best) {
          best = c;
          last = t;
        }
      }
      std::vector<int> rev;
      Mask cur = s;
      int t = last;
      while (true) {
        rev.push_back(t);
        const Mask rest = cur & ~(Mask{1} << t);
        if (rest == 0) break;
        int prev = -1;
        for (int u = 0; u < k_; ++u) {
          if (!((rest >> u) & 1U)) continue;
          if (sat_add(hk(i, rest, u), tg_.cost(tg_.target_node(u), tg_.target_node(t))) == hk(i, cur, t)) {
            prev = u;
            break;
          }
        }
        cur = rest;
        t = prev;
      }
      out.order[i].assign(rev.rbegin(), rev.rend());
    }
    return out;
  }

  const TargetGraph& tg_;
  int n_;
  int k_;
  Mask full_;
  std::vector<Mask> elig_;
  std::vector<Mask> suffix_elig_;
  std::vector<std::vector<Cost>> hk_;
  std::vector<std::vector<Cost>> end_;
  Cost threshold_ = 0;
  std::unordered_set<Key, KeyHash> failed_;
  std::vector<std::pair<Mask, int>> choice_;
};

// Min-max goal assignment on start->goal costs alone.
std::vector<int> bottleneck_goals(const TargetGraph& tg) {
  const int n = tg.num_agents();
  std::vector<Cost> values;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (tg.goal_eligibility(j).contains(i) && tg.cost(i, tg.goal_node(j)) < kInfiniteCost)
        values.push_back(tg.cost(i, tg.goal_node(j)));
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::vector<int> assignment;
  auto try_threshold = [&](Cost t, std::vector<int>* out) {
    return match_goals(
        n, 0, 0,
        [&](int i, int j) {
          return tg.goal_eligibility(j).contains(i) && tg.cost(i, tg.goal_node(j)) <= t;
        },
        out);
  };
  if (values.empty() || !try_threshold(values.back(), nullptr))
    throw InfeasibleError(tg.node(0).vertex, "no feasible goal assignment exists");
  std::size_t lo = 0;
  std::size_t hi = values.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (try_threshold(values[mid], nullptr))
      hi = mid;
    else
      lo = mid + 1;
  }
  try_threshold(values[lo], &assignment);
  return assignment;
}

class LocalSearch {
 public:
  explicit LocalSearch(const TargetGraph& tg) : tg_(tg), n_(tg.num_agents()), k_(tg.num_targets()) {}

  LocalSolution run() {
    sol_.goal = bottleneck_goals(tg_);
    sol_.order.assign(n_, {});
    cost_.resize(n_);
    for (int i = 0; i < n_; ++i) cost_[i] = route_cost(i, sol_.order[i], sol_.goal[i]);
    greedy_insertion();
    improve();
    return sol_;
  }

 private:
  int before(int agent, const std::vector<int>& route, int p) const {
    return p == 0 ? tg_.agent_node(agent) : tg_.target_node(route[p - 1]);
  }
  int after(const std::vector<int>& route, int p, int goal) const {
    return p == static_cast<int>(route.size()) ? tg_.goal_node(goal) : tg_.target_node(route[p]);
  }
  Cost c(int u, int v) const { return tg_.cost(u, v); }

  Cost route_cost(int agent, const std::vector<int>& route, int goal) const {
    int prev = tg_.agent_node(agent);
    Cost total = 0;
    for (int t : route) {
      total = sat_add(total, c(prev, tg_.target_node(t)));
      prev = tg_.target_node(t);
    }
    return sat_add(total, c(prev, tg_.goal_node(goal)));
  }

  // (max, sum) of the cost vector with two entries replaced.
  std::pair<Cost, std::int64_t> objective_with(int a, Cost ca, int b, Cost cb) const {
    Cost mx = 0;
    std::int64_t sum = 0;
    for (int i = 0; i < n_; ++i) {
      const Cost v = i == a ? ca : (i == b ? cb : cost_[i]);
      mx = std::max(mx, v);
      sum += v;
    }
    return {mx, sum};
  }

  void greedy_insertion() {
    std::vector<char> done(k_, 0);
    for (int inserted = 0; inserted < k_; ++inserted) {
      Cost cur_max = *std::max_element(cost_.begin(), cost_.end());
      struct Best {
        Cost new_max = kInfiniteCost;
        Cost new_cost = kInfiniteCost;
        int target = -1, agent = -1, pos = -1;
      } best;
      for (int t = 0; t < k_; ++t) {
        if (done[t]) continue;
        const int tn = tg_.target_node(t);
        for (int i : tg_.target_eligibility(t).members()) {
          const auto& route = sol_.order[i];
          for (int p = 0; p <= static_cast<int>(route.size()); ++p) {
            const int u = before(i, route, p);
            const int v = after(route, p, sol_.goal[i]);
            const Cost added = sat_add(c(u, tn), c(tn, v));
            if (added >= kInfiniteCost) continue;
            const Cost nc = sat_add(cost_[i], added - c(u, v));
            const Cost nm = std::max(cur_max, nc);
            if (nm < best.new_max || (nm == best.new_max && nc < best.new_cost)) {
              best = {nm, nc, t, i, p};
            }
          }
        }
      }
      if (best.target < 0) {
        int t = 0;
        while (done[t]) ++t;
        throw InfeasibleError(tg_.node(tg_.target_node(t)).vertex,
                              "no finite insertion for target " + std::to_string(tg_.target_index(t)));
      }
      auto& route = sol_.order[best.agent];
      route.insert(route.begin() + best.pos, best.target);
      cost_[best.agent] = best.new_cost;
      done[best.target] = 1;
    }
  }

  struct Move {
    enum Kind { None, Relocate, TwoOpt, GoalSwap } kind = None;
    int r = -1, p = -1, s = -1, q = -1;
    Cost cost_r = 0, cost_s = 0;
    std::pair<Cost, std::int64_t> obj;
  };

  void consider(Move& best, const Move& m) const {
    if (m.obj < best.obj) best = m;
  }

  void improve() {
    const int cap = 50 * k_;
    for (int iter = 0; iter < cap; ++iter) {
      Move best;
      best.obj = objective_with(-1, 0, -1, 0);
      const auto current = best.obj;

      // relocate target at (r, p) to position q of route s
      for (int r = 0; r < n_; ++r) {
        const auto& route = sol_.order[r];
        for (int p = 0; p < static_cast<int>(route.size()); ++p) {
          const int t = route[p];
          const int tn = tg_.target_node(t);
          std::vector<int> without = route;
          without.erase(without.begin() + p);
          const Cost removed_cost = route_cost(r, without, sol_.goal[r]);
          for (int s : tg_.target_eligibility(t).members()) {
            const auto& dest = s == r ? without : sol_.order[s];
            const Cost base = s == r ? removed_cost : cost_[s];
            for (int q = 0; q <= static_cast<int>(dest.size()); ++q) {
              if (s == r && q == p) continue;
              const int u = before(s, dest, q);
              const int v = after(dest, q, sol_.goal[s]);
              const Cost added = sat_add(c(u, tn), c(tn, v));
              if (added >= kInfiniteCost) continue;
              const Cost ns = sat_add(base, added - c(u, v));
              Move m{Move::Relocate, r, p, s, q, removed_cost, ns, {}};
              m.obj = s == r ? objective_with(r, ns, -1, 0) : objective_with(r, removed_cost, s, ns);
              consider(best, m);
            }
          }
        }
      }

      // reverse route[p..q] of one route
      for (int r = 0; r < n_; ++r) {
        const auto& route = sol_.order[r];
        const int len = static_cast<int>(route.size());
        for (int p = 0; p < len; ++p) {
          for (int q = p + 1; q < len; ++q) {
            const int u = before(r, route, p);
            const int v = after(route, q + 1, sol_.goal[r]);
            const int xp = tg_.target_node(route[p]);
            const int xq = tg_.target_node(route[q]);
            const Cost added = sat_add(c(u, xq), c(xp, v));
            if (added >= kInfiniteCost) continue;
            const Cost next = cost_[r] + added - (c(u, xp) + c(xq, v));
            Move m{Move::TwoOpt, r, p, -1, q, next, 0, objective_with(r, next, -1, 0)};
            consider(best, m);
          }
        }
      }

      // exchange goals of two agents
      for (int r = 0; r < n_; ++r) {
        for (int s = r + 1; s < n_; ++s) {
          if (!tg_.goal_eligibility(sol_.goal[s]).contains(r) ||
              !tg_.goal_eligibility(sol_.goal[r]).contains(s))
            continue;
          const Cost nr = route_cost(r, sol_.order[r], sol_.goal[s]);
          const Cost ns = route_cost(s, sol_.order[s], sol_.goal[r]);
          if (nr >= kInfiniteCost || ns >= kInfiniteCost) continue;
          Move m{Move::GoalSwap, r, -1, s, -1, nr, ns, objective_with(r, nr, s, ns)};
          consider(best, m);
        }
      }

      if (best.kind == Move::None || !(best.obj < current)) break;
      apply(best);
    }
  }

  void apply(const Move& m) {
    switch (m.kind) {
      case Move::Relocate: {
        auto& from = sol_.order[m.r];
        const int t = from[m.p];
        from.erase(from.begin() + m.p);
        auto& to = sol_.order[m.s];
        to.insert(to.begin() + m.q, t);
        cost_[m.r] = route_cost(m.r, sol_.order[m.r], sol_.goal[m.r]);
        cost_[m.s] = route_cost(m.s, sol_.order[m.s], sol_.goal[m.s]);
        break;
      }
      case Move::TwoOpt: {
        auto& route = sol_.order[m.r];
        std::reverse(route.begin() + m.p, route.begin() + m.q + 1);
        cost_[m.r] = route_cost(m.r, route, sol_.goal[m.r]);
        break;
      }
      case Move::GoalSwap:
        std::swap(sol_.goal[m.r], sol_.goal[m.s]);
        cost_[m.r] = route_cost(m.r, sol_.order[m.r], sol_.goal[m.r]);
        cost_[m.s] = route_cost(m.s, sol_.order[m.s], sol_.goal[m.s]);
        break;
      case Move::None:
        break;
    }
  }

  const TargetGraph& tg_;
  int n_;
  int k_;
  LocalSolution sol_;
  std::vector<Cost> cost_;
};

}  // namespace

std::vector<Cost> sequence_cost(const TargetGraph& tg, const JointSequence& seq) {
  if (static_cast<int>(seq.routes.size()) != tg.num_agents())
    throw ContractViolation("joint sequence has the wrong number of routes");
  std::vector<Cost> h;
  h.reserve(seq.routes.size());
  for (int i = 0; i < tg.num_agents(); ++i) {
    const auto& route = seq.routes[i];
    if (route.start != tg.node(tg.agent_node(i)).vertex)
      throw ContractViolation("route " + std::to_string(i) + " does not start at the agent's vertex");
    if (route.goal < 0 || route.goal >= tg.num_agents())
      throw ContractViolation("route " + std::to_string(i) + " has no valid goal");
    int prev = tg.agent_node(i);
    Cost total = 0;
    for (int m : route.targets) {
      const int k = tg.local_target(m);
      if (k < 0)
        throw ContractViolation("target " + std::to_string(m) + " is not in the target graph");
      total = sat_add(total, tg.cost(prev, tg.target_node(k)));
      prev = tg.target_node(k);
    }
    h.push_back(sat_add(total, tg.cost(prev, tg.goal_node(route.goal))));
  }
  return h;
}

Cost max_cost(const std::vector<Cost>& h) {
  return h.empty() ? 0 : *std::max_element(h.begin(), h.end());
}

void check_sequence(const TargetGraph& tg, const JointSequence& seq) {
  const auto h = sequence_cost(tg, seq);
  std::vector<int> owner(tg.num_targets(), -1);
  std::vector<int> goal_owner(tg.num_agents(), -1);
  for (int i = 0; i < tg.num_agents(); ++i) {
    const auto& route = seq.routes[i];
    for (int m : route.targets) {
      const int k = tg.local_target(m);
      if (owner[k] >= 0) throw ContractViolation("target " + std::to_string(m) + " assigned twice");
      if (!tg.target_eligibility(k).contains(i))
        throw ContractViolation("agent " + std::to_string(i) + " not eligible for target " + std::to_string(m));
      owner[k] = i;
    }
    if (goal_owner[route.goal] >= 0) throw ContractViolation("goal assigned twice");
    if (!tg.goal_eligibility(route.goal).contains(i))
      throw ContractViolation("agent " + std::to_string(i) + " not eligible for its goal");
    goal_owner[route.goal] = i;
    if (h[i] >= kInfiniteCost) throw ContractViolation("route " + std::to_string(i) + " is unreachable");
  }
  for (int k = 0; k < tg.num_targets(); ++k)
    if (owner[k] < 0)
      throw ContractViolation("target " + std::to_string(tg.target_index(k)) + " is not covered");
}

JointSequence solve_mhpp_exact(const TargetGraph& tg, int exact_cap) {
  if (tg.num_targets() > exact_cap)
    throw ContractViolation("exact MHPP refuses " + std::to_string(tg.num_targets()) +
                            " unvisited targets (cap " + std::to_string(exact_cap) + ")");
  ExactSolver solver(tg);
  return to_joint_sequence(tg, solver.solve());
}

JointSequence solve_mhpp_heuristic(const TargetGraph& tg) {
  if (tg.num_targets() == 0) return solve_mhpp_exact(tg);
  LocalSearch search(tg);
  return to_joint_sequence(tg, search.run());
}

}  // namespace mcpf
