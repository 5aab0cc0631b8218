// Acceptance checks. Usage: acceptance [criterion ...]   (default: all)
// One PASS/FAIL line per selected criterion; exit status 1 if any failed.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "generators.hpp"
#include "mcpf/bench.hpp"
#include "mcpf/dms_star.hpp"
#include "mcpf/json_io.hpp"
#include "mcpf/oracle.hpp"
#include "mcpf/policy.hpp"

using namespace mcpf;

namespace {

const std::string kMap = std::string(MCPF_DATA_DIR) + "/random-32-32-20.map";
const std::string kScen = std::string(MCPF_DATA_DIR) + "/random-32-32-20.scen";

bool any_failed = false;

void report(int id, bool pass, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  any_failed = any_failed || !pass;
}

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// every solved result of this process goes through the validator
struct Validity {
  int checked = 0;
  int invalid = 0;
  std::string first;
} validity;

void check_valid(const WorkspaceGraph& g, const Instance& inst, const SolveResult& r, const std::string& what) {
  if (r.status != SolveStatus::Solved) return;
  ++validity.checked;
  const auto rep = validate_solution(g, inst, r.path);
  if (rep.ok() && rep.makespan == r.makespan) return;
  if (validity.invalid++ == 0)
    validity.first = what + (rep.ok() ? ": makespan mismatch" : ": " + rep.violations[0].message);
}

SolveResult run(const WorkspaceGraph& g, const Instance& inst, const SearchConfig& cfg, const std::string& what) {
  const SolveResult r = solve(inst, g, cfg);
  check_valid(g, inst, r, what);
  return r;
}

SearchConfig strict(SearchMode mode, double w, DominanceRule rule = DominanceRule::Vector) {
  SearchConfig c;
  c.mode = mode;
  c.w = w;
  c.mhpp = MhppMode::Exact;
  c.strict_backprop = true;
  c.dominance = rule;
  c.time_limit = 60;
  return c;
}

struct Case {
  WorkspaceGraph g;
  Instance inst;
  Cost opt;
};

// >= 200 seeded oracle-solvable instances (maps <= 8x8, N <= 3, M <= 4).
const std::vector<Case>& small_set() {
  static std::vector<Case> cases;
  if (!cases.empty()) return cases;
  std::mt19937_64 rng(20240501);
  for (int k = 0; cases.size() < 220; ++k) {
    auto c = mcpf::testing::random_small_case(rng, k % 2 == 1);
    const auto o = joint_astar(c.inst, c.graph);
    if (o.status == OracleStatus::Solved) cases.push_back(Case{std::move(c.graph), std::move(c.inst), o.makespan});
  }
  return cases;
}

struct Paired {
  int pairs = 0;
  int worse = 0;  // deferred made more MHPP calls than eager
  std::string first;
} paired;

void pair_calls(const SolveResult& d, const SolveResult& e, const std::string& what) {
  ++paired.pairs;
  if (d.stats.mhpp_calls <= e.stats.mhpp_calls) return;
  if (paired.worse++ == 0)
    paired.first = what + fmt(" (%lld vs %lld)", static_cast<long long>(d.stats.mhpp_calls),
                              static_cast<long long>(e.stats.mhpp_calls));
}

void optimality_and_bound(bool want1, bool want2) {
  const auto& cases = small_set();
  for (double w : {1.0, 1.1}) {
    if ((w == 1.0 && !want1) || (w == 1.1 && !want2)) continue;
    int wrong = 0;
    std::string first;
    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t k = 0; k < cases.size(); ++k) {
      const Case& c = cases[k];
      const Cost bound = w == 1.0 ? c.opt : (11 * c.opt + 9) / 10;
      SolveResult by_mode[2];
      for (auto mode : {SearchMode::Deferred, SearchMode::Eager}) {
        const std::string what = fmt("case %zu w=%.1f %s", k, w, to_string(mode).c_str());
        const auto r = run(c.g, c.inst, strict(mode, w), what);
        const bool ok = r.status == SolveStatus::Solved &&
                        (w == 1.0 ? r.makespan == c.opt : r.makespan <= bound);
        if (!ok && wrong++ == 0)
          first = what + fmt(": got %s %d, oracle %d", to_string(r.status).c_str(), r.makespan, c.opt);
        by_mode[mode == SearchMode::Eager] = r;
      }
      pair_calls(by_mode[0], by_mode[1], fmt("case %zu w=%.1f", k, w));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const std::string detail =
        fmt("%zu solvable instances x 2 modes, w=%.1f: %d mismatches (%.1f s)", cases.size(), w, wrong, secs) +
        (wrong ? "; first: " + first : "");
    report(w == 1.0 ? 1 : 2, wrong == 0, detail);
  }
}

BenchPlan sweep_plan(std::vector<int> agents, std::vector<int> targets) {
  BenchPlan p;
  p.map_path = kMap;
  p.scen_path = kScen;
  p.agents = std::move(agents);
  p.targets = std::move(targets);
  for (std::uint64_t s = 0; s < 25; ++s) p.seeds.push_back(s);
  p.base.w = 1.1;
  p.base.mhpp = MhppMode::Heuristic;
  p.base.time_limit = 30;
  p.jobs = std::max(1u, std::thread::hardware_concurrency());
  return p;
}

// run_bench validates each solved run itself and records the outcome in `valid`.
void validate_records(const std::vector<BenchRecord>& recs) {
  for (const auto& r : recs) {
    if (!r.error.empty()) {
      if (validity.invalid++ == 0) validity.first = r.instance_id + ": " + r.error;
      continue;
    }
    if (r.status != SolveStatus::Solved) continue;
    ++validity.checked;
    if (!r.valid && validity.invalid++ == 0) validity.first = r.instance_id + " " + to_string(r.mode) + ": invalid";
  }
}

void deferral() {
  const BenchPlan plan = sweep_plan({10}, {20});
  const auto recs = run_bench(plan);
  validate_records(recs);
  std::map<std::string, std::map<SearchMode, const BenchRecord*>> by_instance;
  for (const auto& r : recs) by_instance[r.instance_id][r.mode] = &r;
  double sum_d = 0, sum_e = 0;
  for (const auto& [id, m] : by_instance) {
    const auto* d = m.at(SearchMode::Deferred);
    const auto* e = m.at(SearchMode::Eager);
    ++paired.pairs;
    if (d->mhpp_calls > e->mhpp_calls && paired.worse++ == 0)
      paired.first = id + fmt(" (%lld vs %lld)", static_cast<long long>(d->mhpp_calls),
                              static_cast<long long>(e->mhpp_calls));
    sum_d += static_cast<double>(d->mhpp_calls);
    sum_e += static_cast<double>(e->mhpp_calls);
  }
  const double n = static_cast<double>(by_instance.size());
  const double ratio = sum_e > 0 ? sum_d / sum_e : 1.0;
  const bool pass = paired.worse == 0 && ratio < 0.5;
  report(3, pass,
         fmt("%d paired runs, %d with more deferred calls; N10/M20 mean calls %.2f vs %.2f (ratio %.3f, need < 0.5)",
             paired.pairs, paired.worse, sum_d / n, sum_e / n, ratio) +
             (paired.worse ? "; first: " + paired.first : ""));
}

void trend() {
  const BenchPlan plan = sweep_plan({5, 10}, {10, 20});
  const auto t0 = std::chrono::steady_clock::now();
  const auto recs = run_bench(plan);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  validate_records(recs);
  std::map<std::pair<int, int>, std::map<SearchMode, BenchCell>> cells;
  for (const auto& c : aggregate(recs)) cells[{c.n, c.m}][c.mode] = c;
  int bad_rate = 0, bad_time = 0;
  for (const auto& [nm, m] : cells) {
    const auto& d = m.at(SearchMode::Deferred);
    const auto& e = m.at(SearchMode::Eager);
    const bool rate_ok = d.success_rate >= e.success_rate;
    const bool any = d.success_rate > 0 || e.success_rate > 0;
    const bool time_ok = !any || d.mean_time < e.mean_time;
    bad_rate += rate_ok ? 0 : 1;
    bad_time += time_ok ? 0 : 1;
    std::printf("  N=%-2d M=%-2d success %.2f/%.2f  mean time %.6f/%.6f s  mhpp calls %.2f/%.2f  %s\n", nm.first,
                nm.second, d.success_rate, e.success_rate, d.mean_time, e.mean_time, d.mean_mhpp_calls,
                e.mean_mhpp_calls, rate_ok && time_ok ? "ok" : "VIOLATION");
  }
  report(4, bad_rate == 0 && bad_time == 0,
         fmt("%zu cells (deferred/eager above): %d success-rate and %d runtime violations (sweep %.1f s)",
             cells.size(), bad_rate, bad_time, secs));
}

WorkspaceGraph rows(const std::vector<std::string>& r) {
  std::string text = "type octile\nheight " + std::to_string(r.size()) + "\nwidth " + std::to_string(r[0].size()) + "\nmap\n";
  for (const auto& s : r) text += s + "\n";
  return load_map(text, "hand");
}

void completeness() {
  struct Hand {
    std::string name;
    WorkspaceGraph g;
    Instance inst;
  };
  std::vector<Hand> hands;
  auto fixed_goals = [](Instance inst) {
    for (int j = 0; j < inst.num_agents; ++j) inst.goal_eligibility[j] = AgentSet::single(j);
    return inst;
  };
  {
    auto g = rows({".."});
    hands.push_back({"two-cell swap", g, fixed_goals(Instance::all_eligible({0, 1}, {1, 0}, {}))});
  }
  {
    // the target sits behind a wall
    auto g = rows({"..@."});
    hands.push_back({"walled-off target", g, Instance::all_eligible({0}, {1}, {3})});
  }
  {
    // three agents must rotate along a line
    auto g = rows({"...."});
    hands.push_back({"corridor rotation", g, fixed_goals(Instance::all_eligible({0, 1, 2}, {1, 2, 0}, {}))});
  }
  {
    // only agent 0 may claim the target, and agent 1 must end between them
    auto g = rows({"...."});
    Instance inst = fixed_goals(Instance::all_eligible({0, 1}, {2, 1}, {3}));
    inst.target_eligibility[0] = AgentSet::single(0);
    inst.goals = {0, 2};
    hands.push_back({"blocked dead end", g, inst});
  }
  int bad = 0;
  std::string detail;
  for (const auto& h : hands) {
    const auto o = joint_astar(h.inst, h.g);
    for (auto cfg : {strict(SearchMode::Deferred, 1.0), strict(SearchMode::Eager, 1.0), SearchConfig{}}) {
      cfg.time_limit = 10;
      const auto t0 = std::chrono::steady_clock::now();
      const auto r = run(h.g, h.inst, cfg, h.name);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      if (r.status != SolveStatus::Unsolvable || secs > 10 || o.status != OracleStatus::Unsolvable) {
        ++bad;
        detail += "; " + h.name + " gave " + to_string(r.status) + ", oracle " + to_string(o.status);
      }
    }
  }
  report(5, bad == 0, fmt("%zu unsolvable instances x 3 configs, all proven by the oracle: %d wrong", hands.size(), bad) + detail);
}

void mhpp_exactness() {
  std::mt19937_64 rng(77);
  int compared = 0, wrong = 0, infeasible = 0;
  while (compared < 200) {
    const int rows_n = 3 + static_cast<int>(rng() % 5), cols = 3 + static_cast<int>(rng() % 5);
    auto g = mcpf::testing::random_grid(rng, rows_n, cols, 10);
    const int n = 1 + static_cast<int>(rng() % 3), m = static_cast<int>(rng() % 6);
    auto inst = mcpf::testing::random_instance(rng, g, n, m, rng() % 2 == 0);
    if (!inst) continue;
    std::optional<TargetGraph> tg;
    try {
      tg = build_target_graph(g, *inst, inst->starts, {});
    } catch (const InfeasibleError&) {
      continue;
    }
    const auto brute = mhpp_brute(*tg);
    if (!brute) {
      ++infeasible;
      try {
        (void)solve_mhpp_exact(*tg);
        ++wrong;
      } catch (const InfeasibleError&) {
      }
      continue;
    }
    ++compared;
    const auto seq = solve_mhpp_exact(*tg);
    if (max_cost(sequence_cost(*tg, seq)) != *brute) ++wrong;
  }
  report(6, wrong == 0,
         fmt("%d feasible target graphs (K <= 5, N <= 3) plus %d infeasible ones: %d mismatches", compared,
             infeasible, wrong));
}

// Labels along a solution path that a search never stored.
int absent_labels(const WorkspaceGraph& g, const Instance& inst, const JointPath& path, const DmsSearch& s) {
  const VertexRoles roles(g, inst);
  TargetBits a;
  std::vector<Cost> cost(inst.num_agents, 0);
  apply_claims(roles, path.steps[0], a);
  int missing = 0;
  for (std::size_t t = 1; t < path.steps.size(); ++t) {
    cost = step_costs(roles, path.steps[t - 1], path.steps[t], cost, static_cast<int>(t) - 1);
    apply_claims(roles, path.steps[t], a);
    bool found = false;
    for (std::size_t id = 0; id < s.num_labels() && !found; ++id) {
      const Label& l = s.label(static_cast<LabelId>(id));
      found = l.v == path.steps[t] && l.a == a && l.g == cost;
    }
    missing += found ? 0 : 1;
  }
  return missing;
}

void dominance_probe() {
  // gmax sees several labels of the vector-rule optimum as equal to earlier ones
  const Json probe = Json::parse(R"({"schema":1,"map":{"name":"probe","width":3,"height":5,
      "rows":["..@","@..","...","@..","..."]},"agents":3,"starts":[[3,1],[2,1],[4,0]],
      "goals":[[4,1],[3,2],[0,0]],"targets":[],"target_eligibility":[],"goal_eligibility":[[1],[0,2],[2]]})");
  const Problem p = problem_from_json(probe);
  int gaps = 0, compared = 0;
  std::string detail;
  {
    DmsSearch sv(p.inst, p.graph, strict(SearchMode::Deferred, 1.0, DominanceRule::Vector));
    DmsSearch sg(p.inst, p.graph, strict(SearchMode::Deferred, 1.0, DominanceRule::GMax));
    const auto rv = sv.run(), rg = sg.run();
    check_valid(p.graph, p.inst, rv, "probe vector");
    check_valid(p.graph, p.inst, rg, "probe gmax");
    const int missing = rv.status == SolveStatus::Solved ? absent_labels(p.graph, p.inst, rv.path, sg) : -1;
    ++compared;
    if (rv.status != SolveStatus::Solved || (rg.status == SolveStatus::Solved && rg.makespan < rv.makespan)) ++gaps;
    detail = fmt("probe: %d labels of the vector optimum never stored under gmax, makespan %d vs %d", missing,
                 rv.makespan, rg.makespan);
  }
  int strict_gaps = 0;
  for (const auto& c : small_set()) {
    for (auto mode : {SearchMode::Deferred, SearchMode::Eager}) {
      const auto rv = run(c.g, c.inst, strict(mode, 1.0, DominanceRule::Vector), "vector");
      const auto rg = run(c.g, c.inst, strict(mode, 1.0, DominanceRule::GMax), "gmax");
      ++compared;
      const bool gm_solved = rg.status == SolveStatus::Solved;
      if (rv.status != SolveStatus::Solved || (gm_solved && rg.makespan < rv.makespan)) ++gaps;
      if (!gm_solved || rg.makespan > rv.makespan) ++strict_gaps;
    }
  }
  report(8, gaps == 0,
         fmt("%d paired runs, vector <= gmax violated %d times, strict gaps (gmax worse) %d; ", compared, gaps,
             strict_gaps) +
             detail);
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> want;
  for (int k = 1; k < argc; ++k) want.insert(std::atoi(argv[k]));
  if (want.empty()) want = {1, 2, 3, 4, 5, 6, 7, 8};
  auto on = [&](int c) { return want.count(c) > 0; };

  try {
    if (on(1) || on(2) || on(3)) optimality_and_bound(on(1), on(2));
    if (on(3)) deferral();
    if (on(4)) trend();
    if (on(5)) completeness();
    if (on(6)) mhpp_exactness();
    if (on(8)) dominance_probe();
    if (on(7))
      report(7, validity.invalid == 0,
             fmt("%d solved results validated in this run, %d invalid", validity.checked, validity.invalid) +
                 (validity.invalid ? "; first: " + validity.first : ""));
  } catch (const std::exception& e) {
    std::printf("FAIL acceptance aborted: %s\n", e.what());
    return 1;
  }
  return any_failed ? 1 : 0;
}
