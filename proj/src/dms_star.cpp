#include "mcpf/dms_star.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>

#include "mcpf/conflict.hpp"
#include "mcpf/target_graph.hpp"

namespace mcpf {

void SearchConfig::validate() const {
  if (!(w >= 1.0) || !std::isfinite(w)) throw ContractViolation("w must be a finite value >= 1");
  if (!(time_limit > 0.0)) throw ContractViolation("time limit must be positive");
  if (exact_cap < 0) throw ContractViolation("exact cap must be nonnegative");
}

namespace {

double thread_cpu_seconds() {
  timespec ts{};
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) + static_cast<double>(ts.tv_nsec) * 1e-9;
}

}  // namespace

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Solved: return "solved";
    case SolveStatus::Unsolvable: return "unsolvable";
    case SolveStatus::Timeout: return "timeout";
    case SolveStatus::Limit: return "limit";
  }
  return "?";
}

std::string to_string(SearchMode m) { return m == SearchMode::Deferred ? "deferred" : "eager"; }
std::string to_string(MhppMode m) { return m == MhppMode::Exact ? "exact" : "heuristic"; }
std::string to_string(DominanceRule r) { return r == DominanceRule::GMax ? "gmax" : "vector"; }

SolveStatus parse_status(const std::string& s) {
  for (auto st : {SolveStatus::Solved, SolveStatus::Unsolvable, SolveStatus::Timeout, SolveStatus::Limit})
    if (to_string(st) == s) return st;
  throw ContractViolation("unknown status '" + s + "'");
}

SearchMode parse_mode(const std::string& s) {
  if (s == "deferred") return SearchMode::Deferred;
  if (s == "eager") return SearchMode::Eager;
  throw ContractViolation("mode must be 'deferred' or 'eager'");
}

MhppMode parse_mhpp(const std::string& s) {
  if (s == "exact") return MhppMode::Exact;
  if (s == "heuristic") return MhppMode::Heuristic;
  throw ContractViolation("mhpp must be 'exact' or 'heuristic'");
}

DominanceRule parse_dominance(const std::string& s) {
  if (s == "gmax") return DominanceRule::GMax;
  if (s == "vector") return DominanceRule::Vector;
  throw ContractViolation("dominance must be 'gmax' or 'vector'");
}

std::size_t DmsSearch::JointHash::operator()(const JointVertex& v) const noexcept {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (Vertex x : v) h = (h ^ static_cast<std::size_t>(x)) * 0x100000001b3ULL;
  return h;
}

bool DmsSearch::OpenWorse::operator()(const OpenEntry& x, const OpenEntry& y) const {
  if (x.f != y.f) return x.f > y.f;
  if (x.progress != y.progress) return x.progress < y.progress;
  if (x.gmax != y.gmax) return x.gmax > y.gmax;
  const auto& vx = (*labels)[x.id].v;
  const auto& vy = (*labels)[y.id].v;
  if (vx != vy) return vx > vy;
  return x.id > y.id;
}

DmsSearch::DmsSearch(const Instance& inst, const WorkspaceGraph& g, SearchConfig cfg)
    : inst_(inst),
      g_(g),
      cfg_(cfg),
      roles_(g, inst),
      open_(OpenWorse{&labels_}),
      started_(std::chrono::steady_clock::now()) {}

bool DmsSearch::out_of_time() const {
  const std::chrono::duration<double> el = std::chrono::steady_clock::now() - started_;
  return el.count() > cfg_.time_limit;
}

double DmsSearch::f_value(const std::vector<Cost>& g, const std::vector<Cost>& h, int depth) const {
  double f = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Cost eff = h[i] > 0 ? depth : g[i];
    f = std::max(f, eff + cfg_.w * h[i]);
  }
  return f;
}

LabelId DmsSearch::make_root() {
  Label root;
  root.v = inst_.starts;
  apply_claims(roles_, root.v, root.a);
  root.g.assign(inst_.num_agents, 0);
  return add_label(std::move(root));
}

void DmsSearch::install_policy(Label& l, const JointSequence& seq) {
  ++stats_.policy_builds;
  auto p = std::make_shared<Policy>(
      build_policy(g_, inst_, roles_, PolicyOrigin{l.v, l.a, l.g, l.depth}, seq, false));
  l.h.resize(inst_.num_agents);
  for (int i = 0; i < inst_.num_agents; ++i) l.h[i] = p->remaining(i, 0);
  l.policy = std::move(p);
  l.policy_step = 0;
  l.sequenced = true;
  l.f_max.reset();
}

bool DmsSearch::sequence_fresh(Label& l) {
  ++stats_.mhpp_calls;
  const double t0 = thread_cpu_seconds();
  JointSequence seq;
  bool ok = true;
  try {
    const TargetGraph tg = build_target_graph(g_, inst_, l.v, l.a);
    seq = cfg_.mhpp == MhppMode::Exact ? solve_mhpp_exact(tg, cfg_.exact_cap)
                                       : solve_mhpp_heuristic(tg);
  } catch (const InfeasibleError&) {
    ok = false;
  }
  stats_.mhpp_time += thread_cpu_seconds() - t0;
  if (ok) install_policy(l, seq);
  return ok;
}

bool DmsSearch::target_seq(LabelId parent, LabelId child, ConflictSet conflicts) {
  const Label& p = labels_[parent];
  Label& c = labels_[child];
  if (!p.sequenced) throw ContractViolation("target_seq needs a sequenced parent");
  if (c.on_policy) {
    c.policy = p.policy;
    c.policy_step = p.policy_step + 1;
    c.h.resize(inst_.num_agents);
    for (int i = 0; i < inst_.num_agents; ++i) c.h[i] = c.policy->remaining(i, c.policy_step);
    c.sequenced = true;
    return true;
  }

  // Re-enter each agent's unfinished route from where the child stands.
  JointSequence seq;
  TargetBits covered = c.a;
  for (int i = 0; i < inst_.num_agents; ++i) {
    AgentRoute r;
    r.start = c.v[i];
    r.goal = p.policy->sequence.routes[i].goal;
    for (int m : p.policy->pending_targets(i, p.policy_step)) {
      if (c.a.test(m)) continue;
      r.targets.push_back(m);
      covered.set(m);
    }
    seq.routes.push_back(std::move(r));
  }
  for (int m = 0; m < inst_.num_targets(); ++m)
    if (!covered.test(m)) return sequence_fresh(c);
  install_policy(c, seq);

  // the parent's f_max, as used for its own expansion
  const double bound = p.f_max ? *p.f_max : f_value(p);
  for (int i : conflicts.members()) {
    const Cost est = (c.h[i] > 0 ? c.depth : c.g[i]) + c.h[i];
    if (est > bound) return sequence_fresh(c);
  }
  return true;
}

void DmsSearch::for_each_successor(LabelId id, const std::function<void(Label&&)>& fn) {
  const Label& l = labels_[id];
  if (!l.sequenced) throw ContractViolation("successors need a sequenced label");
  const int n = inst_.num_agents;
  const ConflictSet ic = l.conflict;
  const JointVertex from = l.v;
  const TargetBits a = l.a;
  const std::vector<Cost> g = l.g;
  const int depth = l.depth;
  const auto policy = l.policy;
  const int step = l.policy_step;

  std::vector<std::vector<Vertex>> choices(n);
  JointVertex on(n);
  for (int i = 0; i < n; ++i) {
    on[i] = policy->next(i, step);
    choices[i] = ic.contains(i) ? g_.neighbors(from[i]) : std::vector<Vertex>{on[i]};
  }

  std::vector<std::size_t> idx(n, 0);
  std::int64_t count = 0;
  while (true) {
    if ((++count & 0xfff) == 0 && out_of_time()) return;
    Label c;
    c.v.resize(n);
    for (int i = 0; i < n; ++i) c.v[i] = choices[i][idx[i]];
    c.a = a;
    apply_claims(roles_, c.v, c.a);
    c.g = step_costs(roles_, from, c.v, g, depth);
    c.depth = depth + 1;
    c.parent = id;
    if (c.v == on) {
      c.on_policy = true;
      c.policy = policy;
      c.policy_step = step + 1;
    }
    fn(std::move(c));

    int i = 0;
    while (i < n && ++idx[i] == choices[i].size()) idx[i++] = 0;
    if (i == n) break;
  }
}

std::vector<Label> DmsSearch::get_successors(LabelId id) {
  std::vector<Label> out;
  for_each_successor(id, [&](Label&& c) { out.push_back(std::move(c)); });
  return out;
}

void DmsSearch::back_prop(LabelId id, ConflictSet incoming) {
  if (incoming.empty()) return;
  if (cfg_.strict_backprop) incoming = AgentSet::all(inst_.num_agents);
  std::vector<std::pair<LabelId, ConflictSet>> stack{{id, incoming}};
  while (!stack.empty()) {
    auto [x, s] = stack.back();
    stack.pop_back();
    Label& l = labels_[x];
    if (s.subset_of(l.conflict)) continue;
    l.conflict |= s;
    if (!l.in_open && !l.pruned && !l.dead) {
      push_open(x);
      ++stats_.reopens;
    }
    for (LabelId b : l.back_set) stack.emplace_back(b, l.conflict);
  }
}

bool DmsSearch::covers(const Label& keeper, const Label& other) const {
  if (label_dominates(keeper, other, cfg_.dominance)) return true;
  return labels_equal(keeper, other, cfg_.dominance) && keeper.depth <= other.depth;
}

bool DmsSearch::is_covered(const Label& l) const {
  auto it = frontier_.find(l.v);
  if (it == frontier_.end()) return false;
  return std::any_of(it->second.begin(), it->second.end(),
                     [&](LabelId m) { return covers(labels_[m], l); });
}

void DmsSearch::dom_back_prop(LabelId from, const Label& pruned) {
  auto it = frontier_.find(pruned.v);
  if (it == frontier_.end()) return;
  const std::vector<LabelId> members = it->second;
  for (LabelId m : members) {
    if (!covers(labels_[m], pruned)) continue;
    auto& bs = labels_[m].back_set;
    if (std::find(bs.begin(), bs.end(), from) == bs.end()) bs.push_back(from);
    back_prop(from, labels_[m].conflict);
  }
}

LabelId DmsSearch::add_label(Label&& l) {
  const LabelId id = static_cast<LabelId>(labels_.size());
  labels_.push_back(std::move(l));
  Label& nl = labels_.back();
  auto& members = frontier_[nl.v];
  std::vector<LabelId> kept;
  kept.reserve(members.size() + 1);
  for (LabelId m : members) {
    Label& old = labels_[m];
    const bool beaten = label_dominates(nl, old, cfg_.dominance) ||
                        (labels_equal(nl, old, cfg_.dominance) && nl.depth < old.depth);
    if (!beaten) {
      kept.push_back(m);
      continue;
    }
    // the old member's predecessors now reach this vertex through nl
    old.pruned = true;
    for (LabelId b : old.back_set)
      if (std::find(nl.back_set.begin(), nl.back_set.end(), b) == nl.back_set.end())
        nl.back_set.push_back(b);
  }
  kept.push_back(id);
  members = std::move(kept);
  return id;
}

void DmsSearch::push_open(LabelId id) {
  Label& l = labels_[id];
  l.in_open = true;
  open_.push(OpenEntry{l.f_temp, static_cast<int>(l.a.count()), l.g_max(), id});
}

const std::vector<LabelId>& DmsSearch::frontier(const JointVertex& v) const {
  static const std::vector<LabelId> none;
  auto it = frontier_.find(v);
  return it == frontier_.end() ? none : it->second;
}

JointPath DmsSearch::reconstruct(LabelId goal) const {
  JointPath path;
  for (LabelId x = goal; x != kNoLabel; x = labels_[x].parent) path.steps.push_back(labels_[x].v);
  std::reverse(path.steps.begin(), path.steps.end());
  TargetBits a;
  for (std::size_t t = 0; t < path.steps.size(); ++t)
    for (auto [agent, m] : apply_claims(roles_, path.steps[t], a))
      path.claims.push_back(Claim{static_cast<int>(t), agent, m});
  return path;
}

SolveResult DmsSearch::run() {
  started_ = std::chrono::steady_clock::now();
  started_cpu_ = thread_cpu_seconds();
  SolveResult res;
  auto finish = [&](SolveStatus s) {
    res.status = s;
    stats_.total_time = thread_cpu_seconds() - started_cpu_;
    stats_.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
    res.stats = stats_;
    return res;
  };

  const bool eager = cfg_.mode == SearchMode::Eager;
  const LabelId root = make_root();
  if (eager) {
    if (!sequence_fresh(labels_[root])) return finish(SolveStatus::Unsolvable);
    labels_[root].f_temp = f_value(labels_[root]);
    labels_[root].f_max = labels_[root].f_temp;
  }
  push_open(root);

  while (!open_.empty()) {
    if (out_of_time()) return finish(SolveStatus::Timeout);
    if (cfg_.expansion_limit >= 0 && stats_.expansions >= cfg_.expansion_limit)
      return finish(SolveStatus::Limit);
    if (static_cast<std::int64_t>(labels_.size()) > cfg_.label_limit)
      return finish(SolveStatus::Limit);

    const LabelId id = open_.top().id;
    open_.pop();
    Label& l = labels_[id];
    l.in_open = false;
    if (l.pruned || l.dead) continue;

    if (!l.sequenced) {
      const bool ok = l.parent == kNoLabel
                          ? sequence_fresh(l)
                          : target_seq(l.parent, id, labels_[l.parent].conflict);
      if (!ok) {
        l.dead = true;
        continue;
      }
    }
    if (!l.f_max) l.f_max = f_value(l);
    if (*l.f_max > l.f_temp) {
      l.f_temp = *l.f_max;
      // a requeue that would pop straight back is skipped
      const OpenEntry again{l.f_temp, static_cast<int>(l.a.count()), l.g_max(), id};
      if (!open_.empty() && !OpenWorse{&labels_}(open_.top(), again)) {
        push_open(id);
        ++stats_.requeues;
        continue;
      }
    }

    if (check_success(inst_, roles_, l)) {
      res.path = reconstruct(id);
      res.makespan = l.g_max();
      return finish(SolveStatus::Solved);
    }

    ++stats_.expansions;
    const std::vector<Cost> h_child = simple_heu(l);
    for_each_successor(id, [&](Label&& c) {
      ++stats_.generations;
      const ConflictSet cs = check_conflict(labels_[id].v, c.v);
      back_prop(id, cs);
      if (!cs.empty()) return;
      if (is_covered(c)) {
        dom_back_prop(id, c);
        return;
      }
      if (eager) {
        if (c.on_policy) {
          c.h.resize(inst_.num_agents);
          for (int i = 0; i < inst_.num_agents; ++i) c.h[i] = c.policy->remaining(i, c.policy_step);
          c.sequenced = true;
        } else if (!sequence_fresh(c)) {
          return;
        }
        c.f_temp = f_value(c);
        c.f_max = c.f_temp;
      } else {
        c.f_temp = f_value(c.g, h_child, c.depth);
      }
      c.back_set = {id};
      push_open(add_label(std::move(c)));
    });
  }
  return finish(out_of_time() ? SolveStatus::Timeout : SolveStatus::Unsolvable);
}

SolveResult solve(const Instance& inst, const WorkspaceGraph& g, const SearchConfig& cfg) {
  validate_instance(g, inst);
  cfg.validate();
  if (cfg.mhpp == MhppMode::Exact && inst.num_targets() > cfg.exact_cap)
    throw ContractViolation("exact sequencing is capped at " + std::to_string(cfg.exact_cap) +
                            " targets; use the heuristic solver");
  DmsSearch search(inst, g, cfg);
  return search.run();
}

}  // namespace mcpf
