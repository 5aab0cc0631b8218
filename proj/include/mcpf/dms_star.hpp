#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <queue>
#include <string>
#include <unordered_map>
#include <vector>

#include "mcpf/instance.hpp"
#include "mcpf/joint_path.hpp"
#include "mcpf/label.hpp"
#include "mcpf/mhpp.hpp"
#include "mcpf/workspace_graph.hpp"

namespace mcpf {

enum class SearchMode { Deferred, Eager };
enum class MhppMode { Exact, Heuristic };

struct SearchConfig {
  double w = 1.0;
  SearchMode mode = SearchMode::Deferred;
  DominanceRule dominance = DominanceRule::GMax;
  bool strict_backprop = false;
  MhppMode mhpp = MhppMode::Exact;
  double time_limit = 60.0;            // seconds
  std::int64_t expansion_limit = -1;   // < 0: unlimited
  std::int64_t label_limit = 4'000'000;
  int exact_cap = kDefaultExactCap;

  // Throws ContractViolation on w < 1, time_limit <= 0, or exact_cap < 0.
  void validate() const;
};

enum class SolveStatus { Solved, Unsolvable, Timeout, Limit };

std::string to_string(SolveStatus s);
std::string to_string(SearchMode m);
std::string to_string(MhppMode m);
std::string to_string(DominanceRule r);

// Inverses of to_string; throw ContractViolation on unknown names.
SolveStatus parse_status(const std::string& s);
SearchMode parse_mode(const std::string& s);
MhppMode parse_mhpp(const std::string& s);
DominanceRule parse_dominance(const std::string& s);

struct SearchStats {
  std::int64_t expansions = 0;
  std::int64_t generations = 0;
  std::int64_t mhpp_calls = 0;
  std::int64_t policy_builds = 0;
  std::int64_t requeues = 0;  // f_temp -> f_max lazy requeues
  std::int64_t reopens = 0;   // back-propagation re-insertions
  // Runtimes are CPU seconds of the solving thread; wall_time is the elapsed
  // time the limit is enforced against.
  double mhpp_time = 0.0;
  double total_time = 0.0;
  double wall_time = 0.0;

  std::int64_t reinsertions() const { return requeues + reopens; }
};

struct SolveResult {
  SolveStatus status = SolveStatus::Unsolvable;
  JointPath path;  // empty unless solved
  Cost makespan = 0;
  SearchStats stats;
};

// One DMS* / MS* run. The step-level operations are public so they can be
// exercised individually; solve() below is the usual entry point.
class DmsSearch {
 public:
  DmsSearch(const Instance& inst, const WorkspaceGraph& g, SearchConfig cfg);

  SolveResult run();

  // Creates the root label (not yet queued) and returns its id.
  LabelId make_root();

  // Limited neighbours of a sequenced label: agents in its conflict set take
  // every move, the rest follow the policy. Candidates are not stored.
  void for_each_successor(LabelId id, const std::function<void(Label&&)>& fn);
  std::vector<Label> get_successors(LabelId id);

  void back_prop(LabelId id, ConflictSet incoming);
  // `pruned` is a candidate at some joint vertex, generated from `from`.
  void dom_back_prop(LabelId from, const Label& pruned);

  // Sequences `child` (an off-policy label reuses the parent sequence, an
  // on-policy one keeps it). Returns false when no feasible joint sequence
  // exists from the child.
  bool target_seq(LabelId parent, LabelId child, ConflictSet conflicts);
  // Runs the configured MHPP solver from the label. False on infeasibility.
  bool sequence_fresh(Label& l);

  // max_i(eff^i + w h^i) where eff^i is depth for agents that still have to
  // move and g^i for agents parked on their goal.
  double f_value(const std::vector<Cost>& g, const std::vector<Cost>& h, int depth) const;
  double f_value(const Label& l) const { return f_value(l.g, l.h, l.depth); }

  // Inserts a candidate into the label store and its frontier set (removing
  // members it covers) and returns its id.
  LabelId add_label(Label&& l);
  // True if a frontier member at l.v dominates or equals l.
  bool is_covered(const Label& l) const;
  void push_open(LabelId id);

  Label& label(LabelId id) { return labels_[id]; }
  const Label& label(LabelId id) const { return labels_[id]; }
  std::size_t num_labels() const { return labels_.size(); }
  const std::vector<LabelId>& frontier(const JointVertex& v) const;
  const SearchStats& stats() const { return stats_; }
  const VertexRoles& roles() const { return roles_; }

  JointPath reconstruct(LabelId goal) const;

 private:
  struct JointHash {
    std::size_t operator()(const JointVertex& v) const noexcept;
  };
  struct OpenEntry {
    double f;
    int progress;
    Cost gmax;
    LabelId id;
  };
  struct OpenWorse {
    const std::deque<Label>* labels;
    bool operator()(const OpenEntry& x, const OpenEntry& y) const;
  };

  bool covers(const Label& keeper, const Label& other) const;
  void install_policy(Label& l, const JointSequence& seq);
  bool out_of_time() const;

  const Instance& inst_;
  const WorkspaceGraph& g_;
  SearchConfig cfg_;
  VertexRoles roles_;
  std::deque<Label> labels_;
  std::unordered_map<JointVertex, std::vector<LabelId>, JointHash> frontier_;
  std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenWorse> open_;
  SearchStats stats_;
  std::chrono::steady_clock::time_point started_;
  double started_cpu_ = 0.0;
};

// Validates the instance and config, then runs the search.
SolveResult solve(const Instance& inst, const WorkspaceGraph& g, const SearchConfig& cfg);

}  // namespace mcpf
