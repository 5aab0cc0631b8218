#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mcpf/dms_star.hpp"
#include "mcpf/json_io.hpp"
#include "mcpf/scenario.hpp"

namespace mcpf {

// A config grid crossed with a seeded instance set on one map/scen pair.
struct BenchPlan {
  std::string map_path;
  std::string scen_path;
  std::vector<int> agents;
  std::vector<int> targets;
  std::vector<std::uint64_t> seeds;
  std::vector<SearchMode> modes{SearchMode::Deferred, SearchMode::Eager};
  SearchConfig base;  // mode is overridden per run
  EligibilitySpec eligibility;
  int jobs = 1;
};

// Paths in the plan are resolved against `base_dir`. Throws ParseError on a
// malformed plan.
BenchPlan plan_from_json(const Json& j, const std::string& base_dir = ".");

struct BenchRecord {
  std::string instance_id;
  std::string map;
  int n = 0;
  int m = 0;
  std::uint64_t seed = 0;
  std::string fingerprint;
  SearchMode mode = SearchMode::Deferred;
  double w = 1.0;
  double time_limit = 0.0;
  SolveStatus status = SolveStatus::Unsolvable;
  Cost makespan = 0;
  double total_time = 0.0;
  double mhpp_time = 0.0;
  std::int64_t mhpp_calls = 0;
  std::int64_t expansions = 0;
  bool valid = false;  // solved and the validator found nothing
  std::string error;   // instance could not be built or solved
};

std::string config_fingerprint(const SearchConfig& cfg);

Json record_to_json(const BenchRecord& r);
BenchRecord record_from_json(const Json& j);

// Runs every (instance, mode) pair. Records come back in plan order whatever
// the completion order. `progress` (optional) is called after each record.
std::vector<BenchRecord> run_bench(const BenchPlan& plan,
                                   const std::function<void(const BenchRecord&)>& progress = {});

// One row per (map, N, M, mode, w) cell that has records. Runs that did not
// finish are charged the time limit.
struct BenchCell {
  std::string map;
  int n = 0;
  int m = 0;
  SearchMode mode = SearchMode::Deferred;
  double w = 1.0;
  int runs = 0;
  double success_rate = 0.0;
  double mean_time = 0.0;
  double mean_mhpp_time = 0.0;
  double mean_mhpp_calls = 0.0;
};

std::vector<BenchCell> aggregate(const std::vector<BenchRecord>& records);

inline constexpr const char* kCsvHeader =
    "map,N,M,mode,w,success_rate,mean_time_s,mean_mhpp_time_s,mean_mhpp_calls";
std::string to_csv(const std::vector<BenchCell>& cells);
std::string to_jsonl(const std::vector<BenchRecord>& records);

}  // namespace mcpf
