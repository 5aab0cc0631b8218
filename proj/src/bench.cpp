#include "mcpf/bench.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "mcpf/oracle.hpp"

namespace mcpf {

namespace {

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

std::string resolve(const std::string& base_dir, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? p : (std::filesystem::path(base_dir) / path).string();
}

BenchPlan plan_unchecked(const Json& j, const std::string& base_dir) {
  if (get_or<int>(j, "schema", 0) != kSchemaVersion) throw ParseError(0, "plan needs \"schema\": 1");
  BenchPlan p;
  p.map_path = resolve(base_dir, j.at("map").get<std::string>());
  p.scen_path = resolve(base_dir, j.at("scen").get<std::string>());
  p.agents = j.at("agents").get<std::vector<int>>();
  p.targets = j.at("targets").get<std::vector<int>>();
  if (j.contains("seeds")) {
    p.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  } else {
    const auto count = j.at("seed_count").get<std::uint64_t>();
    const auto first = get_or<std::uint64_t>(j, "seed_base", 0);
    for (std::uint64_t s = 0; s < count; ++s) p.seeds.push_back(first + s);
  }
  if (j.contains("modes")) {
    p.modes.clear();
    for (const auto& m : j.at("modes")) p.modes.push_back(parse_mode(m.get<std::string>()));
  }
  p.base.w = get_or<double>(j, "w", 1.1);
  p.base.mhpp = parse_mhpp(get_or<std::string>(j, "mhpp", "heuristic"));
  p.base.dominance = parse_dominance(get_or<std::string>(j, "dominance", "gmax"));
  p.base.strict_backprop = get_or<bool>(j, "strict_backprop", false);
  p.base.time_limit = get_or<double>(j, "time_limit", 30.0);
  p.base.expansion_limit = get_or<std::int64_t>(j, "expansion_limit", -1);
  p.eligibility = EligibilitySpec::parse(get_or<std::string>(j, "eligibility", "all"));
  p.jobs = std::max(1, get_or<int>(j, "jobs", 1));
  p.base.validate();
  return p;
}

double charged_time(const BenchRecord& r) {
  if (r.status == SolveStatus::Solved || r.status == SolveStatus::Unsolvable) return r.total_time;
  return r.time_limit;
}

}  // namespace

BenchPlan plan_from_json(const Json& j, const std::string& base_dir) {
  try {
    return plan_unchecked(j, base_dir);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("bench plan: ") + e.what());
  }
}

std::string config_fingerprint(const SearchConfig& cfg) {
  std::ostringstream out;
  out << "mode=" << to_string(cfg.mode) << ";w=" << cfg.w << ";mhpp=" << to_string(cfg.mhpp)
      << ";dominance=" << to_string(cfg.dominance) << ";strict=" << (cfg.strict_backprop ? 1 : 0)
      << ";limit=" << cfg.time_limit;
  return out.str();
}

Json record_to_json(const BenchRecord& r) {
  Json j = {{"instance", r.instance_id},
            {"map", r.map},
            {"N", r.n},
            {"M", r.m},
            {"seed", r.seed},
            {"config", r.fingerprint},
            {"mode", to_string(r.mode)},
            {"w", r.w},
            {"time_limit_s", r.time_limit},
            {"status", r.error.empty() ? to_string(r.status) : "error"},
            {"makespan", r.makespan},
            {"total_time_s", r.total_time},
            {"mhpp_time_s", r.mhpp_time},
            {"mhpp_calls", r.mhpp_calls},
            {"expansions", r.expansions},
            {"valid", r.valid}};
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

BenchRecord record_from_json(const Json& j) {
  BenchRecord r;
  r.instance_id = j.at("instance").get<std::string>();
  r.map = j.at("map").get<std::string>();
  r.n = j.at("N").get<int>();
  r.m = j.at("M").get<int>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.fingerprint = j.at("config").get<std::string>();
  r.mode = parse_mode(j.at("mode").get<std::string>());
  r.w = j.at("w").get<double>();
  r.time_limit = j.at("time_limit_s").get<double>();
  const auto status = j.at("status").get<std::string>();
  if (status == "error") {
    r.error = j.value("error", std::string("error"));
  } else {
    r.status = parse_status(status);
  }
  r.makespan = j.at("makespan").get<Cost>();
  r.total_time = j.at("total_time_s").get<double>();
  r.mhpp_time = j.at("mhpp_time_s").get<double>();
  r.mhpp_calls = j.at("mhpp_calls").get<std::int64_t>();
  r.expansions = j.at("expansions").get<std::int64_t>();
  r.valid = j.at("valid").get<bool>();
  return r;
}

std::vector<BenchRecord> run_bench(const BenchPlan& plan,
                                   const std::function<void(const BenchRecord&)>& progress) {
  const WorkspaceGraph g = load_map_file(plan.map_path);
  const auto scen = load_scen_file(plan.scen_path);
  const std::string map_name = std::filesystem::path(plan.map_path).stem().string();

  struct Job {
    int n, m;
    std::uint64_t seed;
    SearchMode mode;
  };
  std::vector<Job> jobs;
  // Execution order alternates the mode order from one seed to the next: a
  // run that directly follows another on the same instance measures a little
  // faster (allocator and cache reuse), and alternating cancels that out of
  // the per-cell means. Records stay in plan order.
  std::vector<std::size_t> order;
  for (int n : plan.agents)
    for (int m : plan.targets)
      for (std::size_t s = 0; s < plan.seeds.size(); ++s) {
        const std::size_t first = jobs.size();
        for (SearchMode mode : plan.modes) jobs.push_back(Job{n, m, plan.seeds[s], mode});
        for (std::size_t k = 0; k < plan.modes.size(); ++k)
          order.push_back(s % 2 == 0 ? first + k : jobs.size() - 1 - k);
      }

  std::vector<BenchRecord> out(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex progress_mu;

  auto work = [&] {
    for (std::size_t x = next++; x < order.size(); x = next++) {
      const std::size_t k = order[x];
      const Job& job = jobs[k];
      SearchConfig cfg = plan.base;
      cfg.mode = job.mode;
      BenchRecord& r = out[k];
      r.map = map_name;
      r.n = job.n;
      r.m = job.m;
      r.seed = job.seed;
      r.mode = job.mode;
      r.w = cfg.w;
      r.time_limit = cfg.time_limit;
      r.fingerprint = config_fingerprint(cfg);
      r.instance_id = map_name + "/N" + std::to_string(job.n) + "/M" + std::to_string(job.m) + "/s" +
                      std::to_string(job.seed);
      try {
        // private copy: every run starts with a cold shortest-path cache
        const WorkspaceGraph local = g;
        const Instance inst = make_instance(local, scen, job.n, job.m, job.seed, plan.eligibility);
        const SolveResult res = solve(inst, local, cfg);
        r.status = res.status;
        r.makespan = res.status == SolveStatus::Solved ? res.makespan : 0;
        r.total_time = res.stats.total_time;
        r.mhpp_time = res.stats.mhpp_time;
        r.mhpp_calls = res.stats.mhpp_calls;
        r.expansions = res.stats.expansions;
        r.valid = res.status == SolveStatus::Solved && validate_solution(local, inst, res.path).ok();
      } catch (const std::exception& e) {
        r.error = e.what();
      }
      if (progress) {
        std::lock_guard lock(progress_mu);
        progress(r);
      }
    }
  };

  const int threads = std::max(1, std::min<int>(plan.jobs, static_cast<int>(jobs.size())));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return out;
}

std::vector<BenchCell> aggregate(const std::vector<BenchRecord>& records) {
  using Key = std::tuple<std::string, int, int, int, double>;
  std::map<Key, BenchCell> cells;
  std::map<Key, int> solved;
  for (const auto& r : records) {
    const Key key{r.map, r.n, r.m, static_cast<int>(r.mode), r.w};
    BenchCell& c = cells[key];
    c.map = r.map;
    c.n = r.n;
    c.m = r.m;
    c.mode = r.mode;
    c.w = r.w;
    ++c.runs;
    if (r.error.empty() && r.status == SolveStatus::Solved) ++solved[key];
    c.mean_time += r.error.empty() ? charged_time(r) : r.time_limit;
    c.mean_mhpp_time += r.mhpp_time;
    c.mean_mhpp_calls += static_cast<double>(r.mhpp_calls);
  }
  std::vector<BenchCell> out;
  for (auto& [key, c] : cells) {
    c.success_rate = static_cast<double>(solved[key]) / c.runs;
    c.mean_time /= c.runs;
    c.mean_mhpp_time /= c.runs;
    c.mean_mhpp_calls /= c.runs;
    out.push_back(c);
  }
  return out;
}

std::string to_csv(const std::vector<BenchCell>& cells) {
  std::string out = std::string(kCsvHeader) + "\n";
  char buf[512];
  for (const auto& c : cells) {
    std::snprintf(buf, sizeof buf, "%s,%d,%d,%s,%g,%.4f,%.6f,%.6f,%.3f\n", c.map.c_str(), c.n, c.m,
                  to_string(c.mode).c_str(), c.w, c.success_rate, c.mean_time, c.mean_mhpp_time,
                  c.mean_mhpp_calls);
    out += buf;
  }
  return out;
}

std::string to_jsonl(const std::vector<BenchRecord>& records) {
  std::string out;
  for (const auto& r : records) out += record_to_json(r).dump() + "\n";
  return out;
}

}  // namespace mcpf
