#include "mcpf/cli.hpp"

#include <filesystem>
#include <fstream>
#include <limits>

#include <CLI11.hpp>

#include "mcpf/bench.hpp"
#include "mcpf/json_io.hpp"
#include "mcpf/oracle.hpp"
#include "mcpf/scenario.hpp"

namespace mcpf {

namespace {

// Where an instance comes from: a JSON document, or map + scen + counts.
struct ProblemSource {
  std::string instance;
  std::string map;
  std::string scen;
  int agents = 1;
  int targets = 0;
  std::uint64_t seed = 0;
  std::string eligibility = "all";

  void add_to(CLI::App* app) {
    app->add_option("--instance", instance, "instance JSON");
    app->add_option("--map", map, "movingai .map file");
    app->add_option("--scen", scen, "movingai .scen file");
    app->add_option("--agents,-n", agents, "agent count")->check(CLI::Range(1, kMaxAgents));
    app->add_option("--targets,-m", targets, "target count")->check(CLI::Range(0, kMaxTargets));
    app->add_option("--seed", seed, "target sampling seed");
    app->add_option("--eligibility", eligibility, "all | random:K");
  }

  Problem load() const {
    if (!instance.empty()) {
      const auto dir = std::filesystem::path(instance).parent_path().string();
      return problem_from_json(read_json_file(instance), dir.empty() ? "." : dir);
    }
    if (map.empty() || scen.empty()) throw CLI::ValidationError("need --instance or both --map and --scen");
    WorkspaceGraph g = load_map_file(map);
    Instance inst = make_instance(g, load_scen_file(scen), agents, targets, seed,
                                  EligibilitySpec::parse(eligibility));
    return Problem{std::move(g), std::move(inst)};
  }
};

struct SearchFlags {
  std::string mode = "deferred";
  double w = 1.0;
  std::string mhpp = "exact";
  std::string dominance = "gmax";
  bool strict = false;
  double time_limit = 60.0;
  std::int64_t expansion_limit = -1;

  void add_to(CLI::App* app) {
    app->add_option("--mode", mode, "deferred | eager")->check(CLI::IsMember({"deferred", "eager"}));
    app->add_option("--w", w, "heuristic inflation (>= 1)")
        ->check(CLI::Range(1.0, std::numeric_limits<double>::max()));
    app->add_option("--mhpp", mhpp, "exact | heuristic")->check(CLI::IsMember({"exact", "heuristic"}));
    app->add_option("--dominance", dominance, "gmax | vector")->check(CLI::IsMember({"gmax", "vector"}));
    app->add_flag("--strict-backprop", strict, "back-propagate the full agent set on conflict");
    app->add_option("--time-limit", time_limit, "seconds")
        ->check(CLI::Range(1e-9, std::numeric_limits<double>::max()));
    app->add_option("--expansion-limit", expansion_limit, "stop after this many expansions");
  }

  SearchConfig config() const {
    SearchConfig c;
    c.mode = parse_mode(mode);
    c.w = w;
    c.mhpp = parse_mhpp(mhpp);
    c.dominance = parse_dominance(dominance);
    c.strict_backprop = strict;
    c.time_limit = time_limit;
    c.expansion_limit = expansion_limit;
    return c;
  }
};

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    write_text_file(path, text);
  }
}

int status_code(SolveStatus s) {
  switch (s) {
    case SolveStatus::Solved: return kExitOk;
    case SolveStatus::Unsolvable: return kExitUnsolvable;
    case SolveStatus::Timeout:
    case SolveStatus::Limit: return kExitTimeout;
  }
  return kExitData;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Min-max multi-agent combinatorial path finding (DMS*)", "mcpf"};
  app.require_subcommand(1);
  std::string out_path;

  auto* solve_cmd = app.add_subcommand("solve", "solve one instance, print result JSON");
  ProblemSource solve_src;
  SearchFlags solve_flags;
  bool no_timing = false;
  solve_src.add_to(solve_cmd);
  solve_flags.add_to(solve_cmd);
  solve_cmd->add_flag("--no-timing", no_timing, "omit wall-clock fields from the result");
  solve_cmd->add_option("--out", out_path, "result JSON path (default stdout)");

  auto* bench_cmd = app.add_subcommand("bench", "run a bench plan, write CSV and JSONL");
  std::string plan_path, jsonl_path;
  int jobs = 0;
  bool quiet = false;
  bench_cmd->add_option("--plan", plan_path, "bench plan JSON")->required();
  bench_cmd->add_option("--out", out_path, "aggregate CSV path (default stdout)");
  bench_cmd->add_option("--jsonl", jsonl_path, "per-run JSONL records path");
  bench_cmd->add_option("--jobs", jobs, "concurrent runs (overrides the plan)")->check(CLI::Range(1, 256));
  bench_cmd->add_flag("--quiet", quiet, "no per-run progress on stderr");

  auto* validate_cmd = app.add_subcommand("validate", "check a joint path against an instance");
  ProblemSource validate_src;
  std::string path_file;
  validate_src.add_to(validate_cmd);
  validate_cmd->add_option("--path", path_file, "result JSON holding path and claims")->required();
  validate_cmd->add_option("--out", out_path, "report JSON path (default stdout)");

  auto* oracle_cmd = app.add_subcommand("oracle", "brute-force optimal makespan for tiny instances");
  ProblemSource oracle_src;
  OracleLimits limits;
  oracle_src.add_to(oracle_cmd);
  oracle_cmd->add_option("--max-states", limits.max_states, "state budget");
  oracle_cmd->add_option("--out", out_path, "result JSON path (default stdout)");

  auto* instance_cmd = app.add_subcommand("instance", "build instance JSON from map + scen");
  ProblemSource instance_src;
  instance_src.add_to(instance_cmd);
  instance_cmd->add_option("--out", out_path, "instance JSON path (default stdout)");

  auto* genmap_cmd = app.add_subcommand("genmap", "generate a random map and matching scen");
  int width = 32, height = 32, percent = 20, rows = 100;
  std::uint64_t map_seed = 0;
  std::string map_out, scen_out, map_name;
  genmap_cmd->add_option("--width", width)->check(CLI::Range(1, 4096));
  genmap_cmd->add_option("--height", height)->check(CLI::Range(1, 4096));
  genmap_cmd->add_option("--percent", percent, "blocked cell percentage")->check(CLI::Range(0, 100));
  genmap_cmd->add_option("--rows", rows, "scen rows")->check(CLI::Range(1, 100000));
  genmap_cmd->add_option("--seed", map_seed);
  genmap_cmd->add_option("--map-out", map_out)->required();
  genmap_cmd->add_option("--scen-out", scen_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*solve_cmd) {
      const Problem p = solve_src.load();
      const SearchConfig cfg = solve_flags.config();
      const SolveResult r = solve(p.inst, p.graph, cfg);
      emit(out_path, result_to_json(p.graph, cfg, r, !no_timing).dump(2) + "\n", out);
      return status_code(r.status);
    }
    if (*bench_cmd) {
      const auto dir = std::filesystem::path(plan_path).parent_path().string();
      BenchPlan plan = plan_from_json(read_json_file(plan_path), dir.empty() ? "." : dir);
      if (jobs > 0) plan.jobs = jobs;
      const auto records = run_bench(plan, [&](const BenchRecord& r) {
        if (quiet) return;
        err << r.instance_id << " " << to_string(r.mode) << " "
            << (r.error.empty() ? to_string(r.status) : "error: " + r.error) << " "
            << r.total_time << "s\n";
      });
      if (!jsonl_path.empty()) write_text_file(jsonl_path, to_jsonl(records));
      emit(out_path, to_csv(aggregate(records)), out);
      for (const auto& r : records)
        if (!r.error.empty() || (r.status == SolveStatus::Solved && !r.valid)) return kExitData;
      return kExitOk;
    }
    if (*validate_cmd) {
      const Problem p = validate_src.load();
      const JointPath path = path_from_json(p.graph, read_json_file(path_file));
      const ValidationReport rep = validate_solution(p.graph, p.inst, path);
      emit(out_path, report_to_json(rep).dump(2) + "\n", out);
      return rep.ok() ? kExitOk : kExitData;
    }
    if (*oracle_cmd) {
      const Problem p = oracle_src.load();
      const OracleResult r = joint_astar(p.inst, p.graph, limits);
      emit(out_path, oracle_to_json(p.graph, r).dump(2) + "\n", out);
      if (r.status == OracleStatus::Solved) return kExitOk;
      return r.status == OracleStatus::Unsolvable ? kExitUnsolvable : kExitData;
    }
    if (*instance_cmd) {
      const Problem p = instance_src.load();
      emit(out_path, problem_to_json(p.graph, p.inst).dump(2) + "\n", out);
      return kExitOk;
    }
    if (*genmap_cmd) {
      const std::string name =
          std::filesystem::path(map_out).stem().string();
      const WorkspaceGraph g = generate_random_map(width, height, percent, map_seed, name);
      write_text_file(map_out, to_map_text(g));
      const auto scen = generate_scen(g, std::filesystem::path(map_out).filename().string(), rows, map_seed);
      write_text_file(scen_out, to_scen_text(scen));
      return kExitOk;
    }
  } catch (const CLI::ValidationError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace mcpf
