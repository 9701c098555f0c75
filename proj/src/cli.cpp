#include "route_forge/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "route_forge/bench.hpp"
#include "route_forge/error.hpp"
#include "route_forge/generator.hpp"
#include "route_forge/geojson.hpp"
#include "route_forge/instance_io.hpp"
#include "route_forge/pipeline.hpp"

namespace route_forge::cli {

namespace {

namespace fs = std::filesystem;
using pipeline::Strategy;

struct ClusterFlags {
  int min_radius = 1;
  int max_radius = 10'000;
  std::size_t max_cluster_size = 500;
  std::size_t min_cluster_size = 35;
  std::size_t min_no_clusters = 0;

  void attach(CLI::App* app) {
    app->add_option("--min-radius", min_radius, "Smallest DBSCAN radius probed (m)");
    app->add_option("--max-radius", max_radius, "Largest DBSCAN radius probed (m)");
    app->add_option("--max-cluster-size", max_cluster_size, "Cluster size cap");
    app->add_option("--min-cluster-size", min_cluster_size, "Clusters below this are merged");
    app->add_option("--min-no-clusters", min_no_clusters,
                    "Minimum top-level cluster count (default ceil(N / max-cluster-size))");
  }

  clusterer::ClusterConfig config() const {
    clusterer::ClusterConfig c;
    c.min_radius = min_radius;
    c.max_radius = max_radius;
    c.max_cluster_size = max_cluster_size;
    c.min_cluster_size = min_cluster_size;
    if (min_no_clusters > 0) c.min_no_clusters = min_no_clusters;
    return c;
  }
};

struct SolverFlags {
  std::int64_t time_limit_ms = 5000;
  double optimization_step = 1.0;
  std::int64_t solution_limit = std::numeric_limits<std::int64_t>::max();
  std::uint64_t seed = 0;

  void attach(CLI::App* app, bool with_seed) {
    app->add_option("--time-limit-ms", time_limit_ms, "Local search budget per solver call");
    app->add_option("--optimization-step", optimization_step, "Minimum accepted improvement (m)");
    app->add_option("--solution-limit", solution_limit, "Maximum accepted moves per solver call");
    if (with_seed) app->add_option("--seed", seed, "Solver scan seed");
  }

  solver::SolverParams params() const {
    solver::SolverParams p;
    p.time_limit_ms = time_limit_ms;
    p.optimization_step = optimization_step;
    p.solution_limit = solution_limit;
    p.rng_seed = seed;
    return p;
  }
};

const std::vector<std::string> kStrategyNames{"monolithic", "dbscan", "recursive-dbscan",
                                              "recursive"};
const std::vector<std::string> kWindowStyleNames{"wide", "mixed"};

Strategy strategy_of(const std::string& name) { return *pipeline::parse_strategy(name); }

bench::WindowStyle window_style_of(const std::string& name) {
  return name == "wide" ? bench::WindowStyle::Wide : bench::WindowStyle::Mixed;
}

void override_capacity(ProblemInstance& instance, int capacity) {
  if (capacity <= 0) return;
  for (auto& v : instance.vehicles) v.capacity = capacity;
  check_instance(instance);
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Capacitated vehicle routing with time windows, decomposed by DBSCAN clustering",
               "route_forge"};
  app.require_subcommand(1);

  // generate
  auto* generate = app.add_subcommand("generate", "Write a seeded synthetic instance");
  bench::GeneratorConfig gen;
  std::size_t gen_fleet = 0;
  std::string gen_out;
  generate->add_option("--n", gen.n_waypoints, "Number of waypoints")->required();
  generate->add_option("--seed", gen.seed, "Generator seed");
  generate->add_option("--capacity", gen.vehicle_capacity, "Capacity of each vehicle");
  generate->add_option("--fleet", gen_fleet, "Fleet size (default ceil(n / 10))");
  generate->add_option("--demand-max", gen.demand_max, "Largest waypoint demand");
  std::string gen_windows = "mixed";
  generate->add_option("--window-style", gen_windows, "wide or mixed")
      ->check(CLI::IsMember(kWindowStyleNames));
  generate->add_option("--out", gen_out, "Instance JSON path")->required();

  // solve
  auto* solve = app.add_subcommand("solve", "Solve an instance with one strategy");
  std::string solve_instance, solve_out, solve_geojson;
  std::string solve_strategy = "recursive-dbscan";
  int solve_capacity = 0;
  ClusterFlags solve_cluster;
  SolverFlags solve_solver;
  solve->add_option("--instance", solve_instance, "Instance JSON")->required()->check(CLI::ExistingFile);
  solve->add_option("--strategy", solve_strategy, "monolithic, dbscan or recursive-dbscan")
      ->check(CLI::IsMember(kStrategyNames));
  solve->add_option("--out", solve_out, "Plan JSON path");
  solve->add_option("--geojson", solve_geojson, "GeoJSON path for the routes");
  solve->add_option("--capacity", solve_capacity, "Override every vehicle's capacity");
  solve_cluster.attach(solve);
  solve_solver.attach(solve, true);

  // cluster
  auto* cluster = app.add_subcommand("cluster", "Cluster an instance's waypoints");
  std::string cluster_instance, cluster_out;
  std::string cluster_mode = "recursive-dbscan";
  ClusterFlags cluster_flags;
  cluster->add_option("--instance", cluster_instance, "Instance JSON")->required()->check(CLI::ExistingFile);
  cluster->add_option("--mode", cluster_mode, "dbscan or recursive-dbscan")
      ->check(CLI::IsMember({"dbscan", "recursive-dbscan", "recursive"}));
  cluster->add_option("--out", cluster_out, "ClusterSet JSON path (stdout if omitted)");
  cluster_flags.attach(cluster);

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Run the strategy comparison grid");
  std::vector<std::size_t> bench_sizes;
  std::size_t bench_reps = 0;
  bool bench_full = false;
  std::vector<std::string> bench_strategies;
  std::string bench_out = "bench.csv";
  std::string bench_archive;
  std::uint64_t bench_seed = 1;
  int bench_capacity = 30;
  std::string bench_windows = "mixed";
  double bench_memory_mb = static_cast<double>(bench::kDefaultMemoryBudget >> 20);
  double bench_time_budget = 0.0;
  double bench_mono_scale = 1.0;
  std::size_t bench_threads = 0;
  bool bench_verify = false;
  ClusterFlags bench_cluster;
  SolverFlags bench_solver;
  bench_cmd->add_option("--sizes", bench_sizes, "Waypoint counts, comma separated")->delimiter(',');
  bench_cmd->add_option("--reps", bench_reps, "Repetitions per size");
  bench_cmd->add_flag("--full", bench_full, "Sizes 500..5000 step 500, 15 repetitions");
  bench_cmd->add_option("--strategies", bench_strategies, "Strategies, comma separated")
      ->delimiter(',')
      ->check(CLI::IsMember(kStrategyNames));
  bench_cmd->add_option("--out", bench_out, "Results CSV path");
  bench_cmd->add_option("--archive-dir", bench_archive, "Directory for per-run plan JSON");
  bench_cmd->add_option("--seed", bench_seed, "Base seed of the grid");
  bench_cmd->add_option("--capacity", bench_capacity, "Capacity of each vehicle");
  bench_cmd->add_option("--window-style", bench_windows, "wide or mixed")
      ->check(CLI::IsMember(kWindowStyleNames));
  bench_cmd->add_option("--memory-budget-mb", bench_memory_mb, "Per-run memory budget");
  bench_cmd->add_option("--time-budget-s", bench_time_budget, "Per-run wall time budget (0 = none)");
  bench_cmd->add_option("--monolithic-time-scale", bench_mono_scale,
                        "Multiplier on the monolithic solver's time limit");
  bench_cmd->add_option("--threads", bench_threads, "Parallel grid cells (default ROUTE_FORGE_THREADS or 1)");
  bench_cmd->add_flag("--verify", bench_verify, "Re-validate every archived plan");
  bench_cluster.attach(bench_cmd);
  bench_solver.attach(bench_cmd, false);

  // validate
  auto* validate = app.add_subcommand("validate", "Check a plan against an instance");
  std::string val_instance, val_plan;
  validate->add_option("--instance", val_instance, "Instance JSON")->required()->check(CLI::ExistingFile);
  validate->add_option("--plan", val_plan, "Plan JSON")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (generate->parsed()) {
      gen.window_style = window_style_of(gen_windows);
      if (gen_fleet > 0) gen.fleet_size = gen_fleet;
      const auto instance = bench::generate_instance(gen);
      io::write_json(gen_out, io::instance_to_json(instance));
      out << "wrote " << instance.waypoints.size() << " waypoints, " << instance.vehicles.size()
          << " vehicles to " << gen_out << "\n";
      return kExitOk;
    }

    if (solve->parsed()) {
      const Strategy strategy = strategy_of(solve_strategy);
      auto instance = io::read_instance(solve_instance);
      override_capacity(instance, solve_capacity);
      const auto cfg = solve_cluster.config();
      clusterer::check_config(cfg);
      const auto params = solve_solver.params();
      solver::check_params(params);
      const auto result = pipeline::run_strategy(instance, strategy, cfg, params);
      if (result.status != pipeline::Status::Ok) {
        err << "NO_SOLUTION_FOUND: " << result.failure << "\n";
        out << "strategy=" << pipeline::to_string(strategy) << " status=NO_SOLUTION wall_ms="
            << fixed(result.wall_time_ms, 1) << "\n";
        return kExitFailure;
      }
      if (!solve_out.empty()) io::write_json(solve_out, io::plan_to_json(result.plan));
      if (!solve_geojson.empty()) geojson::export_geojson(result.plan, instance, solve_geojson);
      out << "strategy=" << pipeline::to_string(strategy) << " status=OK"
          << " distance_m=" << fixed(result.total_distance, 0)
          << " busy_vehicles=" << result.busy_vehicle_count
          << " clusters=" << result.cluster_count
          << " peak_cluster=" << result.peak_cluster_size
          << " wall_ms=" << fixed(result.wall_time_ms, 1) << "\n";
      return kExitOk;
    }

    if (cluster->parsed()) {
      const auto instance = io::read_instance(cluster_instance);
      const auto cfg = cluster_flags.config();
      const auto points = pipeline::waypoint_positions(instance);
      clusterer::ClusterSet set;
      try {
        set = cluster_mode == "dbscan"
                  ? clusterer::binary_search_clusters(points, cfg, clusterer::Feasibility::MaxSizeCap)
                        .clusters
                  : clusterer::recursive_dbscan(points, cfg);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NoSolutionFound && e.code() != ErrorCode::RecursionLimit) throw;
        err << e.what() << "\n";
        return kExitFailure;
      }
      const auto j = io::cluster_set_to_json(set);
      if (cluster_out.empty()) {
        out << j.dump(2) << "\n";
      } else {
        io::write_json(cluster_out, j);
        out << "wrote " << set.size() << " clusters (peak " << set.peak_size() << ") to "
            << cluster_out << "\n";
      }
      return kExitOk;
    }

    if (bench_cmd->parsed()) {
      bench::BenchConfig config = bench_full ? bench::full_grid() : bench::BenchConfig{};
      if (!bench_sizes.empty()) config.sizes = bench_sizes;
      if (bench_reps > 0) config.repetitions = bench_reps;
      if (!bench_strategies.empty()) {
        config.strategies.clear();
        for (const auto& name : bench_strategies) config.strategies.push_back(strategy_of(name));
      }
      config.base_seed = bench_seed;
      config.generator.vehicle_capacity = bench_capacity;
      config.generator.window_style = window_style_of(bench_windows);
      config.cluster = bench_cluster.config();
      clusterer::check_config(config.cluster);
      config.solver = bench_solver.params();
      solver::check_params(config.solver);
      config.memory_budget_bytes = static_cast<std::size_t>(bench_memory_mb * 1024.0 * 1024.0);
      config.time_budget_s = bench_time_budget;
      config.monolithic_time_scale = bench_mono_scale;
      config.threads = bench_threads;
      config.keep_plans = bench_verify || !bench_archive.empty();

      const auto records = bench::run_benchmark(config, [&](const bench::BenchRecord& r) {
        out << "n=" << r.n_waypoints << " rep=" << r.repetition << " "
            << pipeline::to_string(r.strategy) << " " << bench::to_string(r.status)
            << " runtime_s=" << fixed(r.runtime_s, 3) << " distance_m=" << fixed(r.distance_m, 0)
            << " cars=" << r.busy_vehicles << "\n";
      });
      bench::export_csv(records, bench_out);

      if (!bench_archive.empty()) {
        fs::create_directories(bench_archive);
        for (const auto& r : records) {
          if (!r.plan) continue;
          const auto name = "plan_n" + std::to_string(r.n_waypoints) + "_rep" +
                            std::to_string(r.repetition) + "_" +
                            std::string(pipeline::to_string(r.strategy)) + ".json";
          io::write_json(fs::path(bench_archive) / name, io::plan_to_json(*r.plan));
        }
      }
      if (bench_verify) {
        const auto problems = bench::verify_records(config, records);
        for (const auto& p : problems) err << "verify: " << p << "\n";
        if (!problems.empty()) return kExitFailure;
      }
      for (const auto& s : bench::summarize(records)) {
        out << pipeline::to_string(s.strategy) << ": ok=" << s.ok_runs
            << " mean_runtime_s=" << fixed(s.mean_runtime_s, 3)
            << " mean_distance_m=" << fixed(s.mean_distance_m, 0)
            << " mean_cars=" << fixed(s.mean_vehicles, 1);
        if (s.strategy != Strategy::Monolithic && s.paired_runs > 0) {
          out << " vs monolithic: runtime " << fixed(s.runtime_delta_pct, 1) << "% distance "
              << fixed(s.distance_delta_pct, 1) << "% cars " << fixed(s.vehicles_delta_pct, 1)
              << "%";
        }
        out << "\n";
      }
      out << "wrote " << bench_out << "\n";
      return kExitOk;
    }

    if (validate->parsed()) {
      const auto instance = io::read_instance(val_instance);
      const auto plan = io::read_plan(val_plan, instance);
      const auto violations = validate_solution(plan, instance);
      for (const auto& v : violations) out << describe(v) << "\n";
      if (!violations.empty()) {
        out << violations.size() << " violation(s)\n";
        return kExitFailure;
      }
      out << "plan is feasible; distance_m=" << fixed(evaluate_objective(plan, instance), 0)
          << " busy_vehicles=" << busy_vehicle_count(plan) << "\n";
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace route_forge::cli
