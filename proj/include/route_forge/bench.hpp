#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "route_forge/clusterer.hpp"
#include "route_forge/generator.hpp"
#include "route_forge/pipeline.hpp"
#include "route_forge/solver.hpp"

namespace route_forge::bench {

enum class RecordStatus { Ok, NoSolution, CrashedBudget };

std::string_view to_string(RecordStatus s);

/// One (size, strategy, repetition) run.
struct BenchRecord {
  std::size_t n_waypoints = 0;
  pipeline::Strategy strategy = pipeline::Strategy::Monolithic;
  std::size_t repetition = 0;
  double runtime_s = 0.0;
  double distance_m = 0.0;
  std::size_t busy_vehicles = 0;
  RecordStatus status = RecordStatus::Ok;
  std::uint64_t seed = 0;
  std::optional<RoutePlan> plan;  // archived for OK records when requested

  bool operator==(const BenchRecord&) const = default;
};

inline constexpr std::size_t kDefaultMemoryBudget = std::size_t{4} << 30;

struct BenchConfig {
  std::vector<std::size_t> sizes{100, 250, 500, 1000};
  std::size_t repetitions = 5;
  std::vector<pipeline::Strategy> strategies{std::begin(pipeline::kAllStrategies),
                                             std::end(pipeline::kAllStrategies)};
  GeneratorConfig generator;  // n_waypoints and seed are set per cell
  clusterer::ClusterConfig cluster;
  solver::SolverParams solver;
  std::uint64_t base_seed = 1;
  std::size_t memory_budget_bytes = kDefaultMemoryBudget;
  double time_budget_s = 0.0;  // 0 disables
  double monolithic_time_scale = 1.0;  // multiplies time_limit_ms for the monolithic solve
  std::size_t threads = 0;     // 0: ROUTE_FORGE_THREADS or 1
  bool keep_plans = true;
};

/// The full grid: 500..5000 step 500, 15 repetitions.
BenchConfig full_grid();

std::uint64_t cell_seed(std::uint64_t base_seed, std::size_t n, std::size_t repetition);

/// Instance for one grid cell.
ProblemInstance cell_instance(const BenchConfig& config, std::size_t n, std::size_t repetition);

/// Peak memory a strategy needs at size n, dominated by the largest dense
/// distance matrix it builds.
std::size_t estimate_memory_bytes(std::size_t n, pipeline::Strategy strategy,
                                  const clusterer::ClusterConfig& cluster);

std::size_t worker_count(const BenchConfig& config);

using ProgressFn = std::function<void(const BenchRecord&)>;

/// Every strategy runs on the same instance per (size, repetition). Returns
/// |sizes| * repetitions * |strategies| records ordered by size, repetition,
/// then strategy, whatever fails.
std::vector<BenchRecord> run_benchmark(const BenchConfig& config, const ProgressFn& progress = {});

/// Re-validates and re-evaluates every archived OK plan against its
/// regenerated instance. Returns human-readable mismatches (empty if clean).
std::vector<std::string> verify_records(const BenchConfig& config,
                                        const std::vector<BenchRecord>& records);

/// Wide CSV, one row per (size, repetition): wps, runtime_*, distance_*,
/// cars_* for monolithic, dbscan, recursive. Anything not OK is "-".
std::string to_csv(const std::vector<BenchRecord>& records);
void export_csv(const std::vector<BenchRecord>& records, const std::filesystem::path& path);

/// Inverse of to_csv for the populated fields; rows of the same size are
/// numbered as consecutive repetitions.
std::vector<BenchRecord> parse_csv(std::string_view text);

struct StrategySummary {
  pipeline::Strategy strategy;
  std::size_t ok_runs = 0;
  std::size_t paired_runs = 0;  // cells where monolithic also succeeded
  double mean_runtime_s = 0.0;
  double mean_distance_m = 0.0;
  double mean_vehicles = 0.0;
  // Mean over paired cells of the per-cell percentage difference against
  // the monolithic run; zero when there are no paired cells.
  double runtime_delta_pct = 0.0;
  double distance_delta_pct = 0.0;
  double vehicles_delta_pct = 0.0;
};

std::vector<StrategySummary> summarize(const std::vector<BenchRecord>& records);

}  // namespace route_forge::bench
