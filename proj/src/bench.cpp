#include "route_forge/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "route_forge/error.hpp"
#include "route_forge/instance_io.hpp"

namespace route_forge::bench {

namespace {

using pipeline::Strategy;

constexpr Strategy kColumns[] = {Strategy::Monolithic, Strategy::Dbscan, Strategy::RecursiveDbscan};
constexpr const char* kHeader =
    "wps,runtime_monolithic,runtime_dbscan,runtime_recursive,"
    "distance_monolithic,distance_dbscan,distance_recursive,"
    "cars_monolithic,cars_dbscan,cars_recursive";

std::size_t column_of(Strategy s) {
  for (std::size_t k = 0; k < 3; ++k) {
    if (kColumns[k] == s) return k;
  }
  return 0;
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_number(const std::string& field, std::size_t line_no) {
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (field.empty() || end != field.c_str() + field.size()) {
    throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) + ": bad number '" + field + "'");
  }
  return v;
}

BenchRecord run_cell_strategy(const BenchConfig& config, const ProblemInstance& instance,
                              std::size_t n, std::size_t rep, Strategy strategy) {
  BenchRecord rec;
  rec.n_waypoints = n;
  rec.strategy = strategy;
  rec.repetition = rep;
  rec.seed = cell_seed(config.base_seed, n, rep);

  if (estimate_memory_bytes(n, strategy, config.cluster) > config.memory_budget_bytes) {
    rec.status = RecordStatus::CrashedBudget;
    return rec;
  }
  auto params = config.solver;
  if (strategy == Strategy::Monolithic && config.monolithic_time_scale != 1.0) {
    params.time_limit_ms = std::max<std::int64_t>(
        1, std::llround(static_cast<double>(params.time_limit_ms) * config.monolithic_time_scale));
  }
  auto result = pipeline::run_strategy(instance, strategy, config.cluster, params);
  rec.runtime_s = result.wall_time_ms / 1000.0;
  if (result.status != pipeline::Status::Ok) {
    rec.status = RecordStatus::NoSolution;
    return rec;
  }
  if (config.time_budget_s > 0.0 && rec.runtime_s > config.time_budget_s) {
    rec.status = RecordStatus::CrashedBudget;
    return rec;
  }
  rec.distance_m = result.total_distance;
  rec.busy_vehicles = result.busy_vehicle_count;
  if (config.keep_plans) rec.plan = std::move(result.plan);
  return rec;
}

}  // namespace

std::string_view to_string(RecordStatus s) {
  switch (s) {
    case RecordStatus::Ok: return "OK";
    case RecordStatus::NoSolution: return "NO_SOLUTION";
    case RecordStatus::CrashedBudget: return "CRASHED_BUDGET";
  }
  return "UNKNOWN";
}

BenchConfig full_grid() {
  BenchConfig config;
  config.sizes.clear();
  for (std::size_t n = 500; n <= 5000; n += 500) config.sizes.push_back(n);
  config.repetitions = 15;
  return config;
}

std::uint64_t cell_seed(std::uint64_t base_seed, std::size_t n, std::size_t repetition) {
  // splitmix64 over the packed cell coordinates
  std::uint64_t z = base_seed * 0x9E3779B97F4A7C15ULL + (static_cast<std::uint64_t>(n) << 20) +
                    static_cast<std::uint64_t>(repetition);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ProblemInstance cell_instance(const BenchConfig& config, std::size_t n, std::size_t repetition) {
  GeneratorConfig gen = config.generator;
  gen.n_waypoints = n;
  gen.seed = cell_seed(config.base_seed, n, repetition);
  return generate_instance(gen);
}

std::size_t estimate_memory_bytes(std::size_t n, Strategy strategy,
                                  const clusterer::ClusterConfig& cluster) {
  const std::size_t largest =
      strategy == Strategy::Monolithic ? n : std::min(n, cluster.max_cluster_size);
  return sizeof(double) * (largest + 1) * (largest + 1) + 512 * n;
}

std::size_t worker_count(const BenchConfig& config) {
  if (config.threads > 0) return config.threads;
  if (const char* env = std::getenv("ROUTE_FORGE_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return 1;
}

std::vector<BenchRecord> run_benchmark(const BenchConfig& config, const ProgressFn& progress) {
  struct Cell {
    std::size_t n, rep;
  };
  std::vector<Cell> cells;
  for (const auto n : config.sizes) {
    for (std::size_t r = 0; r < config.repetitions; ++r) cells.push_back({n, r});
  }
  const auto per_cell = config.strategies.size();
  std::vector<BenchRecord> records(cells.size() * per_cell);

  std::atomic<std::size_t> next{0};
  std::mutex progress_mutex;
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    while (true) {
      const auto c = next.fetch_add(1);
      if (c >= cells.size()) return;
      try {
        const auto instance = cell_instance(config, cells[c].n, cells[c].rep);
        for (std::size_t s = 0; s < per_cell; ++s) {
          auto rec = run_cell_strategy(config, instance, cells[c].n, cells[c].rep,
                                       config.strategies[s]);
          if (progress) {
            std::lock_guard lock(progress_mutex);
            progress(rec);
          }
          records[c * per_cell + s] = std::move(rec);
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  const auto workers = std::min(worker_count(config), std::max<std::size_t>(cells.size(), 1));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return records;
}

std::vector<std::string> verify_records(const BenchConfig& config,
                                        const std::vector<BenchRecord>& records) {
  std::vector<std::string> problems;
  for (const auto& rec : records) {
    if (rec.status != RecordStatus::Ok || !rec.plan) continue;
    const auto instance = cell_instance(config, rec.n_waypoints, rec.repetition);
    const std::string where = "n=" + std::to_string(rec.n_waypoints) + " rep=" +
                              std::to_string(rec.repetition) + " " +
                              std::string(pipeline::to_string(rec.strategy));
    const auto violations = validate_solution(*rec.plan, instance);
    if (!violations.empty()) {
      problems.push_back(where + ": " + describe(violations.front()));
    }
    const auto distance = evaluate_objective(*rec.plan, instance);
    if (std::abs(distance - rec.distance_m) > 1e-6) {
      problems.push_back(where + ": recorded distance " + std::to_string(rec.distance_m) +
                         " != recomputed " + std::to_string(distance));
    }
    if (busy_vehicle_count(*rec.plan) != rec.busy_vehicles) {
      problems.push_back(where + ": busy vehicle count mismatch");
    }
  }
  return problems;
}

std::string to_csv(const std::vector<BenchRecord>& records) {
  struct Row {
    const BenchRecord* by_col[3] = {nullptr, nullptr, nullptr};
  };
  std::map<std::pair<std::size_t, std::size_t>, Row> rows;
  for (const auto& rec : records) {
    auto& row = rows[{rec.n_waypoints, rec.repetition}];
    if (rec.status == RecordStatus::Ok) row.by_col[column_of(rec.strategy)] = &rec;
  }

  std::ostringstream out;
  out << kHeader << "\n";
  char buf[64];
  for (const auto& [key, row] : rows) {
    out << key.first;
    for (const auto* rec : row.by_col) {
      if (rec) {
        std::snprintf(buf, sizeof buf, "%.3f", rec->runtime_s);
        out << "," << buf;
      } else {
        out << ",-";
      }
    }
    for (const auto* rec : row.by_col) {
      if (rec) {
        out << "," << std::llround(rec->distance_m);
      } else {
        out << ",-";
      }
    }
    for (const auto* rec : row.by_col) {
      if (rec) {
        out << "," << rec->busy_vehicles;
      } else {
        out << ",-";
      }
    }
    out << "\n";
  }
  return out.str();
}

void export_csv(const std::vector<BenchRecord>& records, const std::filesystem::path& path) {
  io::write_text(path, to_csv(records));
}

std::vector<BenchRecord> parse_csv(std::string_view text) {
  std::vector<BenchRecord> out;
  std::map<std::size_t, std::size_t> reps_seen;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != kHeader) throw Error(ErrorCode::Parse, "unexpected CSV header");
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != 10) {
      throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) + ": expected 10 fields");
    }
    const auto n = static_cast<std::size_t>(parse_number(fields[0], line_no));
    const auto rep = reps_seen[n]++;
    for (std::size_t k = 0; k < 3; ++k) {
      const auto& rt = fields[1 + k];
      const auto& dist = fields[4 + k];
      const auto& cars = fields[7 + k];
      if (rt == "-" || dist == "-" || cars == "-") continue;
      BenchRecord rec;
      rec.n_waypoints = n;
      rec.strategy = kColumns[k];
      rec.repetition = rep;
      rec.runtime_s = parse_number(rt, line_no);
      rec.distance_m = parse_number(dist, line_no);
      rec.busy_vehicles = static_cast<std::size_t>(parse_number(cars, line_no));
      rec.status = RecordStatus::Ok;
      out.push_back(rec);
    }
  }
  return out;
}

std::vector<StrategySummary> summarize(const std::vector<BenchRecord>& records) {
  std::map<std::pair<std::size_t, std::size_t>, const BenchRecord*> mono;
  for (const auto& rec : records) {
    if (rec.status == RecordStatus::Ok && rec.strategy == Strategy::Monolithic) {
      mono[{rec.n_waypoints, rec.repetition}] = &rec;
    }
  }
  auto pct = [](double x, double base) { return base != 0.0 ? (x - base) / base * 100.0 : 0.0; };

  std::vector<StrategySummary> out;
  for (const auto strategy : kColumns) {
    StrategySummary s{strategy};
    for (const auto& rec : records) {
      if (rec.strategy != strategy || rec.status != RecordStatus::Ok) continue;
      ++s.ok_runs;
      s.mean_runtime_s += rec.runtime_s;
      s.mean_distance_m += rec.distance_m;
      s.mean_vehicles += static_cast<double>(rec.busy_vehicles);
      const auto it = mono.find({rec.n_waypoints, rec.repetition});
      if (it == mono.end()) continue;
      ++s.paired_runs;
      s.runtime_delta_pct += pct(rec.runtime_s, it->second->runtime_s);
      s.distance_delta_pct += pct(rec.distance_m, it->second->distance_m);
      s.vehicles_delta_pct += pct(static_cast<double>(rec.busy_vehicles),
                                  static_cast<double>(it->second->busy_vehicles));
    }
    if (s.ok_runs > 0) {
      const auto k = static_cast<double>(s.ok_runs);
      s.mean_runtime_s /= k;
      s.mean_distance_m /= k;
      s.mean_vehicles /= k;
    }
    if (s.paired_runs > 0) {
      const auto k = static_cast<double>(s.paired_runs);
      s.runtime_delta_pct /= k;
      s.distance_delta_pct /= k;
      s.vehicles_delta_pct /= k;
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace route_forge::bench
