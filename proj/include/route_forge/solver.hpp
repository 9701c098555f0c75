#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "route_forge/error.hpp"
#include "route_forge/kernels.hpp"
#include "route_forge/model.hpp"

namespace route_forge::solver {

enum class FirstSolution { PathCheapestArc };

struct SolverParams {
  FirstSolution first_solution = FirstSolution::PathCheapestArc;
  double optimization_step = 1.0;  // meters
  std::int64_t solution_limit = std::numeric_limits<std::int64_t>::max();
  std::int64_t time_limit_ms = 5000;
  std::uint64_t rng_seed = 0;
};

/// Throws Error(InvalidArgument).
void check_params(const SolverParams& params);

/// Dense (N+1) x (N+1) distances over {depot} + waypoints, depot at index 0.
/// Entries (i, 0) are zero.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }
  std::span<double> raw() noexcept { return data_; }
  std::span<const double> raw() const noexcept { return data_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

DistanceMatrix build_matrix(const ProblemInstance& instance,
                            kernels::Execution exec = kernels::Execution::Parallel);

class UnassignedError : public Error {
 public:
  explicit UnassignedError(std::vector<int> ids);
  const std::vector<int>& ids() const noexcept { return ids_; }

 private:
  std::vector<int> ids_;
};

/// Greedy construction: each vehicle in id order repeatedly extends its route
/// from the last node to the nearest unvisited waypoint (lowest id on ties)
/// that keeps load and schedule feasible. Throws UnassignedError when the
/// fleet runs out first.
RoutePlan path_cheapest_arc(const ProblemInstance& instance, const DistanceMatrix& matrix);

enum class MoveKind { TwoOpt, RelocateIntra, RelocateInter, Swap };

struct AcceptedMove {
  MoveKind kind;
  double delta;       // change of the objective, negative
  double objective;   // running objective after the move
  std::int64_t index; // 1-based acceptance count
};

enum class StopReason { LocalOptimum, TimeLimit, SolutionLimit };

struct SearchStats {
  std::int64_t accepted = 0;
  std::int64_t sweeps = 0;
  StopReason reason = StopReason::LocalOptimum;
};

/// Called after every accepted move with the plan as it stands. Only
/// materialized when an observer is installed.
using MoveObserver = std::function<void(const AcceptedMove&, const RoutePlan&)>;

/// Best-improvement local search over 2-opt, intra-route relocate,
/// inter-route relocate and inter-route swap. A move is taken only if it keeps
/// the plan feasible and lowers the objective by at least optimization_step.
/// The input plan must be feasible.
RoutePlan local_search(const RoutePlan& plan, const ProblemInstance& instance,
                       const DistanceMatrix& matrix, const SolverParams& params,
                       const MoveObserver& observer = {}, SearchStats* stats = nullptr);

struct SolveResult {
  RoutePlan plan;
  std::vector<int> busy_vehicles;  // ascending ids
  SearchStats stats;
};

/// build_matrix, path_cheapest_arc, then local_search.
SolveResult solve_cvrptw(const ProblemInstance& instance, const SolverParams& params);

}  // namespace route_forge::solver
