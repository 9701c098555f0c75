#include "route_forge/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <string>

namespace route_forge::solver {

namespace {

using Clock = std::chrono::steady_clock;

// Accepted moves must beat optimization_step by this margin so the
// recomputed objective drop never falls short of the step through rounding.
constexpr double kStepGuard = 1e-7;

std::string join_ids(const std::vector<int>& ids) {
  std::string s;
  for (std::size_t k = 0; k < ids.size() && k < 20; ++k) {
    if (k) s += ",";
    s += std::to_string(ids[k]);
  }
  if (ids.size() > 20) s += ",...";
  return s;
}

/// Node attributes and the schedule recurrence, indexed by node (0 = depot).
class Schedule {
 public:
  Schedule(const ProblemInstance& instance, const DistanceMatrix& matrix)
      : matrix_(matrix), speed_(instance.travel.speed_mps) {
    const auto n = instance.waypoints.size();
    demand_.assign(n + 1, 0);
    early_.assign(n + 1, 0);
    late_.assign(n + 1, 0);
    service_.assign(n + 1, 0);
    for (const auto& w : instance.waypoints) {
      const auto i = static_cast<std::size_t>(w.id);
      demand_[i] = w.demand;
      early_[i] = w.window.earliest;
      late_[i] = w.window.latest;
      service_[i] = w.service_duration;
    }
    start_ = instance.depot.pickup_window.earliest;
  }

  double dist(int i, int j) const noexcept {
    return matrix_(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  }
  Seconds travel(int i, int j) const noexcept {
    return static_cast<Seconds>(std::llround(dist(i, j) / speed_));
  }
  int demand(int i) const noexcept { return demand_[static_cast<std::size_t>(i)]; }
  Seconds start() const noexcept { return start_; }

  /// Departure time from `node` when arriving at `arrival`, or -1 if the
  /// window is already closed.
  Seconds serve(int node, Seconds arrival) const noexcept {
    const auto i = static_cast<std::size_t>(node);
    const Seconds s = std::max(arrival, early_[i]);
    return s > late_[i] ? -1 : s + service_[i];
  }

  bool feasible(std::span<const int> seq) const noexcept {
    int prev = 0;
    Seconds clock = start_;
    for (const int node : seq) {
      clock = serve(node, clock + travel(prev, node));
      if (clock < 0) return false;
      prev = node;
    }
    return true;
  }

 private:
  const DistanceMatrix& matrix_;
  double speed_;
  std::vector<int> demand_;
  std::vector<Seconds> early_, late_, service_;
  Seconds start_ = 0;
};

class Search {
 public:
  Search(const ProblemInstance& instance, const DistanceMatrix& matrix, const SolverParams& params)
      : instance_(instance), sched_(instance, matrix), params_(params) {
    const auto n = instance.waypoints.size();
    route_of_.assign(n + 1, -1);
    pos_of_.assign(n + 1, 0);
  }

  void load(const RoutePlan& plan) {
    for (const auto& r : plan.routes) {
      Rt rt;
      rt.vehicle = r.vehicle_id;
      rt.capacity = instance_.vehicle(r.vehicle_id).capacity;
      for (const auto& s : r.stops) {
        rt.seq.push_back(s.waypoint_id);
        rt.load += sched_.demand(s.waypoint_id);
      }
      routes_.push_back(std::move(rt));
      reindex(routes_.size() - 1);
    }
    // Idle vehicles join as empty routes so relocate can open a new route.
    std::vector<char> used(instance_.vehicles.size() + 1, 0);
    for (const auto& r : routes_) used[static_cast<std::size_t>(r.vehicle)] = 1;
    for (const auto& v : instance_.vehicles) {
      if (used[static_cast<std::size_t>(v.id)]) continue;
      routes_.push_back({v.id, v.capacity, 0, {}});
    }
    objective_ = 0.0;
    for (const auto& r : routes_) objective_ += route_length(r.seq);
  }

  void run(Clock::time_point deadline, const MoveObserver& observer, SearchStats& stats) {
    std::mt19937_64 rng(params_.rng_seed);
    const auto n = instance_.waypoints.size();
    stats = {};
    if (n == 0) return;
    while (true) {
      ++stats.sweeps;
      bool improved = false;
      const auto offset = static_cast<std::size_t>(rng() % n);
      for (std::size_t k = 0; k < n; ++k) {
        const int u = static_cast<int>(1 + (offset + k) % n);
        if (route_of_[static_cast<std::size_t>(u)] < 0) continue;
        if (Clock::now() >= deadline) {
          stats.reason = StopReason::TimeLimit;
          return;
        }
        MoveKind kind;
        double delta = 0.0;
        if (!improve_node(u, kind, delta)) continue;
        improved = true;
        objective_ += delta;
        ++stats.accepted;
        if (observer) observer({kind, delta, objective_, stats.accepted}, materialize());
        if (stats.accepted >= params_.solution_limit) {
          stats.reason = StopReason::SolutionLimit;
          return;
        }
      }
      if (!improved) {
        stats.reason = StopReason::LocalOptimum;
        return;
      }
    }
  }

  RoutePlan materialize() const {
    RoutePlan plan;
    for (const auto& r : routes_) {
      if (r.seq.empty()) continue;
      plan.routes.push_back(propagate_schedule(r.vehicle, r.seq, instance_));
    }
    return plan;
  }

 private:
  struct Rt {
    int vehicle = 0;
    int capacity = 0;
    int load = 0;
    std::vector<int> seq;
  };

  struct Candidate {
    MoveKind kind = MoveKind::TwoOpt;
    double delta = 0.0;
    std::size_t route = 0;  // target route for relocate and swap
    std::size_t a = 0;      // 2-opt end, insertion index, or swap position
  };

  double d(int i, int j) const noexcept { return sched_.dist(i, j); }

  double route_length(const std::vector<int>& seq) const {
    double total = 0.0;
    int prev = 0;
    for (const int v : seq) {
      total += d(prev, v);
      prev = v;
    }
    return total;
  }

  void reindex(std::size_t r) {
    const auto& seq = routes_[r].seq;
    for (std::size_t k = 0; k < seq.size(); ++k) {
      route_of_[static_cast<std::size_t>(seq[k])] = static_cast<int>(r);
      pos_of_[static_cast<std::size_t>(seq[k])] = k;
    }
  }

  bool improve_node(int u, MoveKind& kind, double& delta_out) {
    const auto ra_idx = static_cast<std::size_t>(route_of_[static_cast<std::size_t>(u)]);
    const auto& ra = routes_[ra_idx].seq;
    const std::size_t i = pos_of_[static_cast<std::size_t>(u)];
    const std::size_t len = ra.size();
    const int p = i > 0 ? ra[i - 1] : 0;
    const int nx = i + 1 < len ? ra[i + 1] : -1;
    const double remove_gain = d(p, u) + (nx >= 0 ? d(u, nx) - d(p, nx) : 0.0);
    const int du = sched_.demand(u);

    Candidate best;
    best.delta = -params_.optimization_step - kStepGuard;
    bool found = false;

    // 2-opt: reverse ra[i..j].
    for (std::size_t j = i + 1; j < len; ++j) {
      const int a = ra[j];
      const int after = j + 1 < len ? ra[j + 1] : -1;
      const double delta = d(p, a) - d(p, u) + (after >= 0 ? d(u, after) - d(a, after) : 0.0);
      if (delta >= best.delta) continue;
      scratch_a_.assign(ra.begin(), ra.end());
      std::reverse(scratch_a_.begin() + static_cast<std::ptrdiff_t>(i),
                   scratch_a_.begin() + static_cast<std::ptrdiff_t>(j) + 1);
      if (!sched_.feasible(scratch_a_)) continue;
      best = {MoveKind::TwoOpt, delta, ra_idx, j};
      found = true;
    }

    // Intra-route relocate; k indexes the sequence with u removed.
    auto without = [&](std::size_t k) { return k < i ? ra[k] : ra[k + 1]; };
    for (std::size_t k = 0; k < len; ++k) {
      if (k == i) continue;
      const int prev = k == 0 ? 0 : without(k - 1);
      const int next = k + 1 < len ? without(k) : -1;
      const double add = d(prev, u) + (next >= 0 ? d(u, next) - d(prev, next) : 0.0);
      const double delta = add - remove_gain;
      if (delta >= best.delta) continue;
      scratch_a_.assign(ra.begin(), ra.end());
      scratch_a_.erase(scratch_a_.begin() + static_cast<std::ptrdiff_t>(i));
      scratch_a_.insert(scratch_a_.begin() + static_cast<std::ptrdiff_t>(k), u);
      if (!sched_.feasible(scratch_a_)) continue;
      best = {MoveKind::RelocateIntra, delta, ra_idx, k};
      found = true;
    }

    // Removing u from its route is checked lazily: travel-time rounding can
    // make the shortcut one second slower than the detour.
    int removal_ok = -1;
    auto removal_feasible = [&]() {
      if (removal_ok < 0) {
        scratch_a_.assign(ra.begin(), ra.end());
        scratch_a_.erase(scratch_a_.begin() + static_cast<std::ptrdiff_t>(i));
        removal_ok = sched_.feasible(scratch_a_) ? 1 : 0;
      }
      return removal_ok == 1;
    };

    const auto& rta = routes_[ra_idx];
    empty_caps_.clear();
    for (std::size_t rb_idx = 0; rb_idx < routes_.size(); ++rb_idx) {
      if (rb_idx == ra_idx) continue;
      const auto& rtb = routes_[rb_idx];
      const auto& rb = rtb.seq;
      const std::size_t lb = rb.size();
      if (lb == 0) {
        // Empty routes of equal capacity are interchangeable; try one.
        if (len == 1 ||
            std::find(empty_caps_.begin(), empty_caps_.end(), rtb.capacity) != empty_caps_.end()) {
          continue;
        }
        empty_caps_.push_back(rtb.capacity);
      }

      if (rtb.load + du <= rtb.capacity) {
        for (std::size_t k = 0; k <= lb; ++k) {
          const int prev = k == 0 ? 0 : rb[k - 1];
          const int next = k < lb ? rb[k] : -1;
          const double add = d(prev, u) + (next >= 0 ? d(u, next) - d(prev, next) : 0.0);
          const double delta = add - remove_gain;
          if (delta >= best.delta) continue;
          if (!removal_feasible()) continue;
          scratch_b_.assign(rb.begin(), rb.end());
          scratch_b_.insert(scratch_b_.begin() + static_cast<std::ptrdiff_t>(k), u);
          if (!sched_.feasible(scratch_b_)) continue;
          best = {MoveKind::RelocateInter, delta, rb_idx, k};
          found = true;
        }
      }

      for (std::size_t j = 0; j < lb; ++j) {
        const int v = rb[j];
        const int dv = sched_.demand(v);
        if (rta.load - du + dv > rta.capacity || rtb.load - dv + du > rtb.capacity) continue;
        const int pb = j > 0 ? rb[j - 1] : 0;
        const int nb = j + 1 < lb ? rb[j + 1] : -1;
        const double delta_a = d(p, v) - d(p, u) + (nx >= 0 ? d(v, nx) - d(u, nx) : 0.0);
        const double delta_b = d(pb, u) - d(pb, v) + (nb >= 0 ? d(u, nb) - d(v, nb) : 0.0);
        const double delta = delta_a + delta_b;
        if (delta >= best.delta) continue;
        scratch_a_.assign(ra.begin(), ra.end());
        scratch_a_[i] = v;
        if (!sched_.feasible(scratch_a_)) continue;
        scratch_b_.assign(rb.begin(), rb.end());
        scratch_b_[j] = u;
        if (!sched_.feasible(scratch_b_)) continue;
        best = {MoveKind::Swap, delta, rb_idx, j};
        found = true;
      }
    }

    if (!found) return false;
    apply(u, ra_idx, i, best);
    kind = best.kind;
    delta_out = best.delta;
    return true;
  }

  void apply(int u, std::size_t ra_idx, std::size_t i, const Candidate& c) {
    auto& a = routes_[ra_idx];
    switch (c.kind) {
      case MoveKind::TwoOpt:
        std::reverse(a.seq.begin() + static_cast<std::ptrdiff_t>(i),
                     a.seq.begin() + static_cast<std::ptrdiff_t>(c.a) + 1);
        reindex(ra_idx);
        break;
      case MoveKind::RelocateIntra:
        a.seq.erase(a.seq.begin() + static_cast<std::ptrdiff_t>(i));
        a.seq.insert(a.seq.begin() + static_cast<std::ptrdiff_t>(c.a), u);
        reindex(ra_idx);
        break;
      case MoveKind::RelocateInter: {
        auto& b = routes_[c.route];
        a.seq.erase(a.seq.begin() + static_cast<std::ptrdiff_t>(i));
        b.seq.insert(b.seq.begin() + static_cast<std::ptrdiff_t>(c.a), u);
        a.load -= sched_.demand(u);
        b.load += sched_.demand(u);
        reindex(ra_idx);
        reindex(c.route);
        break;
      }
      case MoveKind::Swap: {
        auto& b = routes_[c.route];
        const int v = b.seq[c.a];
        a.seq[i] = v;
        b.seq[c.a] = u;
        a.load += sched_.demand(v) - sched_.demand(u);
        b.load += sched_.demand(u) - sched_.demand(v);
        reindex(ra_idx);
        reindex(c.route);
        break;
      }
    }
  }

  const ProblemInstance& instance_;
  Schedule sched_;
  const SolverParams& params_;
  std::vector<Rt> routes_;
  std::vector<int> route_of_;
  std::vector<std::size_t> pos_of_;
  std::vector<int> scratch_a_, scratch_b_;
  std::vector<int> empty_caps_;
  double objective_ = 0.0;
};

}  // namespace

void check_params(const SolverParams& params) {
  if (params.time_limit_ms <= 0) throw Error(ErrorCode::InvalidArgument, "time_limit_ms must be positive");
  if (!(params.optimization_step > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "optimization_step must be positive");
  }
  if (params.solution_limit <= 0) throw Error(ErrorCode::InvalidArgument, "solution_limit must be positive");
}

DistanceMatrix build_matrix(const ProblemInstance& instance, kernels::Execution exec) {
  std::vector<geo::GeoPoint> nodes;
  nodes.reserve(instance.waypoints.size() + 1);
  nodes.push_back(instance.depot.pos);
  for (const auto& w : instance.waypoints) nodes.push_back(w.pos);
  DistanceMatrix m(nodes.size());
  kernels::fill_distance_matrix(nodes, m.raw(), exec);
  return m;
}

UnassignedError::UnassignedError(std::vector<int> ids)
    : Error(ErrorCode::UnassignedWaypoints,
            std::to_string(ids.size()) + " waypoint(s) left unserved: " + join_ids(ids)),
      ids_(std::move(ids)) {}

RoutePlan path_cheapest_arc(const ProblemInstance& instance, const DistanceMatrix& matrix) {
  const Schedule sched(instance, matrix);
  const auto n = instance.waypoints.size();
  std::vector<char> visited(n + 1, 0);
  std::size_t remaining = n;
  int idle_capacity = 0;  // a vehicle this large already found nothing to take
  RoutePlan plan;

  for (const auto& vehicle : instance.vehicles) {
    if (remaining == 0) break;
    if (vehicle.capacity <= idle_capacity) continue;
    Route route;
    route.vehicle_id = vehicle.id;
    route.depot_pickup_time = sched.start();
    int last = 0;
    int load = 0;
    Seconds clock = sched.start();
    while (remaining > 0) {
      int best = -1;
      double best_d = 0.0;
      Seconds best_arrival = 0;
      Seconds best_departure = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (visited[j]) continue;
        const int node = static_cast<int>(j);
        if (load + sched.demand(node) > vehicle.capacity) continue;
        const double dj = sched.dist(last, node);
        if (best >= 0 && dj >= best_d) continue;
        const Seconds arrival = clock + sched.travel(last, node);
        const Seconds departure = sched.serve(node, arrival);
        if (departure < 0) continue;
        best = node;
        best_d = dj;
        best_arrival = arrival;
        best_departure = departure;
      }
      if (best < 0) break;
      visited[static_cast<std::size_t>(best)] = 1;
      --remaining;
      load += sched.demand(best);
      clock = best_departure;
      last = best;
      route.stops.push_back({best, best_arrival, best_departure});
    }
    if (route.stops.empty()) {
      idle_capacity = std::max(idle_capacity, vehicle.capacity);
    } else {
      plan.routes.push_back(std::move(route));
    }
  }

  if (remaining > 0) {
    std::vector<int> ids;
    for (std::size_t j = 1; j <= n; ++j) {
      if (!visited[j]) ids.push_back(static_cast<int>(j));
    }
    throw UnassignedError(std::move(ids));
  }
  return plan;
}

RoutePlan local_search(const RoutePlan& plan, const ProblemInstance& instance,
                       const DistanceMatrix& matrix, const SolverParams& params,
                       const MoveObserver& observer, SearchStats* stats) {
  check_params(params);
  const auto deadline = Clock::now() + std::chrono::milliseconds(params.time_limit_ms);
  Search search(instance, matrix, params);
  search.load(plan);
  SearchStats local;
  search.run(deadline, observer, local);
  if (stats) *stats = local;
  return search.materialize();
}

SolveResult solve_cvrptw(const ProblemInstance& instance, const SolverParams& params) {
  check_params(params);
  SolveResult result;
  if (instance.waypoints.empty()) return result;
  const auto matrix = build_matrix(instance);
  const auto initial = path_cheapest_arc(instance, matrix);
  result.plan = local_search(initial, instance, matrix, params, {}, &result.stats);
  for (const auto& r : result.plan.routes) {
    if (!r.stops.empty()) result.busy_vehicles.push_back(r.vehicle_id);
  }
  std::sort(result.busy_vehicles.begin(), result.busy_vehicles.end());
  return result;
}

}  // namespace route_forge::solver
