#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <vector>

#include "mcbap/model.hpp"

namespace mcbap {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// One berth rectangle in a port's time-space diagram. call < 0 marks a fixed
// external berth.
struct Rect {
  double x = 0, len = 0, t = 0, dur = 0;
  int call = -1;
};

// Immutable per-instance lookup tables shared by every ScheduleState.
struct PlannerCache {
  explicit PlannerCache(const Instance& inst);
  // Per call: the port's berth-position grid ordered by (|x - ideal|, x),
  // as positions and as grid indices (position / segment).
  std::vector<std::vector<double>> x_by_deviation;
  std::vector<std::vector<int>> xi_by_deviation;
  // Per call: number of grid positions (the plain grid is i * segment).
  std::vector<int> n_positions;
};

// A (possibly partial) solution plus the per-port rectangle sets needed for
// fast geometric queries. Placements re-optimize the sailing speeds of the
// touched legs (slowest speed that still arrives on time). Overlap is NOT
// enforced here: local-search chains move rectangles through transient
// conflicts on purpose.
class ScheduleState {
 public:
  explicit ScheduleState(const Instance& inst,
                         std::shared_ptr<const PlannerCache> cache = nullptr);
  ScheduleState(const Instance& inst, const Solution& sol,
                std::shared_ptr<const PlannerCache> cache = nullptr);

  const Instance& inst() const { return *inst_; }
  const Solution& solution() const { return sol_; }
  const std::shared_ptr<const PlannerCache>& cache() const { return cache_; }

  bool scheduled(int call) const { return sol_.scheduled[call] != 0; }
  int n_scheduled() const { return n_scheduled_; }
  std::vector<int> unscheduled_calls() const;

  void place(int call, double x, double t);
  void remove(int call);

  const std::vector<Rect>& rects(int port) const { return rects_[port]; }
  // First time after which the port is completely free (max rectangle end).
  double free_after(int port) const;
  bool fits(int port, double x, double len, double t, double dur,
            int ignore_call = -1) const;
  // Optimized calls whose rectangles overlap this call's; sets *hits_external
  // when a fixed external berth is overlapped.
  std::vector<int> conflicts(int call, bool* hits_external = nullptr) const;

  double handling(int call, double x) const;
  // max(EST, fastest-speed arrival from the route predecessor), snapped up to
  // the berth-start grid. An unscheduled predecessor contributes its earliest
  // completable end (min_completable_end), so placements never strand it.
  double earliest_start(int call) const;
  // Minimum achievable handling end over the currently feasible placements of
  // `call`, following the chain of unscheduled predecessors; +inf if the call
  // cannot be placed at all right now.
  double min_completable_end(int call) const;
  // Latest handling end compatible with a scheduled successor (fastest leg
  // speed); +inf when the successor is unscheduled or absent.
  double latest_end(int call) const;
  bool speeds_feasible(int call, double x, double t) const;
  // Incremental objective of placing `call` at (x, t): handling, delay and
  // LFT penalty, plus waiting and fuel for each leg whose other endpoint is
  // already scheduled. Requires speeds_feasible(call, x, t).
  double placement_cost(int call, double x, double t) const;

  std::uint32_t port_version(int port) const { return port_version_[port]; }
  std::uint32_t ship_version(int ship) const { return ship_version_[ship]; }

 private:
  void init_rects();
  int slowest_feasible_speed(double depart, double dist, double arrive_by) const;
  void reoptimize_speeds_around(int call);

  const Instance* inst_;
  std::shared_ptr<const PlannerCache> cache_;
  Solution sol_;
  int n_scheduled_ = 0;
  std::vector<std::vector<Rect>> rects_;   // per port
  std::vector<int> rect_pos_;              // call -> index in its port's vector
  std::vector<std::uint32_t> port_version_;
  std::vector<std::uint32_t> ship_version_;
};

struct PosCandidate {
  double cost = kInf;
  double x = 0;
  double t = 0;
  double handling = 0;
};

// The k cheapest feasible placements for `call`, at most one per start time
// (each start time keeps its best berth position). Results sorted by
// (cost, t, |x - ideal|, x). Candidates costing >= cost_cap are not reported.
std::vector<PosCandidate> kbest_positions(const ScheduleState& st, int call, int k,
                                          double cost_cap = kInf);

// Feasible placements whose rectangle is adjacent to a scheduled rectangle or
// to a limit of the decision space (quay ends, earliest start, horizon).
std::vector<PosCandidate> adjacent_positions(const ScheduleState& st, int call);

// Number of (position, start) grid pairs that fit without overlap, respect
// EST and predecessor reachability, and finish by LFT. respect_successor
// additionally requires a feasible sailing leg to a scheduled successor.
long long count_positions(const ScheduleState& st, int call, bool respect_successor);

// Adjacency predicate used for asserting packing properties: the rectangle
// touches another rectangle or a boundary of the decision space within one
// grid step (grids do not always align with real-valued rectangle edges).
bool adjacent_or_boundary(const ScheduleState& st, int call, double x, double t);

// Cheapest candidate under the deterministic tie rule
// (cost, earlier start, smaller deviation, lower position).
bool candidate_less(const PosCandidate& a, const PosCandidate& b, double ideal);

}  // namespace mcbap
