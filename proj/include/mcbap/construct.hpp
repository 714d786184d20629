#pragma once

#include <memory>
#include <vector>

#include "mcbap/planner.hpp"

namespace mcbap {

// Feasible (position, start-hour) pairs for an unscheduled call, counting
// starts that respect EST and predecessor reachability and finish by LFT.
long long feasible_position_count(const ScheduleState& st, int call);

// The unscheduled call with the fewest feasible positions; ties broken by
// earliest EST, then lowest ship id, then call id. `counts` may pass
// precomputed values (indexed by call id) to avoid recounting.
int most_constrained(const ScheduleState& st, const std::vector<long long>* counts = nullptr);

// Greedy most-constrained-first construction. Places every call at the
// cheapest position adjacent to a scheduled rectangle or to the limits of the
// decision space; deterministic, always returns a complete feasible solution.
Solution construct(const Instance& inst, std::shared_ptr<const PlannerCache> cache = nullptr);

// Unschedules every scheduled call later in the route; returns them in route
// order. Used when a stranded call needs its window reopened.
std::vector<int> free_route_successors(ScheduleState& st, int call);

}  // namespace mcbap
