#include "mcbap/construct.hpp"

#include <algorithm>
#include <stdexcept>

namespace mcbap {

long long feasible_position_count(const ScheduleState& st, int call) {
  return count_positions(st, call, /*respect_successor=*/false);
}

int most_constrained(const ScheduleState& st, const std::vector<long long>* counts) {
  const Instance& inst = st.inst();
  int best = -1;
  long long best_count = 0;
  for (std::size_t c = 0; c < inst.calls.size(); ++c) {
    if (st.scheduled(static_cast<int>(c))) continue;
    long long n = counts ? (*counts)[c] : feasible_position_count(st, static_cast<int>(c));
    if (best < 0) {
      best = static_cast<int>(c);
      best_count = n;
      continue;
    }
    const PortCall& a = inst.calls[c];
    const PortCall& b = inst.calls[best];
    bool better = n < best_count ||
                  (n == best_count &&
                   (a.est < b.est || (a.est == b.est && (a.ship < b.ship ||
                                                         (a.ship == b.ship && a.id < b.id)))));
    if (better) {
      best = static_cast<int>(c);
      best_count = n;
    }
  }
  if (best < 0) throw std::logic_error("most_constrained: nothing unscheduled");
  return best;
}

namespace {

// Cheapest adjacent-or-boundary placement under the deterministic tie rule;
// falls back to a full position scan if the adjacency set comes up empty.
PosCandidate pick_position(const ScheduleState& st, int call) {
  std::vector<PosCandidate> cands = adjacent_positions(st, call);
  const double ideal = st.inst().calls[call].ideal_position;
  PosCandidate best;
  for (const PosCandidate& c : cands)
    if (best.cost == kInf || candidate_less(c, best, ideal)) best = c;
  if (best.cost == kInf) {
    std::vector<PosCandidate> full = kbest_positions(st, call, 1);
    if (!full.empty()) best = full.front();
  }
  return best;
}

}  // namespace

std::vector<int> free_route_successors(ScheduleState& st, int call) {
  std::vector<int> freed;
  for (int s = st.inst().next_call(call); s >= 0; s = st.inst().next_call(s))
    if (st.scheduled(s)) {
      st.remove(s);
      freed.push_back(s);
    }
  return freed;
}

Solution construct(const Instance& inst, std::shared_ptr<const PlannerCache> cache) {
  ScheduleState st(inst, std::move(cache));
  const std::size_t n = inst.calls.size();
  std::vector<long long> counts(n, 0);
  std::vector<std::uint32_t> seen_port_ver(n, 0), seen_ship_ver(n, 0);
  std::vector<char> fresh(n, 0);
  std::size_t repairs = 0;

  while (st.n_scheduled() < static_cast<int>(n)) {
    for (std::size_t c = 0; c < n; ++c) {
      if (st.scheduled(static_cast<int>(c))) continue;
      const PortCall& pc = inst.calls[c];
      std::uint32_t pv = st.port_version(pc.port);
      std::uint32_t sv = st.ship_version(pc.ship);
      if (!fresh[c] || seen_port_ver[c] != pv || seen_ship_ver[c] != sv) {
        counts[c] = feasible_position_count(st, static_cast<int>(c));
        seen_port_ver[c] = pv;
        seen_ship_ver[c] = sv;
        fresh[c] = 1;
      }
    }
    int call = most_constrained(st, &counts);
    PosCandidate pos = pick_position(st, call);
    if (pos.cost == kInf) {
      // A successor placed earlier pins this call into an empty window. Free
      // the scheduled tail of the route; it is re-planned after this call.
      if (free_route_successors(st, call).empty() || ++repairs > 4 * n)
        throw std::logic_error("construct: no feasible placement for call " +
                               std::to_string(call));
      pos = pick_position(st, call);
      if (pos.cost == kInf)
        throw std::logic_error("construct: call " + std::to_string(call) +
                               " unplaceable even without successors");
    }
    st.place(call, pos.x, pos.t);
  }
  return st.solution();
}

}  // namespace mcbap
