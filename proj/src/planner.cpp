#include "mcbap/planner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mcbap {

namespace {

double snap_down(double v, double step) { return std::floor(v / step + 1e-9) * step; }
double snap_up(double v, double step) { return std::ceil(v / step - 1e-9) * step; }

}  // namespace

PlannerCache::PlannerCache(const Instance& inst) {
  x_by_deviation.resize(inst.calls.size());
  xi_by_deviation.resize(inst.calls.size());
  n_positions.resize(inst.calls.size());
  for (const PortCall& call : inst.calls) {
    const Port& port = inst.ports[call.port];
    const Ship& ship = inst.ships[call.ship];
    double seg = port.segment_length;
    int n = static_cast<int>(std::floor((port.quay_length - ship.length) / seg + 1e-9)) + 1;
    if (n < 1) n = 0; // ship longer than quay: no berth position at all
    n_positions[call.id] = n;
    std::vector<int>& xi = xi_by_deviation[call.id];
    xi.reserve(n);
    for (int i = 0; i < n; ++i) xi.push_back(i);
    std::sort(xi.begin(), xi.end(), [&](int a, int b) {
      double da = std::abs(a * seg - call.ideal_position);
      double db = std::abs(b * seg - call.ideal_position);
      if (da != db) return da < db;
      return a < b;
    });
    std::vector<double>& xs = x_by_deviation[call.id];
    xs.reserve(n);
    for (int i : xi) xs.push_back(i * seg);
  }
}

ScheduleState::ScheduleState(const Instance& inst, std::shared_ptr<const PlannerCache> cache)
    : inst_(&inst),
      cache_(cache ? std::move(cache) : std::make_shared<const PlannerCache>(inst)),
      sol_(inst.calls.size()),
      rect_pos_(inst.calls.size(), -1),
      port_version_(inst.ports.size(), 0),
      ship_version_(inst.ships.size(), 0) {
  init_rects();
}

ScheduleState::ScheduleState(const Instance& inst, const Solution& sol,
                             std::shared_ptr<const PlannerCache> cache)
    : inst_(&inst),
      cache_(cache ? std::move(cache) : std::make_shared<const PlannerCache>(inst)),
      sol_(inst.calls.size()),
      rect_pos_(inst.calls.size(), -1),
      port_version_(inst.ports.size(), 0),
      ship_version_(inst.ships.size(), 0) {
  init_rects();
  for (std::size_t c = 0; c < sol.scheduled.size(); ++c)
    if (sol.scheduled[c]) place(static_cast<int>(c), sol.assignments[c].position,
                                sol.assignments[c].start);
}

void ScheduleState::init_rects() {
  rects_.assign(inst_->ports.size(), {});
  for (const ExternalBerth& e : inst_->externals)
    rects_[e.port].push_back({e.position, e.length, e.start, e.duration, -1});
}

int ScheduleState::slowest_feasible_speed(double depart, double dist, double arrive_by) const {
  for (std::size_t s = 0; s < inst_->speeds.size(); ++s)
    if (depart + inst_->speeds[s].hours_per_nm * dist <= arrive_by + kGeomEps)
      return static_cast<int>(s);
  return -1;
}

void ScheduleState::reoptimize_speeds_around(int call) {
  int prev = inst_->prev_call(call);
  if (prev >= 0) {
    Assignment& pa = sol_.assignments[prev];
    if (sol_.scheduled[prev] && sol_.scheduled[call]) {
      double pend = pa.start + handling(prev, pa.position);
      int s = slowest_feasible_speed(pend, inst_->leg_distance(prev), sol_.assignments[call].start);
      if (s < 0) throw std::logic_error("place: no feasible speed on incoming leg");
      pa.leg_speed = s;
    } else {
      pa.leg_speed = -1;
    }
  }
  int next = inst_->next_call(call);
  Assignment& a = sol_.assignments[call];
  if (next >= 0) {
    if (sol_.scheduled[next] && sol_.scheduled[call]) {
      double end = a.start + handling(call, a.position);
      int s = slowest_feasible_speed(end, inst_->leg_distance(call), sol_.assignments[next].start);
      if (s < 0) throw std::logic_error("place: no feasible speed on outgoing leg");
      a.leg_speed = s;
    } else {
      a.leg_speed = -1;
    }
  }
}

void ScheduleState::place(int call, double x, double t) {
  if (sol_.scheduled[call]) throw std::logic_error("place: call already scheduled");
  const PortCall& c = inst_->calls[call];
  Assignment& a = sol_.assignments[call];
  a.position = x;
  a.start = t;
  a.leg_speed = -1;
  sol_.scheduled[call] = 1;
  ++n_scheduled_;
  double h = handling(call, x);
  rect_pos_[call] = static_cast<int>(rects_[c.port].size());
  rects_[c.port].push_back({x, inst_->ships[c.ship].length, t, h, call});
  reoptimize_speeds_around(call);
  ++port_version_[c.port];
  ++ship_version_[c.ship];
}

void ScheduleState::remove(int call) {
  if (!sol_.scheduled[call]) throw std::logic_error("remove: call not scheduled");
  const PortCall& c = inst_->calls[call];
  std::vector<Rect>& rv = rects_[c.port];
  int pos = rect_pos_[call];
  rv[pos] = rv.back();
  if (rv[pos].call >= 0) rect_pos_[rv[pos].call] = pos;
  rv.pop_back();
  rect_pos_[call] = -1;
  sol_.scheduled[call] = 0;
  sol_.assignments[call].leg_speed = -1;
  --n_scheduled_;
  int prev = inst_->prev_call(call);
  if (prev >= 0) sol_.assignments[prev].leg_speed = -1;
  ++port_version_[c.port];
  ++ship_version_[c.ship];
}

std::vector<int> ScheduleState::unscheduled_calls() const {
  std::vector<int> out;
  for (std::size_t c = 0; c < sol_.scheduled.size(); ++c)
    if (!sol_.scheduled[c]) out.push_back(static_cast<int>(c));
  return out;
}

double ScheduleState::free_after(int port) const {
  double end = 0;
  for (const Rect& r : rects_[port]) end = std::max(end, r.t + r.dur);
  return end;
}

bool ScheduleState::fits(int port, double x, double len, double t, double dur,
                         int ignore_call) const {
  for (const Rect& r : rects_[port]) {
    if (r.call == ignore_call && r.call >= 0) continue;
    if (rects_overlap(x, len, t, dur, r.x, r.len, r.t, r.dur)) return false;
  }
  return true;
}

std::vector<int> ScheduleState::conflicts(int call, bool* hits_external) const {
  const PortCall& c = inst_->calls[call];
  const Assignment& a = sol_.assignments[call];
  double len = inst_->ships[c.ship].length;
  double h = handling(call, a.position);
  std::vector<int> out;
  if (hits_external) *hits_external = false;
  for (const Rect& r : rects_[c.port]) {
    if (r.call == call) continue;
    if (rects_overlap(a.position, len, a.start, h, r.x, r.len, r.t, r.dur)) {
      if (r.call < 0) {
        if (hits_external) *hits_external = true;
      } else {
        out.push_back(r.call);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

double ScheduleState::handling(int call, double x) const {
  const PortCall& c = inst_->calls[call];
  return (1.0 + inst_->rates.deviation_factor * std::abs(x - c.ideal_position)) *
         c.base_handling;
}

double ScheduleState::earliest_start(int call) const {
  const PortCall& c = inst_->calls[call];
  double lo = c.est;
  int prev = inst_->prev_call(call);
  if (prev >= 0) {
    double pend;
    if (sol_.scheduled[prev]) {
      const Assignment& pa = sol_.assignments[prev];
      pend = pa.start + handling(prev, pa.position);
    } else {
      pend = min_completable_end(prev);
    }
    lo = std::max(lo, pend + inst_->speeds.back().hours_per_nm * inst_->leg_distance(prev));
  }
  return snap_up(lo, inst_->time_step);
}

double ScheduleState::min_completable_end(int call) const {
  const PortCall& c = inst_->calls[call];
  const Ship& ship = inst_->ships[c.ship];
  const double step = inst_->time_step;
  const double lo = earliest_start(call); // recurses up the unscheduled chain
  if (!(lo < kInf)) return kInf;
  const std::vector<double>& xs = cache_->x_by_deviation[call];
  const std::vector<Rect>& rects = rects_[c.port];
  // The time axis is open-ended: past the last occupied rectangle every
  // position fits, so the scan always terminates with a finite end.
  const double hard_stop =
      std::max({inst_->horizon, lo, snap_up(free_after(c.port), step)}) + step;
  double best = kInf;
  for (long long i = 0;; ++i) {
    double t = lo + static_cast<double>(i) * step;
    if (t >= best || t > hard_stop + kGeomEps) break; // ends only grow with t
    for (double x : xs) {
      double h = handling(call, x);
      if (t + h >= best) break; // deviation order: handling only grows
      bool free = true;
      for (const Rect& r : rects) {
        if (rects_overlap(x, ship.length, t, h, r.x, r.len, r.t, r.dur)) {
          free = false;
          break;
        }
      }
      if (free) {
        best = t + h;
        break;
      }
    }
  }
  return best;
}

double ScheduleState::latest_end(int call) const {
  int next = inst_->next_call(call);
  if (next < 0 || !sol_.scheduled[next]) return kInf;
  return sol_.assignments[next].start -
         inst_->speeds.back().hours_per_nm * inst_->leg_distance(call);
}

bool ScheduleState::speeds_feasible(int call, double x, double t) const {
  if (t < earliest_start(call) - kGeomEps) return false;
  double le = latest_end(call);
  if (le < kInf && t + handling(call, x) > le + kGeomEps) return false;
  return true;
}

double ScheduleState::placement_cost(int call, double x, double t) const {
  const PortCall& c = inst_->calls[call];
  const Ship& ship = inst_->ships[c.ship];
  const CostRates& r = inst_->rates;
  double h = handling(call, x);
  double end = t + h;
  double cost = r.handling_rate * h + r.delay_rate * std::max(0.0, end - c.eft) +
                r.lft_penalty_rate * std::max(0.0, end - c.lft);
  int prev = inst_->prev_call(call);
  if (prev >= 0 && sol_.scheduled[prev]) {
    const Assignment& pa = sol_.assignments[prev];
    double pend = pa.start + handling(prev, pa.position);
    double dist = inst_->leg_distance(prev);
    int s = slowest_feasible_speed(pend, dist, t);
    if (s < 0) return kInf;
    cost += r.waiting_rate * (t - (pend + inst_->speeds[s].hours_per_nm * dist)) +
            leg_fuel_cost(ship, inst_->speeds[s], dist, r);
  }
  int next = inst_->next_call(call);
  if (next >= 0 && sol_.scheduled[next]) {
    double dist = inst_->leg_distance(call);
    double y_next = sol_.assignments[next].start;
    int s = slowest_feasible_speed(end, dist, y_next);
    if (s < 0) return kInf;
    cost += r.waiting_rate * (y_next - (end + inst_->speeds[s].hours_per_nm * dist)) +
            leg_fuel_cost(ship, inst_->speeds[s], dist, r);
  }
  return cost;
}

bool candidate_less(const PosCandidate& a, const PosCandidate& b, double ideal) {
  if (a.cost != b.cost) return a.cost < b.cost;
  if (a.t != b.t) return a.t < b.t;
  double da = std::abs(a.x - ideal), db = std::abs(b.x - ideal);
  if (da != db) return da < db;
  return a.x < b.x;
}

namespace {

// Stamp-marked berth-grid indices blocked for a given start time, computed
// with the optimistic minimum handling (exact fit checks come after). The
// x-dimension test mirrors rects_overlap exactly, so a marked index is
// guaranteed blocked and a free index still gets an exact check.
struct XBlocker {
  std::vector<std::uint32_t> stamp;
  std::uint32_t cur = 0;
  int n = 0;

  void begin(int n_positions) {
    n = n_positions;
    if (static_cast<int>(stamp.size()) < n) stamp.assign(n, 0);
    if (++cur == 0) { // stamp wrap: wipe and restart
      std::fill(stamp.begin(), stamp.end(), 0);
      cur = 1;
    }
  }
  void mark(const Rect& r, double len, double seg) {
    int lo = static_cast<int>(std::floor((r.x - len + kGeomEps) / seg)) + 1;
    int hi = static_cast<int>(std::ceil((r.x + r.len - kGeomEps) / seg)) - 1;
    lo = std::max(lo, 0);
    hi = std::min(hi, n - 1);
    for (int i = lo; i <= hi; ++i) stamp[i] = cur;
  }
  bool blocked(int i) const { return stamp[i] == cur; }
};

thread_local XBlocker t_xblocker;
thread_local std::vector<const Rect*> t_band;

}  // namespace

std::vector<PosCandidate> kbest_positions(const ScheduleState& st, int call, int k,
                                          double cost_cap) {
  const Instance& inst = st.inst();
  const PortCall& c = inst.calls[call];
  const Ship& ship = inst.ships[c.ship];
  const Port& port = inst.ports[c.port];
  const CostRates& rates = inst.rates;
  const std::vector<double>& xs = st.cache()->x_by_deviation[call];
  const std::vector<int>& xi = st.cache()->xi_by_deviation[call];
  const double step = inst.time_step;
  const double seg = port.segment_length;
  const double h0 = c.base_handling;
  const double beta = rates.deviation_factor;

  std::vector<PosCandidate> best; // sorted by candidate_less, size <= k
  if (xs.empty() || k <= 0) return best;

  const double lo_t = st.earliest_start(call);
  if (!(lo_t < kInf)) return best; // a route predecessor cannot be completed
  const double le = st.latest_end(call);
  const double hi_t =
      std::max({inst.horizon, lo_t, snap_up(st.free_after(c.port), inst.time_step)});

  // Constant lower-bound pieces: minimum handling plus slowest-speed fuel on
  // legs to scheduled neighbors, plus the slowest-arrival waiting anchor.
  double fuel_lb = 0;
  double a_slow = -kInf;
  int prev = inst.prev_call(call);
  if (prev >= 0 && st.scheduled(prev)) {
    double dist = inst.leg_distance(prev);
    fuel_lb += leg_fuel_cost(ship, inst.speeds.front(), dist, rates);
    const Assignment& pa = st.solution().assignments[prev];
    a_slow = pa.start + st.handling(prev, pa.position) +
             inst.speeds.front().hours_per_nm * dist;
  }
  int next = inst.next_call(call);
  if (next >= 0 && st.scheduled(next))
    fuel_lb += leg_fuel_cost(ship, inst.speeds.front(), inst.leg_distance(call), rates);

  // Rectangles that can block any scanned start time.
  std::vector<const Rect*>& band = t_band;
  band.clear();
  for (const Rect& r : st.rects(c.port))
    if (r.t + r.dur > lo_t + kGeomEps) band.push_back(&r);
  XBlocker& blocker = t_xblocker;

  for (long long i = 0;; ++i) {
    double t = lo_t + static_cast<double>(i) * step;
    if (t > hi_t + kGeomEps) break;
    if (le < kInf && t + h0 > le + kGeomEps) break; // successor unreachable from here on
    double kth = best.size() == static_cast<std::size_t>(k) ? best.back().cost : cost_cap;
    double lb = rates.handling_rate * h0 + rates.delay_rate * std::max(0.0, t + h0 - c.eft) +
                rates.lft_penalty_rate * std::max(0.0, t + h0 - c.lft) + fuel_lb +
                (a_slow > -kInf ? rates.waiting_rate * std::max(0.0, t - a_slow) : 0.0);
    if (lb >= cost_cap) break;
    if (best.size() == static_cast<std::size_t>(k) && lb >= kth) break;

    blocker.begin(st.cache()->n_positions[call]);
    for (const Rect* r : band)
      if (r->t < t + h0 - kGeomEps && t < r->t + r->dur - kGeomEps)
        blocker.mark(*r, ship.length, seg);

    // Walk positions outward from the ideal one. The per-position lower bound
    // below is sound for the full placement cost and grows with the
    // deviation, so the walk can stop once it passes the best seen.
    PosCandidate best_t;
    for (std::size_t w = 0; w < xs.size(); ++w) {
      double x = xs[w];
      double dev = std::abs(x - c.ideal_position);
      double h = (1.0 + beta * dev) * h0;
      if (le < kInf && t + h > le + kGeomEps) break; // farther positions only longer
      double end = t + h;
      double xlb = rates.handling_rate * h + rates.delay_rate * std::max(0.0, end - c.eft) +
                   rates.lft_penalty_rate * std::max(0.0, end - c.lft) + fuel_lb +
                   (a_slow > -kInf ? rates.waiting_rate * std::max(0.0, t - a_slow) : 0.0);
      if (xlb >= std::min(kth, best_t.cost)) break;
      if (blocker.blocked(xi[w])) continue;
      if (!st.fits(c.port, x, ship.length, t, h)) continue;
      double cost = st.placement_cost(call, x, t);
      if (cost < best_t.cost) best_t = {cost, x, t, h};
    }
    if (best_t.cost < kth) {
      auto it = std::lower_bound(best.begin(), best.end(), best_t,
                                 [&](const PosCandidate& a, const PosCandidate& b) {
                                   return candidate_less(a, b, c.ideal_position);
                                 });
      best.insert(it, best_t);
      if (best.size() > static_cast<std::size_t>(k)) best.pop_back();
    }
  }
  return best;
}

long long count_positions(const ScheduleState& st, int call, bool respect_successor) {
  const Instance& inst = st.inst();
  const PortCall& c = inst.calls[call];
  const Ship& ship = inst.ships[c.ship];
  const Port& port = inst.ports[c.port];
  const double step = inst.time_step;
  const double lo_t = st.earliest_start(call);
  if (!(lo_t < kInf)) return 0;
  const double le = respect_successor ? st.latest_end(call) : kInf;
  const std::vector<double>& xs = st.cache()->x_by_deviation[call];

  // Longest possible handling bounds the time band that can matter here.
  double max_dev = std::max(c.ideal_position, port.quay_length - ship.length - c.ideal_position);
  double h_max = (1.0 + inst.rates.deviation_factor * std::max(0.0, max_dev)) * c.base_handling;
  double hi_all = std::min(c.lft, le) - c.base_handling;
  if (hi_all < lo_t - kGeomEps) return 0;
  std::vector<const Rect*>& band = t_band;
  band.clear();
  for (const Rect& r : st.rects(c.port))
    if (r.t + r.dur > lo_t + kGeomEps && r.t < hi_all + h_max - kGeomEps) band.push_back(&r);

  long long count = 0;
  thread_local std::vector<std::uint32_t> slot_stamp;
  thread_local std::uint32_t slot_cur = 0;
  for (double x : xs) {
    double h = st.handling(call, x);
    double hi_t = snap_down(std::min(c.lft, le) - h, step);
    if (hi_t < lo_t - kGeomEps) continue;
    long long n_slots = static_cast<long long>(std::llround((hi_t - lo_t) / step)) + 1;

    if (slot_stamp.size() < static_cast<std::size_t>(n_slots)) slot_stamp.assign(n_slots, 0);
    if (++slot_cur == 0) {
      std::fill(slot_stamp.begin(), slot_stamp.end(), 0);
      slot_cur = 1;
    }
    long long blocked_slots = 0;
    for (const Rect* r : band) {
      if (!(r->x < x + ship.length - kGeomEps && x < r->x + r->len - kGeomEps)) continue;
      // start index i is blocked iff lo_t + i*step lies in (r.t - h, r.end)
      long long i_lo = std::max(
          0LL, static_cast<long long>(std::ceil((r->t - h - lo_t) / step - 1e-9)));
      long long i_hi = std::min(n_slots - 1, static_cast<long long>(std::floor(
                                                 (r->t + r->dur - lo_t) / step + 1e-9)));
      while (i_lo <= i_hi && i_lo * step + lo_t <= r->t - h + kGeomEps) ++i_lo;
      while (i_hi >= i_lo && i_hi * step + lo_t >= r->t + r->dur - kGeomEps) --i_hi;
      for (long long i = i_lo; i <= i_hi; ++i) {
        if (slot_stamp[i] != slot_cur) {
          slot_stamp[i] = slot_cur;
          ++blocked_slots;
        }
      }
    }
    count += n_slots - blocked_slots;
  }
  return count;
}

std::vector<PosCandidate> adjacent_positions(const ScheduleState& st, int call) {
  const Instance& inst = st.inst();
  const PortCall& c = inst.calls[call];
  const Ship& ship = inst.ships[c.ship];
  const Port& port = inst.ports[c.port];
  const double step = inst.time_step;
  const double seg = port.segment_length;
  const double len = ship.length;
  const double lo_t = st.earliest_start(call);
  if (!(lo_t < kInf)) return {};
  const double le = st.latest_end(call);
  const double max_x = snap_down(port.quay_length - len, seg);
  if (max_x < -kGeomEps) return {};

  std::vector<std::pair<double, double>> raw; // (x, t) pairs before checks

  auto h_of = [&](double x) { return st.handling(call, x); };

  // Earliest possible start, for every berth position.
  const std::vector<double>& xs = st.cache()->x_by_deviation[call];
  for (double x : xs) raw.emplace_back(x, lo_t);

  // Quay-end columns: earliest start that actually fits, scanned upward.
  for (double x : {0.0, max_x}) {
    double h = h_of(x);
    for (long long i = 0;; ++i) {
      double t = lo_t + static_cast<double>(i) * step;
      if (t > inst.horizon + kGeomEps) break;
      if (st.fits(c.port, x, len, t, h)) {
        raw.emplace_back(x, t);
        break;
      }
    }
  }

  const std::vector<Rect>& rects = st.rects(c.port);
  for (const Rect& r : rects) {
    // Side contact: left edge at the neighbor's right edge (or mirrored),
    // snapped to the berth grid, any start sharing at least one time step.
    for (double x : {snap_up(r.x + r.len, seg), snap_down(r.x - len, seg)}) {
      if (x < -kGeomEps || x > max_x + kGeomEps) continue;
      double h = h_of(x);
      double t_first = std::max(lo_t, snap_up(r.t - h + step, step));
      double t_last = snap_down(r.t + r.dur - step, step);
      for (long long i = 0;; ++i) {
        double t = t_first + static_cast<double>(i) * step;
        if (t > t_last + kGeomEps) break;
        raw.emplace_back(x, t);
      }
    }
    // Vertical contact: start right after the neighbor ends, or finish right
    // before it starts, sharing at least one quay segment.
    double x_first = std::max(0.0, snap_up(r.x - len + seg, seg));
    double x_last = std::min(max_x, snap_down(r.x + r.len - seg, seg));
    for (long long i = 0;; ++i) {
      double x = x_first + static_cast<double>(i) * seg;
      if (x > x_last + kGeomEps) break;
      double h = h_of(x);
      double t_after = std::max(lo_t, snap_up(r.t + r.dur, step));
      raw.emplace_back(x, t_after);
      double t_before = snap_down(r.t - h, step);
      if (t_before >= lo_t - kGeomEps) raw.emplace_back(x, t_before);
    }
  }

  // Far edge of the decision space: past every occupied rectangle there is
  // always room, making this the placement of last resort.
  for (double x : xs) {
    double t = snap_up(std::max({inst.horizon - h_of(x), lo_t, st.free_after(c.port)}), step);
    raw.emplace_back(x, t);
    break;
  }

  std::sort(raw.begin(), raw.end());
  raw.erase(std::unique(raw.begin(), raw.end(),
                        [](const auto& a, const auto& b) {
                          return std::abs(a.first - b.first) < kGeomEps &&
                                 std::abs(a.second - b.second) < kGeomEps;
                        }),
            raw.end());

  std::vector<PosCandidate> out;
  for (const auto& [x, t] : raw) {
    if (x < -kGeomEps || x > max_x + kGeomEps || t < lo_t - kGeomEps) continue;
    double h = h_of(x);
    if (le < kInf && t + h > le + kGeomEps) continue;
    if (!st.fits(c.port, x, len, t, h)) continue;
    double cost = st.placement_cost(call, x, t);
    if (cost == kInf) continue;
    out.push_back({cost, x, t, h});
  }
  return out;
}

bool adjacent_or_boundary(const ScheduleState& st, int call, double x, double t) {
  const Instance& inst = st.inst();
  const PortCall& c = inst.calls[call];
  const Port& port = inst.ports[c.port];
  const Ship& ship = inst.ships[c.ship];
  const double seg = port.segment_length;
  const double step = inst.time_step;
  double h = st.handling(call, x);

  if (x < seg - kGeomEps) return true;                                   // left quay end
  if (x + ship.length > port.quay_length - seg + kGeomEps) return true;  // right quay end
  if (t <= st.earliest_start(call) + kGeomEps) return true;              // earliest start
  if (t + h >= inst.horizon - step + kGeomEps) return true;              // horizon end

  for (const Rect& r : st.rects(c.port)) {
    if (r.call == call) continue;
    bool x_overlap = r.x < x + ship.length - kGeomEps && x < r.x + r.len - kGeomEps;
    bool t_overlap = r.t < t + h - kGeomEps && t < r.t + r.dur - kGeomEps;
    bool side_touch = std::abs(x - (r.x + r.len)) < seg - kGeomEps ||
                      std::abs(r.x - (x + ship.length)) < seg - kGeomEps;
    bool vert_touch = std::abs(t - (r.t + r.dur)) < step - kGeomEps ||
                      std::abs(r.t - (t + h)) < step - kGeomEps;
    if (side_touch && t_overlap) return true;
    if (vert_touch && x_overlap) return true;
  }
  return false;
}

}  // namespace mcbap
