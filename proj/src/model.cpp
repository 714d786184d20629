#include "mcbap/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mcbap {

const char* ship_class_name(ShipClass c) {
  switch (c) {
    case ShipClass::Feeder: return "feeder";
    case ShipClass::Medium: return "medium";
    case ShipClass::Large: return "large";
  }
  return "?";
}

ShipClass ship_class_from_name(const std::string& name) {
  if (name == "feeder") return ShipClass::Feeder;
  if (name == "medium") return ShipClass::Medium;
  if (name == "large") return ShipClass::Large;
  throw std::invalid_argument("unknown ship class: " + name);
}

int Instance::prev_call(int call_id) const {
  const PortCall& c = calls.at(call_id);
  const Ship& s = ships.at(c.ship);
  return c.call_index > 1 ? s.calls[c.call_index - 2] : -1;
}

int Instance::next_call(int call_id) const {
  const PortCall& c = calls.at(call_id);
  const Ship& s = ships.at(c.ship);
  return c.call_index < static_cast<int>(s.calls.size()) ? s.calls[c.call_index] : -1;
}

double Instance::leg_distance(int call_id) const {
  int nxt = next_call(call_id);
  if (nxt < 0) return 0;
  return distance_nm[calls[call_id].port][calls[nxt].port];
}

void validate_instance(const Instance& inst) {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("instance: " + msg); };
  if (inst.ports.empty()) fail("no ports");
  for (const Port& p : inst.ports) {
    if (!(p.quay_length > 0)) fail("port " + p.code + ": quay_length must be > 0");
    if (!(p.segment_length > 0)) fail("port " + p.code + ": segment_length must be > 0");
    if (p.segment_length > p.quay_length) fail("port " + p.code + ": segment longer than quay");
  }
  if (inst.speeds.empty()) fail("needs at least one speed level");
  for (std::size_t i = 0; i < inst.speeds.size(); ++i) {
    const SpeedLevel& s = inst.speeds[i];
    if (!(s.knots > 0)) fail("speed level with non-positive knots");
    if (std::abs(s.hours_per_nm - 1.0 / s.knots) > 1e-9) fail("hours_per_nm must equal 1/knots");
    if (i > 0) {
      if (!(s.knots > inst.speeds[i - 1].knots)) fail("speed levels must increase");
      for (int k = 0; k < 3; ++k)
        if (!(s.fuel_per_nm[k] > inst.speeds[i - 1].fuel_per_nm[k]))
          fail("fuel_per_nm must increase with speed");
    }
  }
  if (inst.distance_nm.size() != inst.ports.size()) fail("distance matrix size");
  for (std::size_t a = 0; a < inst.ports.size(); ++a) {
    if (inst.distance_nm[a].size() != inst.ports.size()) fail("distance matrix row size");
    for (std::size_t b = 0; b < inst.ports.size(); ++b) {
      if (std::abs(inst.distance_nm[a][b] - inst.distance_nm[b][a]) > 1e-9)
        fail("distance matrix must be symmetric");
      if (a != b && !(inst.distance_nm[a][b] > 0)) fail("off-diagonal distance must be > 0");
    }
  }
  const CostRates& r = inst.rates;
  if (r.fuel_price < 0 || r.handling_rate < 0 || r.delay_rate < 0 || r.waiting_rate < 0 ||
      r.lft_penalty_rate < 0 || r.deviation_factor < 0)
    fail("cost rates must be >= 0");
  if (!(inst.time_step > 0)) fail("time_step must be > 0");
  if (!(inst.horizon >= 1)) fail("horizon must be >= 1");

  std::vector<int> seen(inst.calls.size(), 0);
  for (const Ship& s : inst.ships) {
    if (!(s.length > 0)) fail("ship length must be > 0");
    if (s.calls.empty()) fail("ship route must be non-empty");
    if (!(s.design_speed > 0) || !(s.design_fuel_rate > 0)) fail("ship design parameters must be > 0");
    int prev_port = -1;
    for (std::size_t k = 0; k < s.calls.size(); ++k) {
      int cid = s.calls[k];
      if (cid < 0 || cid >= static_cast<int>(inst.calls.size())) fail("route references unknown call");
      seen[cid]++;
      const PortCall& c = inst.calls[cid];
      if (c.ship != s.id) fail("call/ship back-reference mismatch");
      if (c.call_index != static_cast<int>(k) + 1) fail("call_index must match route order");
      if (c.port < 0 || c.port >= static_cast<int>(inst.ports.size())) fail("call references unknown port");
      if (c.port == prev_port) fail("consecutive route ports must differ");
      prev_port = c.port;
      const Port& p = inst.ports[c.port];
      if (c.ideal_position < -kGeomEps || c.ideal_position > p.quay_length - s.length + kGeomEps)
        fail("ideal_position outside quay");
      if (c.est < 0) fail("est must be >= 0");
      if (std::abs(c.eft - (c.est + c.base_handling)) > 1e-6) fail("eft must equal est + base_handling");
      if (c.lft < c.eft - 1e-9) fail("lft must be >= eft");
    }
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (seen[i] != 1) fail("call " + std::to_string(i) + " must appear in exactly one route");
  for (const ExternalBerth& e : inst.externals) {
    if (e.port < 0 || e.port >= static_cast<int>(inst.ports.size())) fail("external berth port");
    if (!(e.duration > 0)) fail("external berth duration must be > 0");
    if (e.start < 0) fail("external berth start must be >= 0");
    if (e.position < -kGeomEps || e.position + e.length > inst.ports[e.port].quay_length + kGeomEps)
      fail("external berth outside quay");
  }
}

bool Solution::complete() const {
  return std::all_of(scheduled.begin(), scheduled.end(), [](std::uint8_t s) { return s != 0; });
}

std::vector<int> Solution::missing_calls() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < scheduled.size(); ++i)
    if (!scheduled[i]) out.push_back(static_cast<int>(i));
  return out;
}

double handling_time(const Instance& inst, const PortCall& call, double position) {
  const Ship& ship = inst.ships[call.ship];
  const Port& port = inst.ports[call.port];
  if (position < -kGeomEps || position + ship.length > port.quay_length + kGeomEps)
    throw std::domain_error("berth position outside quay");
  double dev = std::abs(position - call.ideal_position);
  return (1.0 + inst.rates.deviation_factor * dev) * call.base_handling;
}

double leg_fuel_cost(const Ship& ship, const SpeedLevel& speed, double distance_nm,
                     const CostRates& rates) {
  double ratio = speed.knots / ship.design_speed;
  return rates.fuel_price * ratio * ratio * ratio * ship.design_fuel_rate * distance_nm;
}

double arrival_time(const Instance& inst, const PortCall& prev_call,
                    const Assignment& prev, double distance_nm) {
  if (distance_nm > 0 && prev.leg_speed < 0)
    throw std::logic_error("arrival_time: leg speed unset on a non-final call");
  double h = handling_time(inst, prev_call, prev.position);
  double travel = distance_nm > 0 ? inst.speeds[prev.leg_speed].hours_per_nm * distance_nm : 0.0;
  return prev.start + h + travel;
}

CostBreakdown evaluate(const Instance& inst, const Solution& sol) {
  if (sol.assignments.size() != inst.calls.size())
    throw std::invalid_argument("evaluate: solution sized for a different instance");
  if (!sol.complete()) {
    std::ostringstream os;
    os << "evaluate: incomplete solution, missing calls:";
    for (int c : sol.missing_calls()) os << ' ' << c;
    throw std::invalid_argument(os.str());
  }
  CostBreakdown b;
  const CostRates& r = inst.rates;
  for (const Ship& ship : inst.ships) {
    for (std::size_t k = 0; k < ship.calls.size(); ++k) {
      int cid = ship.calls[k];
      const PortCall& call = inst.calls[cid];
      const Assignment& a = sol.assignments[cid];
      double h = handling_time(inst, call, a.position);
      double end = a.start + h;
      b.handling += r.handling_rate * h;
      b.delay += r.delay_rate * std::max(0.0, end - call.eft);
      b.lft_penalty += r.lft_penalty_rate * std::max(0.0, end - call.lft);
      if (k > 0) {
        int pid = ship.calls[k - 1];
        double arr = arrival_time(inst, inst.calls[pid], sol.assignments[pid],
                                  inst.leg_distance(pid));
        b.waiting += r.waiting_rate * (a.start - arr);
      }
      if (k + 1 < ship.calls.size()) {
        if (a.leg_speed < 0)
          throw std::invalid_argument("evaluate: call " + std::to_string(cid) +
                                      " has no speed for its sailing leg");
        b.fuel += leg_fuel_cost(ship, inst.speeds[a.leg_speed], inst.leg_distance(cid), r);
      }
    }
  }
  b.total = b.waiting + b.handling + b.delay + b.lft_penalty + b.fuel;
  return b;
}

bool rects_overlap(double x1, double l1, double t1, double d1,
                   double x2, double l2, double t2, double d2) {
  return x1 < x2 + l2 - kGeomEps && x2 < x1 + l1 - kGeomEps &&
         t1 < t2 + d2 - kGeomEps && t2 < t1 + d1 - kGeomEps;
}

std::vector<Violation> check_feasibility(const Instance& inst, const Solution& sol) {
  std::vector<Violation> out;
  if (sol.assignments.size() != inst.calls.size()) {
    out.push_back({ViolationKind::Incomplete, -1, -1, "solution sized for a different instance"});
    return out;
  }
  for (int c : sol.missing_calls())
    out.push_back({ViolationKind::Incomplete, c, -1, "call not scheduled"});
  if (!out.empty()) return out;

  struct R { double x, l, t, d; int call; };
  std::vector<std::vector<R>> per_port(inst.ports.size());
  for (std::size_t k = 0; k < inst.externals.size(); ++k) {
    const ExternalBerth& e = inst.externals[k];
    per_port[e.port].push_back({e.position, e.length, e.start, e.duration,
                                -static_cast<int>(k) - 2});
  }
  for (const PortCall& call : inst.calls) {
    const Assignment& a = sol.assignments[call.id];
    const Ship& ship = inst.ships[call.ship];
    const Port& port = inst.ports[call.port];
    if (a.position < -kGeomEps || a.position + ship.length > port.quay_length + kGeomEps)
      out.push_back({ViolationKind::OutsideQuay, call.id, -1, ""});
    double h = (1.0 + inst.rates.deviation_factor * std::abs(a.position - call.ideal_position)) *
               call.base_handling;
    per_port[call.port].push_back({a.position, ship.length, a.start, h, call.id});
    if (a.start < call.est - kGeomEps)
      out.push_back({ViolationKind::StartBeforeEst, call.id, -1, ""});
    int prev = inst.prev_call(call.id);
    if (prev >= 0) {
      const Assignment& pa = sol.assignments[prev];
      if (pa.leg_speed < 0) {
        out.push_back({ViolationKind::MissingSpeed, prev, -1, "no speed on the leg to the next call"});
      } else {
        double arr = arrival_time(inst, inst.calls[prev], pa, inst.leg_distance(prev));
        if (a.start < arr - kGeomEps)
          out.push_back({ViolationKind::StartBeforeArrival, call.id, -1, ""});
      }
    }
  }
  for (const auto& rects : per_port) {
    for (std::size_t i = 0; i < rects.size(); ++i) {
      for (std::size_t j = i + 1; j < rects.size(); ++j) {
        const R& a = rects[i];
        const R& b = rects[j];
        if (a.call < 0 && b.call < 0) continue; // fixed input, not this solution's fault
        if (rects_overlap(a.x, a.l, a.t, a.d, b.x, b.l, b.t, b.d)) {
          int ca = a.call >= 0 ? a.call : b.call;
          int cb = a.call >= 0 ? b.call : a.call;
          out.push_back({ViolationKind::Overlap, ca, cb, ""});
        }
      }
    }
  }
  return out;
}

double port_visit_cost(const Instance& inst, const Solution& sol, int call_id) {
  const PortCall& call = inst.calls.at(call_id);
  const Ship& ship = inst.ships[call.ship];
  const Assignment& a = sol.assignments[call_id];
  const CostRates& r = inst.rates;
  double h = handling_time(inst, call, a.position);
  double end = a.start + h;
  double cost = r.handling_rate * h + r.delay_rate * std::max(0.0, end - call.eft);
  int prev = inst.prev_call(call_id);
  double fuel = 0;
  if (prev >= 0 && sol.scheduled[prev] && sol.assignments[prev].leg_speed >= 0) {
    const Assignment& pa = sol.assignments[prev];
    double arr = arrival_time(inst, inst.calls[prev], pa, inst.leg_distance(prev));
    cost += r.waiting_rate * (a.start - arr);
    fuel += leg_fuel_cost(ship, inst.speeds[pa.leg_speed], inst.leg_distance(prev), r);
  }
  int next = inst.next_call(call_id);
  if (next >= 0 && sol.scheduled[next] && a.leg_speed >= 0)
    fuel += leg_fuel_cost(ship, inst.speeds[a.leg_speed], inst.leg_distance(call_id), r);
  return cost + fuel / 2.0;
}

double gap(double z_obj, double z_best) {
  if (!(z_best > 0)) throw std::domain_error("gap: z_best must be > 0");
  return (z_obj - z_best) / z_best;
}

std::string violation_to_string(const Instance& inst, const Violation& v) {
  std::ostringstream os;
  auto call_str = [&](int id) {
    if (id >= 0) {
      const PortCall& c = inst.calls[id];
      os << "ship " << c.ship << " call " << c.call_index << " at " << inst.ports[c.port].code;
    } else if (id <= -2) {
      os << "external berth " << (-id - 2);
    }
  };
  switch (v.kind) {
    case ViolationKind::Incomplete: os << "unscheduled: "; call_str(v.call_a); break;
    case ViolationKind::OutsideQuay: os << "outside quay: "; call_str(v.call_a); break;
    case ViolationKind::Overlap:
      os << "overlap: "; call_str(v.call_a); os << " / "; call_str(v.call_b); break;
    case ViolationKind::StartBeforeArrival: os << "berths before arrival: "; call_str(v.call_a); break;
    case ViolationKind::StartBeforeEst: os << "berths before EST: "; call_str(v.call_a); break;
    case ViolationKind::MissingSpeed: os << "missing leg speed: "; call_str(v.call_a); break;
  }
  if (!v.detail.empty()) os << " (" << v.detail << ")";
  return os.str();
}

}  // namespace mcbap
