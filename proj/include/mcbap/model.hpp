#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace mcbap {

// Geometry tolerance for overlap / ordering tests on berth rectangles.
inline constexpr double kGeomEps = 1e-9;

enum class ShipClass : int { Feeder = 0, Medium = 1, Large = 2 };

const char* ship_class_name(ShipClass c);
ShipClass ship_class_from_name(const std::string& name);

struct Port {
  std::string code;
  double quay_length = 0;    // meters
  double segment_length = 0; // meters, berth-position grid
};

struct SpeedLevel {
  double knots = 0;
  double hours_per_nm = 0;             // 1 / knots
  std::array<double, 3> fuel_per_nm{}; // tonnes per nm, indexed by ShipClass
};

struct Ship {
  int id = 0;
  double length = 0; // meters
  ShipClass klass = ShipClass::Feeder;
  double design_speed = 0;     // knots
  double design_fuel_rate = 0; // tonnes per nm at design speed
  std::vector<int> calls;      // call ids in route order
};

struct PortCall {
  int id = 0;
  int ship = 0;
  int call_index = 0; // 1-based position in the ship's route
  int port = 0;
  double ideal_position = 0; // meters, leftmost
  double est = 0;            // hours, earliest berthing start
  double eft = 0;            // hours, est + base_handling
  double lft = 0;            // hours, soft latest finish
  double base_handling = 0;  // hours at the ideal position
};

struct ExternalBerth {
  int port = 0;
  double position = 0; // meters, leftmost
  double start = 0;    // hours
  double duration = 0; // hours
  double length = 0;   // meters
};

struct CostRates {
  double fuel_price = 500.0;         // USD per tonne
  double handling_rate = 1000.0;     // USD per hour
  double delay_rate = 2000.0;        // USD per hour past EFT
  double waiting_rate = 500.0;       // USD per hour between arrival and berthing
  double lft_penalty_rate = 10000.0; // USD per hour past LFT
  double deviation_factor = 0.001;   // handling increase per meter off ideal
};

struct Instance {
  std::vector<Port> ports;
  std::vector<Ship> ships;
  std::vector<PortCall> calls;
  std::vector<ExternalBerth> externals;
  std::vector<SpeedLevel> speeds; // sorted by increasing knots
  std::vector<std::vector<double>> distance_nm; // symmetric, by port index
  CostRates rates;
  double horizon = 0;   // hours; scan bound for the heuristics, big-M for the LP
  double time_step = 1; // hours, berth-start grid

  // Route neighbors of a call; -1 when none.
  int prev_call(int call_id) const;
  int next_call(int call_id) const;
  // Sea distance of the leg departing `call_id`; 0 for the last call of a route.
  double leg_distance(int call_id) const;
  int fastest_speed() const { return static_cast<int>(speeds.size()) - 1; }
};

// Throws std::invalid_argument on any violated structural invariant.
void validate_instance(const Instance& inst);

struct Assignment {
  double position = 0; // meters
  double start = 0;    // hours
  int leg_speed = -1;  // speed index for the leg departing this call; -1 = none
};

struct Solution {
  Solution() = default;
  explicit Solution(std::size_t n_calls)
      : assignments(n_calls), scheduled(n_calls, 0) {}

  std::vector<Assignment> assignments;  // indexed by call id
  std::vector<std::uint8_t> scheduled;  // 1 if the call is planned

  bool complete() const;
  std::vector<int> missing_calls() const;
};

struct CostBreakdown {
  double waiting = 0;
  double handling = 0;
  double delay = 0;
  double lft_penalty = 0;
  double fuel = 0;
  double total = 0;
};

enum class ViolationKind {
  Incomplete,
  OutsideQuay,
  Overlap,
  StartBeforeArrival,
  StartBeforeEst,
  MissingSpeed,
};

struct Violation {
  ViolationKind kind;
  int call_a = -1;
  int call_b = -1; // second call for overlaps; -(k+2) encodes external berth k
  std::string detail;
};

// (1 + beta * |position - ideal|) * base_handling. Throws std::domain_error
// if the ship does not fit the quay at `position`.
double handling_time(const Instance& inst, const PortCall& call, double position);

// fuel_price * (speed/design_speed)^3 * design_fuel_rate * distance
double leg_fuel_cost(const Ship& ship, const SpeedLevel& speed, double distance_nm,
                     const CostRates& rates);

// y + h + hours_per_nm * distance for the previous call's stored leg speed.
// Throws std::logic_error if the leg speed is unset.
double arrival_time(const Instance& inst, const PortCall& prev_call,
                    const Assignment& prev, double distance_nm);

// Objective (waiting/handling/delay/penalty/fuel) of a complete solution.
// Throws std::invalid_argument listing missing calls or missing leg speeds.
CostBreakdown evaluate(const Instance& inst, const Solution& sol);

// Empty result iff the solution satisfies every hard constraint: rectangles
// inside the quay, pairwise non-overlap (external berths included), berthing
// after arrival and after EST, exactly one speed per sailing leg. Finishing
// past LFT is soft and never reported here.
std::vector<Violation> check_feasibility(const Instance& inst, const Solution& sol);

// Waiting + handling + delay cost of one visit plus half of the fuel burned on
// its incoming and outgoing legs (absent legs omitted).
double port_visit_cost(const Instance& inst, const Solution& sol, int call_id);

// (z_obj - z_best) / z_best; requires z_best > 0.
double gap(double z_obj, double z_best);

// Closed-open rectangle overlap test, symmetric in its arguments.
bool rects_overlap(double x1, double l1, double t1, double d1,
                   double x2, double l2, double t2, double d2);

std::string violation_to_string(const Instance& inst, const Violation& v);

}  // namespace mcbap
