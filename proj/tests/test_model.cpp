#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "mcbap/model.hpp"
#include "mcbap/rng.hpp"

using namespace mcbap;
using namespace mcbap::test;

TEST_CASE("handling time") {
  Instance inst = base_instance();
  inst.rates.deviation_factor = 0.01;
  add_ship(inst, 100, {{0, 200, 0, 10}});
  const PortCall& call = inst.calls[0];

  CHECK(handling_time(inst, call, 200) == 10.0); // zero deviation is exact
  CHECK(handling_time(inst, call, 250) == doctest::Approx(15.0).epsilon(1e-12));
  CHECK(handling_time(inst, call, 150) == doctest::Approx(15.0).epsilon(1e-12));
  CHECK_THROWS_AS(handling_time(inst, call, 950), std::domain_error);
  CHECK_THROWS_AS(handling_time(inst, call, -5), std::domain_error);

  // monotone non-decreasing in |deviation|
  double prev = 0;
  for (double dev = 0; dev <= 700; dev += 35) {
    double h = handling_time(inst, call, 200 + dev);
    CHECK(h >= prev);
    prev = h;
  }
}

TEST_CASE("handling time: feeder at the DEHAM minimum") {
  Instance inst = base_instance();
  add_ship(inst, 150, {{0, 300, 0, 10.1}});
  CHECK(handling_time(inst, inst.calls[0], 300) == 10.1);
}

TEST_CASE("leg fuel cost") {
  Instance inst = base_instance();
  add_ship(inst, 100, {{0, 0, 0, 10}});
  Ship& ship = inst.ships[0];

  SpeedLevel design{20.0, 1.0 / 20.0, {}};
  ship.design_speed = 20;
  ship.design_fuel_rate = 1.0;
  CHECK(leg_fuel_cost(ship, design, 100, inst.rates) == doctest::Approx(50000.0));

  SpeedLevel doubled{40.0, 1.0 / 40.0, {}};
  CHECK(leg_fuel_cost(ship, doubled, 100, inst.rates) ==
        doctest::Approx(8 * 50000.0)); // cubic law

  ship.design_fuel_rate = 0.1;
  SpeedLevel slow{17.0, 1.0 / 17.0, {}};
  CHECK(leg_fuel_cost(ship, slow, 100, inst.rates) == doctest::Approx(3070.625).epsilon(1e-12));

  // strictly increasing in speed
  double prev = 0;
  for (double kn = 10; kn <= 25; kn += 0.5) {
    double f = leg_fuel_cost(ship, {kn, 1 / kn, {}}, 100, inst.rates);
    CHECK(f > prev);
    prev = f;
  }
}

TEST_CASE("arrival time") {
  Instance inst = base_instance(2);
  inst.distance_nm = {{0, 240}, {240, 0}};
  add_ship(inst, 100, {{0, 0, 0, 10}, {1, 0, 30, 10}});
  Assignment prev{0, 0, 0}; // 10 knots over 240 nm: 24 h travel
  CHECK(arrival_time(inst, inst.calls[0], prev, 240) == doctest::Approx(34.0));

  CHECK(arrival_time(inst, inst.calls[0], Assignment{0, 0, -1}, 0) == doctest::Approx(10.0));

  Instance inst2 = base_instance(2);
  inst2.distance_nm = {{0, 400}, {400, 0}};
  add_ship(inst2, 100, {{0, 0, 5, 10.1}, {1, 0, 40, 10}});
  Assignment prev2{0, 5, 1}; // 20 knots over 400 nm: 20 h travel
  CHECK(arrival_time(inst2, inst2.calls[0], prev2, 400) == doctest::Approx(35.1));

  CHECK_THROWS_AS(arrival_time(inst, inst.calls[0], Assignment{0, 0, -1}, 240),
                  std::logic_error);

  // strictly decreasing in speed
  double prev_arrival = 1e300;
  for (int s = 0; s < 2; ++s) {
    double a = arrival_time(inst, inst.calls[0], Assignment{0, 0, s}, 240);
    CHECK(a < prev_arrival);
    prev_arrival = a;
  }
}

TEST_CASE("evaluate: empty and single-call") {
  Instance inst = base_instance();
  Solution empty(0);
  CostBreakdown zero = evaluate(inst, empty);
  CHECK(zero.total == 0);
  CHECK(zero.fuel == 0);

  add_ship(inst, 100, {{0, 200, 3, 10}});
  Solution sol(1);
  sol.assignments[0] = {200, 3, -1};
  sol.scheduled[0] = 1;
  CostBreakdown b = evaluate(inst, sol);
  CHECK(b.total == doctest::Approx(1000.0 * 10)); // handling only
  CHECK(b.waiting == 0);
  CHECK(b.delay == 0);
  CHECK(b.fuel == 0);
}

TEST_CASE("evaluate: two-call route, slowest leg, all five terms") {
  Instance inst = base_instance(2);
  inst.distance_nm = {{0, 100}, {100, 0}};
  add_ship(inst, 100, {{0, 200, 0, 10, 10}, {1, 300, 15, 10, 15}});
  Solution sol(2);
  sol.assignments[0] = {300, 0, 0}; // deviation 100 -> handling 11; 10 kn leg
  sol.assignments[1] = {300, 22, -1};
  sol.scheduled = {1, 1};

  // hand total: handling 21000, delay 2000 + 14000, waiting 500, fuel 1250
  CostBreakdown b = evaluate(inst, sol);
  CHECK(b.handling == doctest::Approx(21000.0));
  CHECK(b.delay == doctest::Approx(16000.0));
  CHECK(b.waiting == doctest::Approx(500.0));
  CHECK(b.lft_penalty == 0);
  CHECK(b.fuel == doctest::Approx(1250.0));
  CHECK(b.total == doctest::Approx(38750.0));

  // pure: identical on re-evaluation
  CHECK(evaluate(inst, sol).total == b.total);

  Solution incomplete = sol;
  incomplete.scheduled[1] = 0;
  CHECK_THROWS_AS(evaluate(inst, incomplete), std::invalid_argument);
}

TEST_CASE("feasibility checker") {
  Instance inst = base_instance();
  add_ship(inst, 100, {{0, 0, 0, 10}});
  add_ship(inst, 100, {{0, 0, 0, 10}});

  Solution sol(2);
  sol.assignments[0] = {100, 0, -1};
  sol.assignments[1] = {100, 0, -1};
  sol.scheduled = {1, 1};
  auto v = check_feasibility(inst, sol);
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == ViolationKind::Overlap);

  // boundary: x + l = quay length exactly
  sol.assignments[0] = {900, 0, -1};
  sol.assignments[1] = {800, 0, -1};
  CHECK(check_feasibility(inst, sol).empty());

  // berthing before EST
  sol.assignments[0] = {900, 0, -1};
  inst.calls[0].est = 2;
  inst.calls[0].eft = 12;
  inst.calls[0].lft = 22;
  auto v2 = check_feasibility(inst, sol);
  REQUIRE(v2.size() == 1);
  CHECK(v2[0].kind == ViolationKind::StartBeforeEst);
}

TEST_CASE("feasibility: temporal overlap with disjoint positions is fine") {
  Instance inst = base_instance();
  add_ship(inst, 100, {{0, 0, 0, 10}});
  add_ship(inst, 100, {{0, 200, 0, 10}});
  add_ship(inst, 100, {{0, 400, 0, 10}});
  Solution sol(3);
  sol.assignments[0] = {0, 0, -1};
  sol.assignments[1] = {200, 5, -1}; // overlaps ship 0 in time only
  sol.assignments[2] = {400, 20, -1};
  sol.scheduled = {1, 1, 1};
  CHECK(check_feasibility(inst, sol).empty());
}

TEST_CASE("feasibility: overlap predicate is symmetric") {
  Rng rng(7);
  for (int trial = 0; trial < 2000; ++trial) {
    double x1 = rng.uniform(0, 100), l1 = rng.uniform(1, 50);
    double t1 = rng.uniform(0, 100), d1 = rng.uniform(1, 50);
    double x2 = rng.uniform(0, 100), l2 = rng.uniform(1, 50);
    double t2 = rng.uniform(0, 100), d2 = rng.uniform(1, 50);
    CHECK(rects_overlap(x1, l1, t1, d1, x2, l2, t2, d2) ==
          rects_overlap(x2, l2, t2, d2, x1, l1, t1, d1));
  }
}

TEST_CASE("feasibility: missing speed and external overlap") {
  Instance inst = base_instance(2);
  inst.distance_nm = {{0, 100}, {100, 0}};
  add_ship(inst, 100, {{0, 0, 0, 10}, {1, 0, 40, 10}});
  inst.externals.push_back({0, 50, 5, 10, 100});

  Solution sol(2);
  sol.assignments[0] = {0, 0, -1}; // rect [0,100) x [0,10) overlaps the external
  sol.assignments[1] = {0, 40, -1};
  sol.scheduled = {1, 1};
  auto v = check_feasibility(inst, sol);
  bool saw_overlap = false, saw_missing_speed = false;
  for (const Violation& viol : v) {
    if (viol.kind == ViolationKind::Overlap) saw_overlap = true;
    if (viol.kind == ViolationKind::MissingSpeed) saw_missing_speed = true;
  }
  CHECK(saw_overlap);
  CHECK(saw_missing_speed);

  sol.assignments[0] = {200, 0, 1}; // clear of the external, fastest leg speed
  auto v2 = check_feasibility(inst, sol);
  CHECK(v2.empty()); // arrival 10 + 100/20 = 15 <= 40
}

TEST_CASE("port visit cost") {
  Instance inst = base_instance(3);
  inst.distance_nm = {{0, 100, 300}, {100, 0, 200}, {300, 200, 0}};
  add_ship(inst, 100, {{0, 200, 0, 10, 20}, {1, 200, 20, 10, 20}, {2, 200, 50, 10, 20}});
  Solution sol(3);
  sol.assignments[0] = {200, 0, 0};  // ends 10, 10 kn over 100 nm -> arrives 20
  sol.assignments[1] = {200, 20, 0}; // ends 30, 10 kn over 200 nm -> arrives 50
  sol.assignments[2] = {200, 50, -1};
  sol.scheduled = {1, 1, 1};
  REQUIRE(check_feasibility(inst, sol).empty());

  // isolated-at-ideal first call: handling only, half the outgoing leg
  double fuel01 = leg_fuel_cost(inst.ships[0], inst.speeds[0], 100, inst.rates);
  double fuel12 = leg_fuel_cost(inst.ships[0], inst.speeds[0], 200, inst.rates);
  CHECK(port_visit_cost(inst, sol, 0) == doctest::Approx(10000.0 + fuel01 / 2));
  CHECK(port_visit_cost(inst, sol, 1) == doctest::Approx(10000.0 + (fuel01 + fuel12) / 2));
  CHECK(port_visit_cost(inst, sol, 2) == doctest::Approx(10000.0 + fuel12 / 2));
}

TEST_CASE("gap") {
  CHECK(gap(100, 100) == 0);
  CHECK(gap(110, 100) == doctest::Approx(0.10));
  CHECK(gap(90, 100) < 0);
  CHECK_THROWS_AS(gap(1, 0), std::domain_error);
  CHECK_THROWS_AS(gap(1, -5), std::domain_error);
}

TEST_CASE("instance validation rejects broken invariants") {
  Instance inst = base_instance();
  add_ship(inst, 100, {{0, 0, 0, 10}});
  CHECK_NOTHROW(validate_instance(inst));

  Instance bad = inst;
  bad.calls[0].eft = bad.calls[0].est + 99; // eft must be est + handling
  CHECK_THROWS_AS(validate_instance(bad), std::invalid_argument);

  bad = inst;
  bad.distance_nm = {{0.0}};
  CHECK_NOTHROW(validate_instance(bad)); // 1x1 matrix is fine for one port

  bad = inst;
  bad.speeds[1].fuel_per_nm[0] = 0; // must increase with speed
  CHECK_THROWS_AS(validate_instance(bad), std::invalid_argument);
}
