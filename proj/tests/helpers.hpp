#pragma once

#include <vector>

#include "mcbap/model.hpp"

namespace mcbap::test {

// Skeleton instance: n_ports quays of 1000 m (segment 10), two speed levels
// (10 and 20 knots), default cost rates, 1-hour grid.
inline Instance base_instance(int n_ports = 1) {
  Instance inst;
  for (int p = 0; p < n_ports; ++p)
    inst.ports.push_back({"P" + std::to_string(p), 1000.0, 10.0});
  inst.distance_nm.assign(n_ports, std::vector<double>(n_ports, 0.0));
  for (int a = 0; a < n_ports; ++a)
    for (int b = 0; b < n_ports; ++b)
      if (a != b) inst.distance_nm[a][b] = 100.0 * std::abs(a - b);
  for (double knots : {10.0, 20.0}) {
    SpeedLevel lvl;
    lvl.knots = knots;
    lvl.hours_per_nm = 1.0 / knots;
    for (int k = 0; k < 3; ++k) {
      double ratio = knots / 20.0;
      lvl.fuel_per_nm[k] = ratio * ratio * ratio * 0.2;
    }
    inst.speeds.push_back(lvl);
  }
  inst.horizon = 500;
  inst.time_step = 1;
  return inst;
}

struct CallSpec {
  int port = 0;
  double ideal = 0;
  double est = 0;
  double h0 = 10;
  double lft_slack = 10; // lft = eft + slack
};

inline int add_ship(Instance& inst, double length, const std::vector<CallSpec>& specs,
                    ShipClass klass = ShipClass::Medium, double design_speed = 20,
                    double design_fuel = 0.2) {
  Ship ship;
  ship.id = static_cast<int>(inst.ships.size());
  ship.length = length;
  ship.klass = klass;
  ship.design_speed = design_speed;
  ship.design_fuel_rate = design_fuel;
  for (std::size_t k = 0; k < specs.size(); ++k) {
    PortCall call;
    call.id = static_cast<int>(inst.calls.size());
    call.ship = ship.id;
    call.call_index = static_cast<int>(k) + 1;
    call.port = specs[k].port;
    call.ideal_position = specs[k].ideal;
    call.est = specs[k].est;
    call.base_handling = specs[k].h0;
    call.eft = call.est + call.base_handling;
    call.lft = call.eft + specs[k].lft_slack;
    ship.calls.push_back(call.id);
    inst.calls.push_back(call);
  }
  inst.ships.push_back(ship);
  return ship.id;
}

}  // namespace mcbap::test
