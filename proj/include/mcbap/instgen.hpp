#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcbap/model.hpp"

namespace mcbap {

struct GeneratorConfig {
  std::uint64_t seed = 1;
  int n_ships = 30;
  int n_external_per_port = 5;
  double segment_length = 10.0; // meters
  int n_ports = 3;              // 2 keeps Rotterdam + Bremerhaven only
  double time_step = 1.0;       // hours, berth-start grid
  CostRates rates{};            // fuel price and cost-rate overrides
  double position_bound_factor = 4.02; // max deviation in ship lengths, drives LFT width

  std::string group_name() const; // "<ships>_<external>_<segment>"
};

struct ShipPattern {
  std::vector<int> route; // port indices, in visiting order
  ShipClass klass;
  double length; // meters
};

// The six fixed ship patterns, with routes restricted to the first n_ports ports.
std::vector<ShipPattern> ship_patterns(int n_ports);

// Deterministic: identical configs give identical instances on any platform.
Instance generate(const GeneratorConfig& config);

enum class GridKind { Main, Small };

// Main: seeds 1-10 x ships {30,50,70} x external {5,10} x segment {10,20,40,80}.
// Small: seeds 1-5 x ships 4-15 x external {3,4,5} x segment {10,20,40,80}.
std::vector<GeneratorConfig> benchmark_grid(GridKind kind);

struct GenerationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mcbap
