#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "mcbap/model.hpp"
#include "mcbap/planner.hpp"

namespace mcbap {

struct OracleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OracleConfig {
  int max_ships = 4;
  int max_total_calls = 8;
  double time_step = 0;     // 0 = instance grid; otherwise must divide it
  double position_step = 0; // 0 = port segment grid; otherwise must divide it
  double prune_bound = kInf; // optional externally-known upper bound
  // Refusal caps: sum over calls of in-window candidate counts, and explored
  // nodes. Exceeding either raises OracleError rather than truncating.
  double max_space = 40000;
  long long node_budget = 500000000;
};

struct OracleResult {
  Solution solution;
  double objective = kInf;
  long long nodes = 0;
};

// Exact minimum over the discretized decision space (berth positions on the
// position grid, starts on the time grid, slowest feasible speed per leg,
// which is optimal because fuel and waiting both shrink with slower sailing).
// Deterministic; cost ties resolve to the first solution in lexicographic
// (position, start) enumeration order over calls sorted by ship then route.
OracleResult brute_force(const Instance& inst, const OracleConfig& cfg = {});

// CPLEX-LP text export of the full model: objective, berthing-space rows,
// pairwise non-overlap with big-M, arrival/handling/deviation linking, speed
// assignment, external berths fixed via bounds.
void export_lp(const Instance& inst, const std::string& path);
std::string export_lp_string(const Instance& inst);

struct LpCheckReport {
  std::vector<std::string> violated_rows;
  double objective = 0;
  int rows_checked = 0;
  bool ok() const { return violated_rows.empty(); }
};

// Parses an exported model and plugs the solution into every row, inferring
// the ordering binaries from the rectangle geometry. Tolerance 1e-6 relative.
LpCheckReport substitute_and_check(const Instance& inst, const std::string& lp_path,
                                   const Solution& sol);

}  // namespace mcbap
