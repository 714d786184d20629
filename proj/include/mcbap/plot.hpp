#pragma once

#include <string>

#include "mcbap/model.hpp"

namespace mcbap {

// Self-contained time-space SVG for one port: x axis quay meters, y axis
// hours, optimized visits colored by ship, external berths gray, EST/EFT/LFT
// ticks per visit. Accepts partial solutions (unscheduled calls are skipped).
std::string render_port_svg(const Instance& inst, const Solution& sol, int port);

// Writes <out_dir>/<port code>.svg for every port; returns the file list.
std::vector<std::string> write_solution_svgs(const Instance& inst, const Solution& sol,
                                             const std::string& out_dir);

}  // namespace mcbap
