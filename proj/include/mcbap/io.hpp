#pragma once

#include <stdexcept>
#include <string>

#include "mcbap/model.hpp"

namespace mcbap {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// UTF-8 JSON with a schema_version field; units are carried in the key names
// (hours, meters, nautical miles, knots, USD). See docs/formats.md.
inline constexpr int kInstanceSchemaVersion = 1;
inline constexpr int kSolutionSchemaVersion = 1;

void write_instance(const Instance& inst, const std::string& path);
Instance read_instance(const std::string& path);

void write_solution(const Solution& sol, const std::string& path);
// n_calls guards against pairing a solution file with the wrong instance.
Solution read_solution(const std::string& path, std::size_t n_calls);

std::string instance_to_json(const Instance& inst);
Instance instance_from_json(const std::string& text, const std::string& origin = "<string>");

}  // namespace mcbap
