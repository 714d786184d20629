#include "mcbap/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mcbap {

using nlohmann::json;

namespace {

json instance_to_tree(const Instance& inst) {
  json j;
  j["schema_version"] = kInstanceSchemaVersion;
  j["horizon_hours"] = inst.horizon;
  j["time_step_hours"] = inst.time_step;
  j["cost_rates"] = {
      {"fuel_price_usd_per_tonne", inst.rates.fuel_price},
      {"handling_usd_per_hour", inst.rates.handling_rate},
      {"delay_usd_per_hour", inst.rates.delay_rate},
      {"waiting_usd_per_hour", inst.rates.waiting_rate},
      {"lft_penalty_usd_per_hour", inst.rates.lft_penalty_rate},
      {"handling_deviation_per_meter", inst.rates.deviation_factor},
  };
  j["ports"] = json::array();
  for (const Port& p : inst.ports)
    j["ports"].push_back({{"code", p.code},
                          {"quay_length_m", p.quay_length},
                          {"segment_length_m", p.segment_length}});
  j["distances_nm"] = inst.distance_nm;
  j["speed_levels"] = json::array();
  for (const SpeedLevel& s : inst.speeds)
    j["speed_levels"].push_back({{"knots", s.knots},
                                 {"hours_per_nm", s.hours_per_nm},
                                 {"fuel_tonnes_per_nm",
                                  {{"feeder", s.fuel_per_nm[0]},
                                   {"medium", s.fuel_per_nm[1]},
                                   {"large", s.fuel_per_nm[2]}}}});
  j["ships"] = json::array();
  for (const Ship& s : inst.ships) {
    json routes = json::array();
    for (int c : s.calls) routes.push_back(inst.calls[c].port);
    j["ships"].push_back({{"id", s.id},
                          {"class", ship_class_name(s.klass)},
                          {"length_m", s.length},
                          {"design_speed_knots", s.design_speed},
                          {"design_fuel_tonnes_per_nm", s.design_fuel_rate},
                          {"route", routes}});
  }
  j["port_calls"] = json::array();
  for (const PortCall& c : inst.calls)
    j["port_calls"].push_back({{"id", c.id},
                               {"ship", c.ship},
                               {"call_index", c.call_index},
                               {"port", c.port},
                               {"ideal_position_m", c.ideal_position},
                               {"est_hours", c.est},
                               {"eft_hours", c.eft},
                               {"lft_hours", c.lft},
                               {"base_handling_hours", c.base_handling}});
  j["external_berths"] = json::array();
  for (const ExternalBerth& e : inst.externals)
    j["external_berths"].push_back({{"port", e.port},
                                    {"position_m", e.position},
                                    {"start_hours", e.start},
                                    {"duration_hours", e.duration},
                                    {"length_m", e.length}});
  return j;
}

Instance instance_from_tree(const json& j, const std::string& origin) {
  if (!j.contains("schema_version"))
    throw IoError(origin + ": missing schema_version");
  int version = j.at("schema_version").get<int>();
  if (version != kInstanceSchemaVersion)
    throw IoError(origin + ": unsupported instance schema_version " + std::to_string(version) +
                  " (expected " + std::to_string(kInstanceSchemaVersion) + ")");
  Instance inst;
  inst.horizon = j.at("horizon_hours").get<double>();
  inst.time_step = j.at("time_step_hours").get<double>();
  const json& r = j.at("cost_rates");
  inst.rates.fuel_price = r.at("fuel_price_usd_per_tonne").get<double>();
  inst.rates.handling_rate = r.at("handling_usd_per_hour").get<double>();
  inst.rates.delay_rate = r.at("delay_usd_per_hour").get<double>();
  inst.rates.waiting_rate = r.at("waiting_usd_per_hour").get<double>();
  inst.rates.lft_penalty_rate = r.at("lft_penalty_usd_per_hour").get<double>();
  inst.rates.deviation_factor = r.at("handling_deviation_per_meter").get<double>();
  for (const json& p : j.at("ports"))
    inst.ports.push_back({p.at("code").get<std::string>(), p.at("quay_length_m").get<double>(),
                          p.at("segment_length_m").get<double>()});
  inst.distance_nm = j.at("distances_nm").get<std::vector<std::vector<double>>>();
  for (const json& s : j.at("speed_levels")) {
    SpeedLevel lvl;
    lvl.knots = s.at("knots").get<double>();
    lvl.hours_per_nm = s.at("hours_per_nm").get<double>();
    const json& f = s.at("fuel_tonnes_per_nm");
    lvl.fuel_per_nm = {f.at("feeder").get<double>(), f.at("medium").get<double>(),
                       f.at("large").get<double>()};
    inst.speeds.push_back(lvl);
  }
  for (const json& s : j.at("ships")) {
    Ship ship;
    ship.id = s.at("id").get<int>();
    ship.klass = ship_class_from_name(s.at("class").get<std::string>());
    ship.length = s.at("length_m").get<double>();
    ship.design_speed = s.at("design_speed_knots").get<double>();
    ship.design_fuel_rate = s.at("design_fuel_tonnes_per_nm").get<double>();
    inst.ships.push_back(ship);
  }
  for (const json& c : j.at("port_calls")) {
    PortCall call;
    call.id = c.at("id").get<int>();
    call.ship = c.at("ship").get<int>();
    call.call_index = c.at("call_index").get<int>();
    call.port = c.at("port").get<int>();
    call.ideal_position = c.at("ideal_position_m").get<double>();
    call.est = c.at("est_hours").get<double>();
    call.eft = c.at("eft_hours").get<double>();
    call.lft = c.at("lft_hours").get<double>();
    call.base_handling = c.at("base_handling_hours").get<double>();
    if (call.id != static_cast<int>(inst.calls.size()))
      throw IoError(origin + ": port_calls must be listed in id order");
    if (call.ship < 0 || call.ship >= static_cast<int>(inst.ships.size()))
      throw IoError(origin + ": port call references unknown ship");
    inst.ships[call.ship].calls.push_back(call.id);
    inst.calls.push_back(call);
  }
  for (const json& e : j.at("external_berths"))
    inst.externals.push_back({e.at("port").get<int>(), e.at("position_m").get<double>(),
                              e.at("start_hours").get<double>(),
                              e.at("duration_hours").get<double>(),
                              e.at("length_m").get<double>()});
  try {
    validate_instance(inst);
  } catch (const std::invalid_argument& err) {
    throw IoError(origin + ": " + err.what());
  }
  return inst;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& err) {
    throw IoError(path + ": " + err.what());
  }
}

void dump_json(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace

void write_instance(const Instance& inst, const std::string& path) {
  dump_json(instance_to_tree(inst), path);
}

Instance read_instance(const std::string& path) {
  return instance_from_tree(load_json(path), path);
}

std::string instance_to_json(const Instance& inst) { return instance_to_tree(inst).dump(2); }

Instance instance_from_json(const std::string& text, const std::string& origin) {
  try {
    return instance_from_tree(json::parse(text), origin);
  } catch (const json::parse_error& err) {
    throw IoError(origin + ": " + err.what());
  }
}

void write_solution(const Solution& sol, const std::string& path) {
  json j;
  j["schema_version"] = kSolutionSchemaVersion;
  j["assignments"] = json::array();
  for (std::size_t c = 0; c < sol.assignments.size(); ++c) {
    if (!sol.scheduled[c]) continue;
    const Assignment& a = sol.assignments[c];
    json row = {{"call", c}, {"position_m", a.position}, {"start_hours", a.start}};
    if (a.leg_speed >= 0) row["leg_speed"] = a.leg_speed;
    j["assignments"].push_back(row);
  }
  dump_json(j, path);
}

Solution read_solution(const std::string& path, std::size_t n_calls) {
  json j = load_json(path);
  if (!j.contains("schema_version")) throw IoError(path + ": missing schema_version");
  int version = j.at("schema_version").get<int>();
  if (version != kSolutionSchemaVersion)
    throw IoError(path + ": unsupported solution schema_version " + std::to_string(version));
  Solution sol(n_calls);
  for (const json& row : j.at("assignments")) {
    std::size_t c = row.at("call").get<std::size_t>();
    if (c >= n_calls)
      throw IoError(path + ": assignment for unknown call " + std::to_string(c));
    sol.assignments[c].position = row.at("position_m").get<double>();
    sol.assignments[c].start = row.at("start_hours").get<double>();
    sol.assignments[c].leg_speed = row.contains("leg_speed") ? row.at("leg_speed").get<int>() : -1;
    sol.scheduled[c] = 1;
  }
  return sol;
}

}  // namespace mcbap
