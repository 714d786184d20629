#include "mcbap/instgen.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mcbap/rng.hpp"

namespace mcbap {

namespace {

// Provisional planning window used while drawing time windows; the final
// horizon is 1.5x the latest LFT and is computed afterwards.
constexpr double kPlanningWindow = 360.0; // hours
constexpr double kMaxEstSlack = 24.0;     // hours between reachable and drawn EST
constexpr double kExternalHandlingPerMeter = 0.1; // hours per meter of ship length
constexpr int kExternalPlacementRetries = 200;

constexpr int kRtm = 0, kBrv = 1, kHam = 2;

// Minimum handling hours by (class, port): NLRTM, DEBRV, DEHAM columns.
constexpr double kMinHandling[3][3] = {
    {10.4, 12.1, 10.1}, // feeder
    {18.4, 21.8, 18.0}, // medium
    {26.7, 33.7, 41.0}, // large
};

// Per-class sailing profile; calibrated so fleet-average burn per voyage lands
// near 50 tonnes at the slowest speed levels.
constexpr double kDesignSpeed[3] = {20.0, 21.0, 22.0};    // knots
constexpr double kDesignFuelRate[3] = {0.10, 0.25, 0.40}; // tonnes per nm

double snap_down(double v, double step) { return std::floor(v / step + 1e-9) * step; }
double snap_up(double v, double step) { return std::ceil(v / step - 1e-9) * step; }

}  // namespace

std::string GeneratorConfig::group_name() const {
  std::ostringstream os;
  os << n_ships << '_' << n_external_per_port << '_'
     << static_cast<long long>(std::llround(segment_length));
  return os.str();
}

std::vector<ShipPattern> ship_patterns(int n_ports) {
  const std::vector<ShipPattern> full = {
      {{kRtm, kBrv, kHam}, ShipClass::Large, 350.0},
      {{kHam, kBrv, kRtm}, ShipClass::Large, 330.0},
      {{kRtm, kHam}, ShipClass::Medium, 250.0},
      {{kBrv, kRtm, kHam}, ShipClass::Medium, 230.0},
      {{kHam, kBrv}, ShipClass::Feeder, 180.0},
      {{kBrv, kRtm}, ShipClass::Feeder, 150.0},
  };
  std::vector<ShipPattern> out;
  for (const ShipPattern& p : full) {
    ShipPattern q = p;
    q.route.clear();
    for (int port : p.route)
      if (port < n_ports) q.route.push_back(port);
    if (!q.route.empty()) out.push_back(q);
  }
  return out;
}

Instance generate(const GeneratorConfig& cfg) {
  if (cfg.n_ships <= 0) throw GenerationError("n_ships must be > 0");
  if (cfg.n_ports < 2 || cfg.n_ports > 3) throw GenerationError("n_ports must be 2 or 3");
  if (!(cfg.segment_length > 0)) throw GenerationError("segment_length must be > 0");
  if (!(cfg.time_step > 0)) throw GenerationError("time_step must be > 0");

  Instance inst;
  inst.rates = cfg.rates;
  inst.time_step = cfg.time_step;

  const std::vector<Port> all_ports = {
      {"NLRTM", 1600.0, cfg.segment_length},
      {"DEBRV", 1800.0, cfg.segment_length},
      {"DEHAM", 2100.0, cfg.segment_length},
  };
  inst.ports.assign(all_ports.begin(), all_ports.begin() + cfg.n_ports);

  const double full_dist[3][3] = {
      {0.0, 260.0, 320.0},
      {260.0, 0.0, 130.0},
      {320.0, 130.0, 0.0},
  };
  inst.distance_nm.assign(cfg.n_ports, std::vector<double>(cfg.n_ports, 0.0));
  for (int a = 0; a < cfg.n_ports; ++a)
    for (int b = 0; b < cfg.n_ports; ++b) inst.distance_nm[a][b] = full_dist[a][b];

  // 10 speed levels, 17.0 .. 21.5 knots.
  for (int s = 0; s < 10; ++s) {
    SpeedLevel lvl;
    lvl.knots = 17.0 + 0.5 * s;
    lvl.hours_per_nm = 1.0 / lvl.knots;
    for (int k = 0; k < 3; ++k) {
      double ratio = lvl.knots / kDesignSpeed[k];
      lvl.fuel_per_nm[k] = ratio * ratio * ratio * kDesignFuelRate[k];
    }
    inst.speeds.push_back(lvl);
  }
  const double slowest_hours_per_nm = inst.speeds.front().hours_per_nm;

  Rng rng(cfg.seed);
  const std::vector<ShipPattern> patterns = ship_patterns(cfg.n_ports);
  double max_lft = 0;

  for (int i = 0; i < cfg.n_ships; ++i) {
    const ShipPattern& pat = patterns[rng.index(patterns.size())];
    Ship ship;
    ship.id = i;
    ship.length = pat.length;
    ship.klass = pat.klass;
    ship.design_speed = kDesignSpeed[static_cast<int>(pat.klass)];
    ship.design_fuel_rate = kDesignFuelRate[static_cast<int>(pat.klass)];

    double prev_eft = 0;
    int prev_port = -1;
    for (std::size_t k = 0; k < pat.route.size(); ++k) {
      PortCall call;
      call.id = static_cast<int>(inst.calls.size());
      call.ship = i;
      call.call_index = static_cast<int>(k) + 1;
      call.port = pat.route[k];
      const Port& port = inst.ports[call.port];
      call.base_handling = kMinHandling[static_cast<int>(pat.klass)][call.port];
      call.ideal_position =
          snap_down(rng.uniform(0.0, port.quay_length - ship.length), port.segment_length);
      if (k == 0) {
        call.est = snap_down(rng.uniform(0.0, kPlanningWindow / 3.0), cfg.time_step);
      } else {
        double travel = slowest_hours_per_nm * inst.distance_nm[prev_port][call.port];
        call.est = snap_up(prev_eft + travel + rng.uniform(0.0, kMaxEstSlack), cfg.time_step);
      }
      call.eft = call.est + call.base_handling;
      double h_max = (1.0 + inst.rates.deviation_factor * cfg.position_bound_factor * ship.length) *
                     call.base_handling;
      call.lft = call.eft + (h_max - call.base_handling) / 2.0;
      max_lft = std::max(max_lft, call.lft);
      prev_eft = call.eft;
      prev_port = call.port;
      ship.calls.push_back(call.id);
      inst.calls.push_back(call);
    }
    inst.ships.push_back(ship);
  }

  inst.horizon = 1.5 * max_lft;

  // External berths are drawn inside the busy two thirds of the horizon so
  // they actually interact with the optimized port calls.
  const double external_window = std::max(48.0, inst.horizon * 2.0 / 3.0);
  for (int p = 0; p < cfg.n_ports; ++p) {
    const Port& port = inst.ports[p];
    std::vector<ExternalBerth> placed;
    for (int e = 0; e < cfg.n_external_per_port; ++e) {
      bool ok = false;
      for (int attempt = 0; attempt < kExternalPlacementRetries && !ok; ++attempt) {
        ExternalBerth b;
        b.port = p;
        b.length = rng.uniform(180.0, 330.0);
        b.duration = kExternalHandlingPerMeter * b.length;
        b.position = rng.uniform(0.0, port.quay_length - b.length);
        b.start = rng.uniform(0.0, std::max(0.0, external_window - b.duration));
        ok = std::none_of(placed.begin(), placed.end(), [&](const ExternalBerth& o) {
          return rects_overlap(b.position, b.length, b.start, b.duration,
                               o.position, o.length, o.start, o.duration);
        });
        if (ok) placed.push_back(b);
      }
      if (!ok)
        throw GenerationError("could not place external berth " + std::to_string(e) +
                              " at port " + port.code);
    }
    inst.externals.insert(inst.externals.end(), placed.begin(), placed.end());
  }

  validate_instance(inst);
  return inst;
}

std::vector<GeneratorConfig> benchmark_grid(GridKind kind) {
  std::vector<GeneratorConfig> out;
  const std::vector<double> segments = {10, 20, 40, 80};
  if (kind == GridKind::Main) {
    for (int ships : {30, 50, 70})
      for (int ext : {5, 10})
        for (double seg : segments)
          for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            GeneratorConfig c;
            c.seed = seed;
            c.n_ships = ships;
            c.n_external_per_port = ext;
            c.segment_length = seg;
            out.push_back(c);
          }
  } else {
    for (int ships = 4; ships <= 15; ++ships)
      for (int ext : {3, 4, 5})
        for (double seg : segments)
          for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            GeneratorConfig c;
            c.seed = seed;
            c.n_ships = ships;
            c.n_external_per_port = ext;
            c.segment_length = seg;
            out.push_back(c);
          }
  }
  return out;
}

}  // namespace mcbap
