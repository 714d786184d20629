#include "mcbap/oracle.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "mcbap/io.hpp"

namespace mcbap {

namespace {

double snap_up(double v, double step) { return std::ceil(v / step - 1e-9) * step; }

bool divides(double small, double big) {
  double q = big / small;
  return std::abs(q - std::llround(q)) < 1e-6;
}

struct Searcher {
  const Instance& inst;
  const OracleConfig& cfg;
  ScheduleState st;
  std::vector<int> order;        // calls, ships ascending then route order
  std::vector<double> suffix_lb; // static lower bound of calls order[d..]
  std::vector<double> tstep_of;  // oracle time step (global)
  double tstep;
  std::vector<double> pstep; // per call
  long long nodes = 0;
  double best_obj;
  Solution best;
  bool have_solution = false;

  Searcher(const Instance& i, const OracleConfig& c)
      : inst(i), cfg(c), st(i), best_obj(c.prune_bound) {
    tstep = cfg.time_step > 0 ? cfg.time_step : inst.time_step;
    if (!divides(tstep, inst.time_step) && cfg.time_step > 0)
      throw OracleError("oracle time step must divide the instance grid");
    for (const Ship& s : inst.ships)
      for (int c2 : s.calls) order.push_back(c2);
    pstep.resize(inst.calls.size());
    for (const PortCall& call : inst.calls) {
      double seg = inst.ports[call.port].segment_length;
      double ps = cfg.position_step > 0 ? cfg.position_step : seg;
      if (cfg.position_step > 0 && !divides(ps, seg))
        throw OracleError("oracle position step must divide the segment grid");
      pstep[call.id] = ps;
    }
    // Static per-call contribution bound: minimum handling cost plus, for
    // non-first calls, the slowest-speed fuel of the incoming leg.
    suffix_lb.assign(order.size() + 1, 0.0);
    for (int d = static_cast<int>(order.size()) - 1; d >= 0; --d) {
      const PortCall& call = inst.calls[order[d]];
      double lb = inst.rates.handling_rate * call.base_handling;
      int prev = inst.prev_call(call.id);
      if (prev >= 0)
        lb += leg_fuel_cost(inst.ships[call.ship], inst.speeds.front(),
                            inst.leg_distance(prev), inst.rates);
      suffix_lb[d] = suffix_lb[d + 1] + lb;
    }
  }

  double space_estimate() const {
    double total = 0;
    for (const PortCall& call : inst.calls) {
      const Ship& ship = inst.ships[call.ship];
      const Port& port = inst.ports[call.port];
      double nx = std::floor((port.quay_length - ship.length) / pstep[call.id] + 1e-9) + 1;
      double nt = std::floor((call.lft - call.base_handling - call.est) / tstep + 1e-9) + 1;
      total += nx * std::max(1.0, nt);
    }
    return total;
  }

  // Greedy seed: cheapest feasible placement per call in DFS order. Keeps the
  // incumbent tight from the start; independent of the heuristic modules.
  void seed() {
    ScheduleState g(inst, st.cache());
    for (int call : order) {
      const Ship& ship = inst.ships[inst.calls[call].ship];
      const Port& port = inst.ports[inst.calls[call].port];
      double lo = snap_up(g.earliest_start(call), tstep);
      double best_cost = kInf, bx = 0, bt = 0;
      for (double x = 0; x + ship.length <= port.quay_length + kGeomEps; x += pstep[call]) {
        double h = g.handling(call, x);
        for (long long i = 0;; ++i) {
          double t = lo + static_cast<double>(i) * tstep;
          if (t > inst.horizon + kGeomEps) break;
          double lb = inst.rates.handling_rate * h +
                      inst.rates.delay_rate * std::max(0.0, t + h - inst.calls[call].eft);
          if (lb >= best_cost) break;
          if (!g.fits(inst.calls[call].port, x, ship.length, t, h)) continue;
          double cost = g.placement_cost(call, x, t);
          if (cost < best_cost) {
            best_cost = cost;
            bx = x;
            bt = t;
          }
          break; // earliest fitting start per position is enough for a seed
        }
      }
      if (best_cost == kInf) return; // no seed; DFS still searches exhaustively
      g.place(call, bx, bt);
    }
    double obj = evaluate(inst, g.solution()).total;
    if (obj < best_obj) {
      best_obj = obj;
      best = g.solution();
      have_solution = true;
    }
  }

  void dfs(std::size_t depth, double partial) {
    if (depth == order.size()) {
      double obj = evaluate(inst, st.solution()).total;
      if (obj < best_obj) {
        best_obj = obj;
        best = st.solution();
        have_solution = true;
      }
      return;
    }
    int call = order[depth];
    const PortCall& c = inst.calls[call];
    const Ship& ship = inst.ships[c.ship];
    const Port& port = inst.ports[c.port];
    const CostRates& r = inst.rates;
    double lo = snap_up(st.earliest_start(call), tstep);
    int prev = inst.prev_call(call);
    bool has_prev = prev >= 0; // scheduled by construction of the call order
    double a_slow = -kInf, fuel_in_lb = 0;
    if (has_prev) {
      const Assignment& pa = st.solution().assignments[prev];
      double dist = inst.leg_distance(prev);
      a_slow = pa.start + st.handling(prev, pa.position) +
               inst.speeds.front().hours_per_nm * dist;
      fuel_in_lb = leg_fuel_cost(ship, inst.speeds.front(), dist, r);
    }
    for (double x = 0; x + ship.length <= port.quay_length + kGeomEps; x += pstep[call]) {
      double h = st.handling(call, x);
      for (long long i = 0;; ++i) {
        double t = lo + static_cast<double>(i) * tstep;
        if (t > inst.horizon + kGeomEps) break;
        double lb = r.handling_rate * h + r.delay_rate * std::max(0.0, t + h - c.eft) +
                    r.lft_penalty_rate * std::max(0.0, t + h - c.lft) + fuel_in_lb +
                    (has_prev ? r.waiting_rate * std::max(0.0, t - a_slow) : 0.0);
        if (partial + lb + suffix_lb[depth + 1] >= best_obj - 1e-7) break; // monotone in t
        if (++nodes > cfg.node_budget)
          throw OracleError("oracle node budget exceeded (" +
                            std::to_string(cfg.node_budget) + " nodes)");
        if (!st.fits(c.port, x, ship.length, t, h)) continue;
        double cost = st.placement_cost(call, x, t);
        if (partial + cost + suffix_lb[depth + 1] >= best_obj - 1e-7) continue;
        st.place(call, x, t);
        dfs(depth + 1, partial + cost);
        st.remove(call);
      }
    }
  }
};

}  // namespace

OracleResult brute_force(const Instance& inst, const OracleConfig& cfg) {
  if (static_cast<int>(inst.ships.size()) > cfg.max_ships)
    throw OracleError("instance exceeds the oracle ship cap (" +
                      std::to_string(inst.ships.size()) + " > " +
                      std::to_string(cfg.max_ships) + ")");
  if (static_cast<int>(inst.calls.size()) > cfg.max_total_calls)
    throw OracleError("instance exceeds the oracle call cap (" +
                      std::to_string(inst.calls.size()) + " > " +
                      std::to_string(cfg.max_total_calls) + ")");
  Searcher s(inst, cfg);
  double space = s.space_estimate();
  if (space > cfg.max_space)
    throw OracleError("oracle search space estimate " + std::to_string(space) +
                      " exceeds the cap " + std::to_string(cfg.max_space));
  s.seed();
  s.dfs(0, 0.0);
  if (!s.have_solution) throw OracleError("oracle found no feasible solution");
  OracleResult res;
  res.solution = s.best;
  res.objective = s.best_obj;
  res.nodes = s.nodes;
  return res;
}

// ---------------------------------------------------------------------------
// LP export

namespace {

struct VisitRef {
  bool external = false;
  int idx = 0; // call id or external index
  std::string token;
  int port = 0;
  double length = 0;
};

std::string num(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

// Linear expression writer: coefficient-variable pairs on one logical line.
struct Expr {
  std::string text;
  void add(double coef, const std::string& var) {
    if (coef == 0) return;
    if (text.empty()) {
      if (coef < 0) text += "- ";
    } else {
      text += coef < 0 ? " - " : " + ";
    }
    double a = std::abs(coef);
    if (a != 1.0) {
      text += num(a);
      text += ' ';
    }
    text += var;
  }
};

std::vector<VisitRef> all_visits(const Instance& inst) {
  std::vector<VisitRef> visits;
  for (const PortCall& c : inst.calls) {
    VisitRef v;
    v.external = false;
    v.idx = c.id;
    v.token = "s" + std::to_string(c.ship) + "c" + std::to_string(c.call_index);
    v.port = c.port;
    v.length = inst.ships[c.ship].length;
    visits.push_back(v);
  }
  for (std::size_t k = 0; k < inst.externals.size(); ++k) {
    VisitRef v;
    v.external = true;
    v.idx = static_cast<int>(k);
    v.token = "e" + std::to_string(k);
    v.port = inst.externals[k].port;
    v.length = inst.externals[k].length;
    visits.push_back(v);
  }
  return visits;
}

}  // namespace

std::string export_lp_string(const Instance& inst) {
  const CostRates& r = inst.rates;
  std::vector<VisitRef> visits = all_visits(inst);
  std::ostringstream out;
  out << "\\ MCBAP model: berth positions/times, speed choices, ordering binaries\n";
  out << "\\ visits: s<ship>c<call> optimized, e<k> external (fixed via bounds)\n";

  Expr obj;
  for (const PortCall& c : inst.calls) {
    std::string tok = visits[c.id].token;
    obj.add(r.waiting_rate, "y_" + tok);
    obj.add(-r.waiting_rate, "a_" + tok);
    obj.add(r.handling_rate, "h_" + tok);
    obj.add(r.delay_rate, "d_" + tok);
    obj.add(r.lft_penalty_rate, "u_" + tok);
    if (inst.next_call(c.id) >= 0) {
      double dist = inst.leg_distance(c.id);
      for (std::size_t s = 0; s < inst.speeds.size(); ++s)
        obj.add(leg_fuel_cost(inst.ships[c.ship], inst.speeds[s], dist, r),
                "v_" + tok + "_" + std::to_string(s));
    }
  }
  out << "Minimize\n obj: " << obj.text << "\n";
  out << "Subject To\n";

  auto row = [&](const std::string& name, const Expr& e, const char* rel, double rhs) {
    out << ' ' << name << ": " << (e.text.empty() ? "0 zero" : e.text) << ' ' << rel << ' '
        << num(rhs) << '\n';
  };

  for (const PortCall& c : inst.calls) {
    const std::string tok = visits[c.id].token;
    const Ship& ship = inst.ships[c.ship];
    const Port& port = inst.ports[c.port];
    {
      Expr e;
      e.add(1, "x_" + tok);
      row("ql_" + tok, e, "<=", port.quay_length - ship.length);
    }
    {
      Expr e;
      e.add(1, "a_" + tok);
      e.add(-1, "y_" + tok);
      row("ar_" + tok, e, "<=", 0);
    }
    {
      Expr e;
      e.add(1, "y_" + tok);
      row("es_" + tok, e, ">=", c.est);
    }
    {
      Expr e;
      e.add(1, "y_" + tok);
      e.add(1, "h_" + tok);
      e.add(-1, "d_" + tok);
      row("dd_" + tok, e, "<=", c.eft);
    }
    {
      Expr e;
      e.add(1, "y_" + tok);
      e.add(1, "h_" + tok);
      e.add(-1, "u_" + tok);
      row("uu_" + tok, e, "<=", c.lft);
    }
    {
      Expr e;
      e.add(1, "h_" + tok);
      e.add(-r.deviation_factor * c.base_handling, "r_" + tok);
      row("hh_" + tok, e, "=", c.base_handling);
    }
    {
      Expr e;
      e.add(1, "x_" + tok);
      e.add(-1, "r_" + tok);
      row("rp_" + tok, e, "<=", c.ideal_position);
    }
    {
      Expr e;
      e.add(-1, "x_" + tok);
      e.add(-1, "r_" + tok);
      row("rm_" + tok, e, "<=", -c.ideal_position);
    }
    int next = inst.next_call(c.id);
    if (next >= 0) {
      double dist = inst.leg_distance(c.id);
      Expr e;
      e.add(1, "y_" + tok);
      e.add(1, "h_" + tok);
      for (std::size_t s = 0; s < inst.speeds.size(); ++s)
        e.add(inst.speeds[s].hours_per_nm * dist, "v_" + tok + "_" + std::to_string(s));
      e.add(-1, "a_" + visits[next].token);
      row("tr_" + tok, e, "=", 0);
      Expr one;
      for (std::size_t s = 0; s < inst.speeds.size(); ++s)
        one.add(1, "v_" + tok + "_" + std::to_string(s));
      row("sp_" + tok, one, "=", 1);
    }
  }

  // Pairwise ordering at shared ports.
  for (std::size_t i = 0; i < visits.size(); ++i) {
    for (std::size_t j = 0; j < visits.size(); ++j) {
      if (i == j || visits[i].port != visits[j].port) continue;
      const VisitRef& A = visits[i];
      const VisitRef& B = visits[j];
      const Port& port = inst.ports[A.port];
      {
        Expr e; // x_A + l_A <= x_B + L (1 - sg_A_B)
        e.add(1, "x_" + A.token);
        e.add(-1, "x_" + B.token);
        e.add(port.quay_length, "sg_" + A.token + "_" + B.token);
        row("lr_" + A.token + "_" + B.token, e, "<=", port.quay_length - A.length);
      }
      {
        Expr e; // y_A + h_A <= y_B + M (1 - dl_A_B)
        e.add(1, "y_" + A.token);
        e.add(1, "h_" + A.token);
        e.add(-1, "y_" + B.token);
        e.add(inst.horizon, "dl_" + A.token + "_" + B.token);
        row("td_" + A.token + "_" + B.token, e, "<=", inst.horizon);
      }
      if (i < j) {
        Expr e;
        e.add(1, "sg_" + A.token + "_" + B.token);
        e.add(1, "sg_" + B.token + "_" + A.token);
        e.add(1, "dl_" + A.token + "_" + B.token);
        e.add(1, "dl_" + B.token + "_" + A.token);
        row("ov_" + A.token + "_" + B.token, e, ">=", 1);
      }
    }
  }

  out << "Bounds\n";
  for (std::size_t k = 0; k < inst.externals.size(); ++k) {
    const ExternalBerth& e = inst.externals[k];
    std::string tok = "e" + std::to_string(k);
    out << " x_" << tok << " = " << num(e.position) << "\n";
    out << " y_" << tok << " = " << num(e.start) << "\n";
    out << " h_" << tok << " = " << num(e.duration) << "\n";
  }

  out << "Binary\n";
  for (const PortCall& c : inst.calls)
    if (inst.next_call(c.id) >= 0)
      for (std::size_t s = 0; s < inst.speeds.size(); ++s)
        out << " v_" << visits[c.id].token << "_" << s << "\n";
  for (std::size_t i = 0; i < visits.size(); ++i)
    for (std::size_t j = 0; j < visits.size(); ++j)
      if (i != j && visits[i].port == visits[j].port)
        out << " sg_" << visits[i].token << "_" << visits[j].token << "\n"
            << " dl_" << visits[i].token << "_" << visits[j].token << "\n";
  out << "End\n";
  return out.str();
}

void export_lp(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << export_lp_string(inst);
  if (!out) throw IoError("write failed: " + path);
}

// ---------------------------------------------------------------------------
// Substitution checker: parse the documented LP subset back and evaluate rows.

namespace {

struct LpTerm {
  double coef;
  std::string var;
};

struct LpRow {
  std::string name;
  std::vector<LpTerm> terms;
  int rel = 0; // -1: <=, 0: =, 1: >=
  double rhs = 0;
};

struct LpModel {
  std::vector<LpTerm> objective;
  std::vector<LpRow> rows;
  std::vector<std::pair<std::string, double>> fixed; // from Bounds
};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::vector<LpTerm> parse_terms(const std::string& text, std::size_t& pos) {
  std::vector<LpTerm> terms;
  double sign = 1;
  bool have_coef = false;
  double coef = 1;
  while (pos < text.size()) {
    char ch = text[pos];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++pos;
      continue;
    }
    if (ch == '+') {
      sign = 1;
      ++pos;
      continue;
    }
    if (ch == '-') {
      sign = -sign;
      ++pos;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
      std::size_t end = pos;
      while (end < text.size() &&
             (std::isdigit(static_cast<unsigned char>(text[end])) || text[end] == '.' ||
              text[end] == 'e' || text[end] == 'E' ||
              ((text[end] == '+' || text[end] == '-') &&
               (text[end - 1] == 'e' || text[end - 1] == 'E'))))
        ++end;
      coef = std::stod(text.substr(pos, end - pos));
      have_coef = true;
      pos = end;
      continue;
    }
    if (is_ident_start(ch)) {
      std::size_t end = pos;
      while (end < text.size() && is_ident(text[end])) ++end;
      terms.push_back({sign * (have_coef ? coef : 1.0), text.substr(pos, end - pos)});
      sign = 1;
      coef = 1;
      have_coef = false;
      pos = end;
      continue;
    }
    break; // relation or end of expression
  }
  return terms;
}

LpModel parse_lp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  LpModel model;
  std::string line;
  enum Section { None, Objective, Rows, Bounds, Binaries } section = None;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '\\') continue;
    std::string trimmed = line;
    while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.front())))
      trimmed.erase(trimmed.begin());
    if (trimmed == "Minimize") {
      section = Objective;
      continue;
    }
    if (trimmed == "Subject To") {
      section = Rows;
      continue;
    }
    if (trimmed == "Bounds") {
      section = Bounds;
      continue;
    }
    if (trimmed == "Binary") {
      section = Binaries;
      continue;
    }
    if (trimmed == "End") break;
    switch (section) {
      case Objective: {
        std::size_t colon = trimmed.find(':');
        std::string expr = colon == std::string::npos ? trimmed : trimmed.substr(colon + 1);
        std::size_t pos = 0;
        for (LpTerm& t : parse_terms(expr, pos)) model.objective.push_back(t);
        break;
      }
      case Rows: {
        std::size_t colon = trimmed.find(':');
        if (colon == std::string::npos) throw IoError(path + ": malformed row: " + trimmed);
        LpRow row;
        row.name = trimmed.substr(0, colon);
        std::string rest = trimmed.substr(colon + 1);
        std::size_t pos = 0;
        row.terms = parse_terms(rest, pos);
        while (pos < rest.size() && std::isspace(static_cast<unsigned char>(rest[pos]))) ++pos;
        if (pos + 1 < rest.size() && rest[pos] == '<' && rest[pos + 1] == '=') {
          row.rel = -1;
          pos += 2;
        } else if (pos + 1 < rest.size() && rest[pos] == '>' && rest[pos + 1] == '=') {
          row.rel = 1;
          pos += 2;
        } else if (pos < rest.size() && rest[pos] == '=') {
          row.rel = 0;
          pos += 1;
        } else {
          throw IoError(path + ": missing relation in row " + row.name);
        }
        row.rhs = std::stod(rest.substr(pos));
        model.rows.push_back(std::move(row));
        break;
      }
      case Bounds: {
        std::size_t eq = trimmed.find('=');
        if (eq == std::string::npos) throw IoError(path + ": malformed bound: " + trimmed);
        std::string var = trimmed.substr(0, eq);
        while (!var.empty() && std::isspace(static_cast<unsigned char>(var.back())))
          var.pop_back();
        model.fixed.emplace_back(var, std::stod(trimmed.substr(eq + 1)));
        break;
      }
      case Binaries:
      case None:
        break;
    }
  }
  return model;
}

}  // namespace

LpCheckReport substitute_and_check(const Instance& inst, const std::string& lp_path,
                                   const Solution& sol) {
  if (sol.assignments.size() != inst.calls.size())
    throw std::invalid_argument("substitute_and_check: solution/instance size mismatch");
  LpModel model = parse_lp(lp_path);
  std::vector<VisitRef> visits = all_visits(inst);

  // Rectangle data per visit for the binary inference.
  struct Geo {
    double x, y, h;
  };
  std::vector<Geo> geo(visits.size());
  std::map<std::string, double> value;
  for (const PortCall& c : inst.calls) {
    const std::string tok = visits[c.id].token;
    const Assignment& a = sol.assignments[c.id];
    double h = handling_time(inst, c, a.position);
    geo[c.id] = {a.position, a.start, h};
    double arr;
    int prev = inst.prev_call(c.id);
    if (prev >= 0) {
      arr = arrival_time(inst, inst.calls[prev], sol.assignments[prev], inst.leg_distance(prev));
    } else {
      arr = a.start; // first call of a route waits for nothing
    }
    value["x_" + tok] = a.position;
    value["y_" + tok] = a.start;
    value["a_" + tok] = arr;
    value["h_" + tok] = h;
    value["d_" + tok] = std::max(0.0, a.start + h - c.eft);
    value["u_" + tok] = std::max(0.0, a.start + h - c.lft);
    value["r_" + tok] = std::abs(a.position - c.ideal_position);
    if (inst.next_call(c.id) >= 0)
      for (std::size_t s = 0; s < inst.speeds.size(); ++s)
        value["v_" + tok + "_" + std::to_string(s)] =
            a.leg_speed == static_cast<int>(s) ? 1.0 : 0.0;
  }
  for (std::size_t k = 0; k < inst.externals.size(); ++k) {
    const ExternalBerth& e = inst.externals[k];
    std::size_t vi = inst.calls.size() + k;
    geo[vi] = {e.position, e.start, e.duration};
    const std::string tok = visits[vi].token;
    value["x_" + tok] = e.position;
    value["y_" + tok] = e.start;
    value["h_" + tok] = e.duration;
  }
  // Canonical ordering binaries from the geometry.
  for (std::size_t i = 0; i < visits.size(); ++i) {
    for (std::size_t j = 0; j < visits.size(); ++j) {
      if (i == j || visits[i].port != visits[j].port) continue;
      const std::string key = visits[i].token + "_" + visits[j].token;
      value["sg_" + key] =
          geo[i].x + visits[i].length <= geo[j].x + kGeomEps ? 1.0 : 0.0;
      value["dl_" + key] = geo[i].y + geo[i].h <= geo[j].y + kGeomEps ? 1.0 : 0.0;
    }
  }

  auto lookup = [&](const std::string& var) {
    auto it = value.find(var);
    if (it == value.end())
      throw std::invalid_argument("substitute_and_check: model variable " + var +
                                  " does not belong to this instance");
    return it->second;
  };

  LpCheckReport report;
  for (const LpRow& row : model.rows) {
    double lhs = 0;
    for (const LpTerm& t : row.terms) lhs += t.coef * lookup(t.var);
    double tol = 1e-6 * std::max({1.0, std::abs(lhs), std::abs(row.rhs)});
    bool bad = (row.rel == -1 && lhs > row.rhs + tol) || (row.rel == 1 && lhs < row.rhs - tol) ||
               (row.rel == 0 && std::abs(lhs - row.rhs) > tol);
    if (bad) report.violated_rows.push_back(row.name);
    report.rows_checked++;
  }
  for (const auto& [var, fixed] : model.fixed) {
    double have = lookup(var);
    report.rows_checked++;
    if (std::abs(have - fixed) > 1e-6 * std::max(1.0, std::abs(fixed)))
      report.violated_rows.push_back("bound:" + var);
  }
  for (const LpTerm& t : model.objective) report.objective += t.coef * lookup(t.var);
  return report;
}

}  // namespace mcbap
