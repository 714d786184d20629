#include "mcbap/search.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <deque>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "mcbap/construct.hpp"

namespace mcbap {

LsPolicy ls_policy_from_name(const std::string& name) {
  if (name == "on-improve") return LsPolicy::OnImprove;
  if (name == "every") return LsPolicy::Every;
  if (name == "every2") return LsPolicy::Every2;
  if (name == "every4") return LsPolicy::Every4;
  if (name == "off") return LsPolicy::Off;
  throw std::invalid_argument("unknown local-search policy: " + name);
}

const char* ls_policy_name(LsPolicy p) {
  switch (p) {
    case LsPolicy::OnImprove: return "on-improve";
    case LsPolicy::Every: return "every";
    case LsPolicy::Every2: return "every2";
    case LsPolicy::Every4: return "every4";
    case LsPolicy::Off: return "off";
  }
  return "?";
}

void validate_params(const SearchParams& p) {
  auto check = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("parameter out of tuned range: ") + what);
  };
  check(p.time_limit >= 0, "time_limit");
  check(p.max_iterations >= 0, "max_iterations");
  check(p.cooling_share >= 0.005 && p.cooling_share <= 0.2, "cooling_share");
  check(p.start_temp_frac >= 0.01 && p.start_temp_frac <= 0.05, "start_temp_frac");
  check(p.end_temp_frac >= 0.00005 && p.end_temp_frac <= 0.001, "end_temp_frac");
  check(p.destroy_fraction >= 0.3 && p.destroy_fraction <= 0.6, "destroy_fraction");
  check(p.shaw_pos_weight >= 0.5 && p.shaw_pos_weight <= 2, "shaw_pos_weight");
  check(p.shaw_start_weight >= 0.5 && p.shaw_start_weight <= 2, "shaw_start_weight");
  check(p.shaw_end_weight >= 0.5 && p.shaw_end_weight <= 2, "shaw_end_weight");
  check(p.shaw_alpha >= 1 && p.shaw_alpha <= 3, "shaw_alpha");
  check(p.greedy_gamma >= 1 && p.greedy_gamma <= 3, "greedy_gamma");
  check(p.arrival_mu >= 1 && p.arrival_mu <= 3, "arrival_mu");
  check(p.regret_k >= 2 && p.regret_k <= 4, "regret_k");
  check(p.update_interval >= 0.01 && p.update_interval <= 0.05, "update_interval");
  if (p.adaptive) check(p.adaptability >= 0.3 && p.adaptability <= 0.7, "adaptability");
  check(p.reward_new_best >= 10 && p.reward_new_best <= 20, "reward_new_best");
  check(p.reward_better >= 4 && p.reward_better <= 8, "reward_better");
  check(p.reward_accepted >= 1 && p.reward_accepted <= 3, "reward_accepted");
  check(p.reward_rejected == 0, "reward_rejected");
  check(p.position_bound_factor >= 2 && p.position_bound_factor <= 5, "position_bound_factor");
}

bool sa_accept(double f_new, double f_cur, double temperature, Rng& rng) {
  if (!(temperature > 0)) throw std::domain_error("sa_accept: temperature must be > 0");
  if (f_new < f_cur) return true;
  return rng.uniform() < std::exp(-(f_new - f_cur) / temperature);
}

double cooling_factor(double t_start, double t_end, double cooling_time) {
  if (!(t_start > t_end) || !(t_end > 0))
    throw std::domain_error("cooling_factor: need t_start > t_end > 0");
  if (!(cooling_time > 0)) throw std::domain_error("cooling_factor: cooling_time must be > 0");
  return std::pow(t_end / t_start, 1.0 / cooling_time);
}

int default_k_chain(const Instance& inst) {
  return 2 * static_cast<int>(inst.ships.size() + inst.externals.size());
}

namespace {

enum class Dir { TowardIdeal, Earlier, Later };

std::optional<Solution> try_chain(const ScheduleState& base, int seed, Dir dir, int k_chain,
                                  int* chain_len) {
  const Instance& inst = base.inst();
  double dx = 0, dt = 0;
  if (dir == Dir::TowardIdeal) {
    const PortCall& c = inst.calls[seed];
    const Assignment& a = base.solution().assignments[seed];
    double seg = inst.ports[c.port].segment_length;
    if (a.position < c.ideal_position - kGeomEps) {
      dx = seg;
    } else if (a.position > c.ideal_position + kGeomEps) {
      dx = -seg;
    } else {
      return std::nullopt; // already at the ideal position
    }
  } else {
    dt = dir == Dir::Earlier ? -inst.time_step : inst.time_step;
  }

  ScheduleState st = base;
  std::deque<int> queue{seed};
  int moves = 0;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    if (++moves > k_chain) return std::nullopt;
    const PortCall& c = inst.calls[v];
    const Ship& ship = inst.ships[c.ship];
    const Port& port = inst.ports[c.port];
    const Assignment a = st.solution().assignments[v];
    double nx = a.position + dx;
    double nt = a.start + dt;
    if (nx < -kGeomEps || nx + ship.length > port.quay_length + kGeomEps) return std::nullopt;
    if (nt < c.est - kGeomEps) return std::nullopt;
    st.remove(v);
    if (!st.speeds_feasible(v, nx, nt)) return std::nullopt;
    st.place(v, nx, nt);
    bool hits_external = false;
    for (int other : st.conflicts(v, &hits_external)) {
      if (std::find(queue.begin(), queue.end(), other) == queue.end()) queue.push_back(other);
    }
    if (hits_external) return std::nullopt; // fixed berths cannot be pushed
  }
  if (chain_len) *chain_len = moves;
  return st.solution();
}

}  // namespace

Solution local_search(const Instance& inst, const Solution& sol, int k_chain,
                      LocalSearchStats* stats, std::shared_ptr<const PlannerCache> cache) {
  constexpr double kImprove = 1e-6; // strictly-improving threshold, in USD
  Solution cur = sol;
  double f_cur = evaluate(inst, cur).total;

  // Visit order: port by port, calls in id order (Alg-style sweep).
  std::vector<std::vector<int>> calls_at_port(inst.ports.size());
  for (const PortCall& c : inst.calls) calls_at_port[c.port].push_back(c.id);

  bool improved = true;
  while (improved) {
    improved = false;
    ScheduleState base(inst, cur, cache);
    double best_delta = -kImprove;
    Solution best_sol;
    for (const auto& port_calls : calls_at_port) {
      for (int call : port_calls) {
        for (Dir dir : {Dir::TowardIdeal, Dir::Earlier, Dir::Later}) {
          int chain_len = 0;
          std::optional<Solution> next = try_chain(base, call, dir, k_chain, &chain_len);
          if (!next) continue;
          if (stats) {
            stats->chains_built++;
            stats->longest_chain = std::max(stats->longest_chain, chain_len);
          }
          double delta = evaluate(inst, *next).total - f_cur;
          if (delta < best_delta) {
            best_delta = delta;
            best_sol = std::move(*next);
          }
        }
      }
    }
    if (best_delta < -kImprove) {
      cur = std::move(best_sol);
      f_cur = evaluate(inst, cur).total;
      improved = true;
      if (stats) stats->improvements++;
    }
  }
  return cur;
}

namespace {

std::vector<int> run_removal(int op, ScheduleState& st, int K, const SearchParams& p,
                             Rng& rng) {
  switch (op) {
    case 0:
      return shaw_removal(st, K, p.shaw_alpha,
                          {p.shaw_pos_weight, p.shaw_start_weight, p.shaw_end_weight}, rng);
    case 1: return cost_time_removal(st, K, p.shaw_alpha, rng);
    case 2: return cost_space_removal(st, K, p.shaw_alpha, rng);
    default: return random_removal(st, K, rng);
  }
}

void run_insertion(int op, ScheduleState& st, const std::vector<int>& removed,
                   const SearchParams& p, Rng& rng) {
  switch (op) {
    case 0: greedy_insertion(st, removed, p.greedy_gamma, rng); break;
    case 1: kregret_insertion(st, removed, p.regret_k); break;
    case 2: packing_insertion(st, removed, p.greedy_gamma, rng); break;
    default: arrival_insertion(st, removed, p.arrival_mu, rng); break;
  }
}

double format_guard(double v) { return v == 0 ? 0 : v; } // normalize -0 in CSVs

void append_double(std::string& out, double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, format_guard(v));
  out.append(buf, ptr);
}

}  // namespace

SearchResult run_alns(const Instance& inst, const SearchParams& params) {
  auto cache = std::make_shared<const PlannerCache>(inst);
  Rng rng(params.seed);

  SearchResult res;
  Solution cur = construct(inst, cache);
  double f_cur = evaluate(inst, cur).total;
  res.construction_objective = f_cur;
  res.best = cur;
  res.best_objective = f_cur;
  if (params.time_limit <= 0) return res;

  const double lambda = params.adaptive ? params.adaptability : 0.0;
  OperatorBank bank(lambda, {params.reward_new_best, params.reward_better,
                             params.reward_accepted, params.reward_rejected});
  const int K =
      std::max(1, static_cast<int>(std::llround(params.destroy_fraction *
                                                static_cast<double>(inst.calls.size()))));
  const int k_chain = default_k_chain(inst);

  const double f0 = f_cur;
  const double t_start = params.start_temp_frac * f0;
  const double t_end = params.end_temp_frac * f0;
  const bool sa_enabled = t_start > t_end && t_end > 0;
  const double tau =
      sa_enabled ? cooling_factor(t_start, t_end, params.cooling_share * params.time_limit)
                 : 1.0;
  double temperature = t_start;

  const bool virtual_clock = params.max_iterations > 0;
  const double vt_step =
      virtual_clock ? params.time_limit / static_cast<double>(params.max_iterations) : 0.0;
  const auto wall_start = std::chrono::steady_clock::now();
  auto wall_now = [&]() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  };

  double update_every = params.update_interval * params.time_limit;
  double next_update = update_every;
  auto snapshot = [&](double now, long long it) {
    OperatorSnapshot s;
    s.time = now;
    s.iteration = it;
    s.removal_probs = bank.removal_probabilities();
    s.insertion_probs = bank.insertion_probabilities();
    s.removal_uses = bank.removal_uses();
    s.insertion_uses = bank.insertion_uses();
    s.removal_successes = bank.removal_successes();
    s.insertion_successes = bank.insertion_successes();
    res.operator_trace.push_back(s);
  };
  snapshot(0.0, 0);

  long long it = 0;
  double now = 0;
  while (true) {
    if (virtual_clock) {
      if (it >= params.max_iterations) break;
    } else {
      now = wall_now();
      if (now >= params.time_limit) break;
    }
    ++it;
    const double iter_begin = virtual_clock ? (it - 1) * vt_step : now;

    int rop = bank.select_removal(rng);
    int iop = bank.select_insertion(rng);
    ScheduleState st(inst, cur, cache);
    std::vector<int> removed = run_removal(rop, st, K, params, rng);
    run_insertion(iop, st, removed, params, rng);
    Solution cand = st.solution();
    double f_cand = evaluate(inst, cand).total;

    bool run_ls = false;
    switch (params.ls_policy) {
      case LsPolicy::OnImprove: run_ls = f_cand < f_cur; break;
      case LsPolicy::Every: run_ls = true; break;
      case LsPolicy::Every2: run_ls = it % 2 == 0; break;
      case LsPolicy::Every4: run_ls = it % 4 == 0; break;
      case LsPolicy::Off: run_ls = false; break;
    }
    if (run_ls) {
      cand = local_search(inst, cand, k_chain, &res.ls_stats, cache);
      f_cand = evaluate(inst, cand).total;
    }

    Outcome outcome;
    bool accepted;
    if (f_cand < res.best_objective) {
      outcome = Outcome::NewBest;
      accepted = true;
    } else if (f_cand < f_cur) {
      outcome = Outcome::Better;
      accepted = true;
    } else if (sa_enabled && sa_accept(f_cand, f_cur, temperature, rng)) {
      outcome = Outcome::Accepted;
      accepted = true;
    } else if (!sa_enabled && f_cand == f_cur) {
      outcome = Outcome::Accepted;
      accepted = true;
    } else {
      outcome = Outcome::Rejected;
      accepted = false;
    }
    if (accepted) {
      cur = cand;
      f_cur = f_cand;
      if (f_cand < res.best_objective) {
        res.best = cand;
        res.best_objective = f_cand;
      }
    }
    bank.record(rop, iop, outcome);

    const double used_temperature = temperature;
    now = virtual_clock ? it * vt_step : wall_now();
    if (sa_enabled) {
      double t_it = now - iter_begin;
      temperature *= std::pow(tau, t_it);
      if (temperature <= t_end) temperature = t_start; // reheat
    }
    res.trace.push_back({now, it, f_cur, res.best_objective, used_temperature, rop, iop, outcome});
    if (now >= next_update) {
      bank.update();
      snapshot(now, it);
      while (next_update <= now) next_update += update_every;
    }
  }
  res.iterations = it;
  return res;
}

std::string trace_to_csv(const SearchResult& r) {
  std::string out = "time_s,iteration,current_objective,best_objective,temperature,"
                    "removal,insertion,outcome\n";
  static const char* outcome_names[] = {"new_best", "better", "accepted", "rejected"};
  for (const TraceRow& row : r.trace) {
    append_double(out, row.time);
    out += ',';
    out += std::to_string(row.iteration);
    out += ',';
    append_double(out, row.current);
    out += ',';
    append_double(out, row.best);
    out += ',';
    append_double(out, row.temperature);
    out += ',';
    out += removal_op_name(row.removal_op);
    out += ',';
    out += insertion_op_name(row.insertion_op);
    out += ',';
    out += outcome_names[static_cast<int>(row.outcome)];
    out += '\n';
  }
  return out;
}

std::string operator_trace_to_csv(const SearchResult& r) {
  std::string out = "time_s,iteration,family,operator,probability,uses,successes\n";
  for (const OperatorSnapshot& s : r.operator_trace) {
    for (int i = 0; i < kNumRemovalOps; ++i) {
      append_double(out, s.time);
      out += ',';
      out += std::to_string(s.iteration);
      out += ",removal,";
      out += removal_op_name(i);
      out += ',';
      append_double(out, s.removal_probs[i]);
      out += ',';
      out += std::to_string(s.removal_uses[i]);
      out += ',';
      out += std::to_string(s.removal_successes[i]);
      out += '\n';
    }
    for (int i = 0; i < kNumInsertionOps; ++i) {
      append_double(out, s.time);
      out += ',';
      out += std::to_string(s.iteration);
      out += ",insertion,";
      out += insertion_op_name(i);
      out += ',';
      append_double(out, s.insertion_probs[i]);
      out += ',';
      out += std::to_string(s.insertion_uses[i]);
      out += ',';
      out += std::to_string(s.insertion_successes[i]);
      out += '\n';
    }
  }
  return out;
}

}  // namespace mcbap
