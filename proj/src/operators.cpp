#include "mcbap/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mcbap/construct.hpp"

namespace mcbap {

int randomized_index(int n, double alpha, double p) {
  if (n < 1) throw std::domain_error("randomized_index: n must be >= 1");
  int i = static_cast<int>(std::ceil(n * std::pow(p, alpha)));
  return std::clamp(i, 1, n);
}

double relatedness(const Instance& inst, const Solution& sol, int call_i, int call_j,
                   double pos_weight, double start_weight, double end_weight) {
  const Assignment& a = sol.assignments[call_i];
  const Assignment& b = sol.assignments[call_j];
  double ha = handling_time(inst, inst.calls[call_i], a.position);
  double hb = handling_time(inst, inst.calls[call_j], b.position);
  return pos_weight * std::abs(a.position - b.position) +
         start_weight * std::abs(a.start - b.start) +
         end_weight * std::abs((a.start + ha) - (b.start + hb));
}

namespace {

std::vector<int> scheduled_calls(const ScheduleState& st) {
  std::vector<int> out;
  for (std::size_t c = 0; c < st.inst().calls.size(); ++c)
    if (st.scheduled(static_cast<int>(c))) out.push_back(static_cast<int>(c));
  return out;
}

void apply_removals(ScheduleState& st, std::vector<int>& removed, int K) {
  if (static_cast<int>(removed.size()) > K) removed.resize(K); // trim the overshoot
  for (int c : removed) st.remove(c);
}

}  // namespace

std::vector<int> shaw_removal(ScheduleState& st, int K, double alpha, const ShawWeights& w,
                              Rng& rng) {
  std::vector<int> pool = scheduled_calls(st);
  K = std::min<int>(K, static_cast<int>(pool.size()));
  std::vector<int> removed;
  if (K <= 0) return removed;

  struct Pair {
    double m;
    int a, b;
  };
  std::vector<Pair> pairs;
  pairs.reserve(pool.size() * (pool.size() - 1) / 2);
  for (std::size_t i = 0; i < pool.size(); ++i)
    for (std::size_t j = i + 1; j < pool.size(); ++j)
      pairs.push_back({relatedness(st.inst(), st.solution(), pool[i], pool[j], w.position,
                                   w.start, w.end),
                       pool[i], pool[j]});
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.m != b.m) return a.m < b.m;
    if (a.a != b.a) return a.a < b.a;
    return a.b < b.b;
  });

  std::vector<char> gone(st.inst().calls.size(), 0);
  if (pairs.empty()) { // single scheduled call: no pairs to rank
    removed.push_back(pool.front());
    apply_removals(st, removed, K);
    return removed;
  }
  int guard = 0;
  while (static_cast<int>(removed.size()) < K && guard++ < 64 * K + 1024) {
    const Pair& p = pairs[randomized_index(static_cast<int>(pairs.size()), alpha,
                                           rng.uniform()) - 1];
    for (int c : {p.a, p.b}) {
      if (!gone[c]) {
        gone[c] = 1;
        removed.push_back(c);
      }
    }
  }
  for (int c : pool) { // guard tripped on an unlucky stream: finish deterministically
    if (static_cast<int>(removed.size()) >= K) break;
    if (!gone[c]) {
      gone[c] = 1;
      removed.push_back(c);
    }
  }
  apply_removals(st, removed, K);
  return removed;
}

namespace {

// Shared body of the two cost-relatedness removals. Costs and geometry come
// from the solution as it stood at invocation.
std::vector<int> cost_band_removal(ScheduleState& st, int K, double alpha, Rng& rng,
                                   bool time_band) {
  const Instance& inst = st.inst();
  std::vector<int> pool = scheduled_calls(st);
  K = std::min<int>(K, static_cast<int>(pool.size()));
  std::vector<int> removed;
  if (K <= 0) return removed;

  struct Entry {
    double cost;
    int call;
  };
  std::vector<Entry> by_cost;
  by_cost.reserve(pool.size());
  for (int c : pool) by_cost.push_back({port_visit_cost(inst, st.solution(), c), c});
  std::sort(by_cost.begin(), by_cost.end(), [](const Entry& a, const Entry& b) {
    if (a.cost != b.cost) return a.cost > b.cost; // most expensive first
    return a.call < b.call;
  });

  // Rectangles as of the original solution.
  std::vector<double> lo(inst.calls.size()), hi(inst.calls.size());
  for (int c : pool) {
    const Assignment& a = st.solution().assignments[c];
    if (time_band) {
      lo[c] = a.start;
      hi[c] = a.start + handling_time(inst, inst.calls[c], a.position);
    } else {
      lo[c] = a.position;
      hi[c] = a.position + inst.ships[inst.calls[c].ship].length;
    }
  }

  std::vector<char> gone(inst.calls.size(), 0);
  while (static_cast<int>(removed.size()) < K && !by_cost.empty()) {
    int pick_idx = randomized_index(static_cast<int>(by_cost.size()), alpha, rng.uniform()) - 1;
    int seed = by_cost[pick_idx].call;
    by_cost.erase(by_cost.begin() + pick_idx);
    if (gone[seed]) continue;
    gone[seed] = 1;
    removed.push_back(seed);
    for (int c : pool) {
      if (gone[c] || inst.calls[c].port != inst.calls[seed].port) continue;
      if (lo[c] < hi[seed] - kGeomEps && lo[seed] < hi[c] - kGeomEps) {
        gone[c] = 1;
        removed.push_back(c);
      }
    }
  }
  apply_removals(st, removed, K);
  return removed;
}

}  // namespace

std::vector<int> cost_time_removal(ScheduleState& st, int K, double alpha, Rng& rng) {
  return cost_band_removal(st, K, alpha, rng, /*time_band=*/true);
}

std::vector<int> cost_space_removal(ScheduleState& st, int K, double alpha, Rng& rng) {
  return cost_band_removal(st, K, alpha, rng, /*time_band=*/false);
}

std::vector<int> random_removal(ScheduleState& st, int K, Rng& rng) {
  std::vector<int> pool = scheduled_calls(st);
  K = std::min<int>(K, static_cast<int>(pool.size()));
  std::vector<int> removed;
  for (int i = 0; i < K; ++i) {
    std::size_t j = i + rng.index(pool.size() - i);
    std::swap(pool[i], pool[j]);
    removed.push_back(pool[i]);
  }
  apply_removals(st, removed, K);
  return removed;
}

namespace {

// Cached per-call insertion lookups, invalidated by port/ship version bumps.
struct InsertCache {
  long long count = 0;
  std::vector<PosCandidate> best; // k cheapest positions (regret only)
  std::uint32_t port_ver = 0, ship_ver = 0;
  bool fresh = false;
};

bool cache_fresh(const ScheduleState& st, int call, const InsertCache& e) {
  const PortCall& c = st.inst().calls[call];
  return e.fresh && e.port_ver == st.port_version(c.port) &&
         e.ship_ver == st.ship_version(c.ship);
}

void stamp_cache(const ScheduleState& st, int call, InsertCache& e) {
  const PortCall& c = st.inst().calls[call];
  e.port_ver = st.port_version(c.port);
  e.ship_ver = st.ship_version(c.ship);
  e.fresh = true;
}

void refresh_count(const ScheduleState& st, int call, InsertCache& e) {
  if (cache_fresh(st, call, e)) return;
  e.count = count_positions(st, call, /*respect_successor=*/true);
  stamp_cache(st, call, e);
}

void refresh_count_and_kbest(const ScheduleState& st, int call, InsertCache& e, int k) {
  if (cache_fresh(st, call, e)) return;
  e.count = count_positions(st, call, /*respect_successor=*/true);
  e.best = kbest_positions(st, call, k);
  stamp_cache(st, call, e);
}

void place_best(ScheduleState& st, int call, const std::vector<PosCandidate>& best) {
  if (best.empty())
    throw std::logic_error("insertion: no feasible position for call " + std::to_string(call));
  st.place(call, best.front().x, best.front().t);
}

// A call can end up with no feasible position when successors already sit too
// early for any completable predecessor slot. Reopen the window by
// unscheduling the route tail; the freed calls rejoin the open list.
bool repair_if_stuck(ScheduleState& st, int call, const std::vector<PosCandidate>& best,
                     std::vector<int>& open, std::size_t& repairs) {
  if (!best.empty()) return false;
  std::vector<int> freed = free_route_successors(st, call);
  if (freed.empty() || ++repairs > 4 * st.inst().calls.size())
    throw std::logic_error("insertion: no feasible position for call " + std::to_string(call));
  open.insert(open.end(), freed.begin(), freed.end());
  return true;
}

}  // namespace

void greedy_insertion(ScheduleState& st, const std::vector<int>& removed, double gamma,
                      Rng& rng) {
  std::vector<int> open = removed;
  std::vector<InsertCache> cache(st.inst().calls.size());
  std::size_t repairs = 0;
  while (!open.empty()) {
    for (int c : open) refresh_count(st, c, cache[c]);
    std::sort(open.begin(), open.end(), [&](int a, int b) {
      if (cache[a].count != cache[b].count) return cache[a].count < cache[b].count;
      return a < b;
    });
    int pick = randomized_index(static_cast<int>(open.size()), gamma, rng.uniform()) - 1;
    int call = open[pick];
    std::vector<PosCandidate> best = kbest_positions(st, call, 1);
    if (repair_if_stuck(st, call, best, open, repairs)) continue;
    place_best(st, call, best);
    open.erase(open.begin() + pick);
  }
}

void kregret_insertion(ScheduleState& st, const std::vector<int>& removed, int kappa) {
  if (kappa < 2) throw std::domain_error("kregret_insertion: kappa must be >= 2");
  std::vector<int> open = removed;
  std::vector<InsertCache> cache(st.inst().calls.size());
  std::size_t repairs = 0;
  while (!open.empty()) {
    int pick = -1;
    double pick_regret = -kInf, pick_best_cost = -kInf;
    for (int c : open) {
      refresh(st, c, cache[c], kappa);
      const InsertCache& e = cache[c];
      double best_cost = e.best.empty() ? kInf : e.best.front().cost;
      double regret = static_cast<int>(e.best.size()) < kappa
                          ? kInf
                          : e.best[kappa - 1].cost - best_cost;
      bool better = regret > pick_regret ||
                    (regret == pick_regret &&
                     (best_cost > pick_best_cost ||
                      (best_cost == pick_best_cost && c < pick)));
      if (better) {
        pick = c;
        pick_regret = regret;
        pick_best_cost = best_cost;
      }
    }
    if (repair_if_stuck(st, pick, cache[pick].best, open, repairs)) continue;
    place_best(st, pick, cache[pick].best);
    open.erase(std::find(open.begin(), open.end(), pick));
  }
}

void packing_insertion(ScheduleState& st, const std::vector<int>& removed, double gamma,
                       Rng& rng) {
  std::vector<int> open = removed;
  std::vector<InsertCache> cache(st.inst().calls.size());
  std::size_t repairs = 0;
  while (!open.empty()) {
    for (int c : open) {
      InsertCache& e = cache[c];
      const PortCall& pc = st.inst().calls[c];
      std::uint32_t pv = st.port_version(pc.port);
      std::uint32_t sv = st.ship_version(pc.ship);
      if (!(e.fresh && e.port_ver == pv && e.ship_ver == sv)) {
        e.count = count_positions(st, c, /*respect_successor=*/true);
        std::vector<PosCandidate> cands = adjacent_positions(st, c);
        PosCandidate best;
        for (const PosCandidate& cand : cands)
          if (best.cost == kInf || candidate_less(cand, best, pc.ideal_position)) best = cand;
        e.best.clear();
        if (best.cost < kInf) {
          e.best.push_back(best);
        } else {
          e.best = kbest_positions(st, c, 1); // adjacency came up empty
        }
        e.port_ver = pv;
        e.ship_ver = sv;
        e.fresh = true;
      }
    }
    std::sort(open.begin(), open.end(), [&](int a, int b) {
      if (cache[a].count != cache[b].count) return cache[a].count < cache[b].count;
      return a < b;
    });
    int pick = randomized_index(static_cast<int>(open.size()), gamma, rng.uniform()) - 1;
    int call = open[pick];
    if (repair_if_stuck(st, call, cache[call].best, open, repairs)) continue;
    place_best(st, call, cache[call].best);
    open.erase(open.begin() + pick);
  }
}

void arrival_insertion(ScheduleState& st, const std::vector<int>& removed, double mu,
                       Rng& rng) {
  const Instance& inst = st.inst();
  std::vector<int> open = removed;
  std::vector<InsertCache> cache(inst.calls.size());
  std::size_t repairs = 0;
  auto earliest_arrival = [&](int call) {
    int prev = inst.prev_call(call);
    if (prev >= 0 && st.scheduled(prev)) {
      const Assignment& pa = st.solution().assignments[prev];
      double pend = pa.start + st.handling(prev, pa.position);
      return pend + inst.speeds.back().hours_per_nm * inst.leg_distance(prev);
    }
    return inst.calls[call].est;
  };
  while (!open.empty()) {
    for (int c : open) refresh(st, c, cache[c], 1);
    std::vector<double> key(inst.calls.size());
    for (int c : open) key[c] = earliest_arrival(c);
    std::sort(open.begin(), open.end(), [&](int a, int b) {
      if (key[a] != key[b]) return key[a] < key[b];
      return a < b;
    });
    int pick = randomized_index(static_cast<int>(open.size()), mu, rng.uniform()) - 1;
    int call = open[pick];
    if (repair_if_stuck(st, call, cache[call].best, open, repairs)) continue;
    place_best(st, call, cache[call].best);
    open.erase(open.begin() + pick);
  }
}

const char* removal_op_name(int op) {
  static const char* names[] = {"shaw", "cost_time", "cost_space", "random"};
  return names[op];
}

const char* insertion_op_name(int op) {
  static const char* names[] = {"greedy", "kregret", "packing", "arrival"};
  return names[op];
}

OperatorBank::OperatorBank(double lambda, const std::array<double, 4>& rewards)
    : lambda_(lambda), rewards_(rewards) {}

void OperatorBank::record(int removal_op, int insertion_op, Outcome outcome) {
  double reward = rewards_[static_cast<int>(outcome)];
  removal_[removal_op].score += reward;
  insertion_[insertion_op].score += reward;
  removal_[removal_op].uses++;
  insertion_[insertion_op].uses++;
  if (outcome == Outcome::NewBest || outcome == Outcome::Better) {
    removal_[removal_op].successes++;
    insertion_[insertion_op].successes++;
  }
}

template <std::size_t N>
void OperatorBank::renormalize(std::array<Op, N>& fam) {
  double sum = 0;
  for (const Op& o : fam) sum += o.weight;
  if (sum <= 0) {
    for (Op& o : fam) o.probability = 1.0 / N;
  } else {
    for (Op& o : fam) o.probability = o.weight / sum;
  }
}

void OperatorBank::update() {
  for (Op& o : removal_) {
    o.weight = (1.0 - lambda_) * o.weight + lambda_ * o.score;
    o.score = 0;
  }
  for (Op& o : insertion_) {
    o.weight = (1.0 - lambda_) * o.weight + lambda_ * o.score;
    o.score = 0;
  }
  renormalize(removal_);
  renormalize(insertion_);
}

std::array<double, kNumRemovalOps> OperatorBank::removal_probabilities() const {
  std::array<double, kNumRemovalOps> out;
  for (int i = 0; i < kNumRemovalOps; ++i) out[i] = removal_[i].probability;
  return out;
}

std::array<double, kNumInsertionOps> OperatorBank::insertion_probabilities() const {
  std::array<double, kNumInsertionOps> out;
  for (int i = 0; i < kNumInsertionOps; ++i) out[i] = insertion_[i].probability;
  return out;
}

std::array<long long, kNumRemovalOps> OperatorBank::removal_uses() const {
  std::array<long long, kNumRemovalOps> out;
  for (int i = 0; i < kNumRemovalOps; ++i) out[i] = removal_[i].uses;
  return out;
}

std::array<long long, kNumInsertionOps> OperatorBank::insertion_uses() const {
  std::array<long long, kNumInsertionOps> out;
  for (int i = 0; i < kNumInsertionOps; ++i) out[i] = insertion_[i].uses;
  return out;
}

std::array<long long, kNumRemovalOps> OperatorBank::removal_successes() const {
  std::array<long long, kNumRemovalOps> out;
  for (int i = 0; i < kNumRemovalOps; ++i) out[i] = removal_[i].successes;
  return out;
}

std::array<long long, kNumInsertionOps> OperatorBank::insertion_successes() const {
  std::array<long long, kNumInsertionOps> out;
  for (int i = 0; i < kNumInsertionOps; ++i) out[i] = insertion_[i].successes;
  return out;
}

}  // namespace mcbap
