#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mcbap/operators.hpp"
#include "mcbap/planner.hpp"
#include "mcbap/rng.hpp"

namespace mcbap {

enum class LsPolicy : int { OnImprove = 0, Every = 1, Every2 = 2, Every4 = 4, Off = -1 };

LsPolicy ls_policy_from_name(const std::string& name);
const char* ls_policy_name(LsPolicy p);

struct SearchParams {
  double time_limit = 300.0; // seconds
  std::uint64_t seed = 1;
  // 0 = wall-clock run; > 0 switches to a deterministic virtual clock where
  // every iteration lasts time_limit / max_iterations seconds.
  long long max_iterations = 0;

  double cooling_share = 0.157;      // share of the time limit spent cooling
  double start_temp_frac = 0.0246;   // of the construction objective
  double end_temp_frac = 0.000269;   // reheat once the temperature falls here
  double destroy_fraction = 0.326;   // share of port visits removed per iteration
  double shaw_pos_weight = 0.55;
  double shaw_start_weight = 1.36;
  double shaw_end_weight = 0.89;
  double shaw_alpha = 2.66;
  double greedy_gamma = 2.85;
  double arrival_mu = 2.6;
  int regret_k = 2;
  double update_interval = 0.017;    // share of the time limit between weight updates
  double adaptability = 0.456;       // 0 freezes the operator probabilities
  double reward_new_best = 11;
  double reward_better = 4;
  double reward_accepted = 2;
  double reward_rejected = 0;
  double position_bound_factor = 4.02; // instance-generation coupling, kept with the set

  bool adaptive = true;              // false runs the plain LNS variant (adaptability 0)
  LsPolicy ls_policy = LsPolicy::OnImprove;
};

// Throws std::invalid_argument when a parameter leaves its tuned range.
void validate_params(const SearchParams& p);

// True when the candidate is better, otherwise true with probability
// exp(-(f_new - f_cur) / temperature).
bool sa_accept(double f_new, double f_cur, double temperature, Rng& rng);

// tau with t_end = t_start * tau^cooling_time.
double cooling_factor(double t_start, double t_end, double cooling_time);

struct LocalSearchStats {
  long long chains_built = 0;
  long long improvements = 0;
  int longest_chain = 0; // moves in any applied or evaluated chain
};

// Steepest-descent ejection chains: nudge one visit one grid step (toward its
// ideal position, or one step earlier or later) and shift conflicting visits
// in the same direction, up to k_chain moves per chain. Never returns a worse
// or infeasible solution.
Solution local_search(const Instance& inst, const Solution& sol, int k_chain,
                      LocalSearchStats* stats = nullptr,
                      std::shared_ptr<const PlannerCache> cache = nullptr);

int default_k_chain(const Instance& inst); // 2 * (ships + external berths)

struct TraceRow {
  double time = 0; // seconds (virtual seconds under an iteration cap)
  long long iteration = 0;
  double current = 0;
  double best = 0;
  double temperature = 0;
  int removal_op = 0;
  int insertion_op = 0;
  Outcome outcome = Outcome::Rejected;
};

struct OperatorSnapshot {
  double time = 0;
  long long iteration = 0;
  std::array<double, kNumRemovalOps> removal_probs{};
  std::array<double, kNumInsertionOps> insertion_probs{};
  std::array<long long, kNumRemovalOps> removal_uses{};
  std::array<long long, kNumInsertionOps> insertion_uses{};
  std::array<long long, kNumRemovalOps> removal_successes{};
  std::array<long long, kNumInsertionOps> insertion_successes{};
};

struct SearchResult {
  Solution best;
  double best_objective = 0;
  double construction_objective = 0;
  long long iterations = 0;
  std::vector<TraceRow> trace;
  std::vector<OperatorSnapshot> operator_trace;
  LocalSearchStats ls_stats;
};

SearchResult run_alns(const Instance& inst, const SearchParams& params);

std::string trace_to_csv(const SearchResult& r);
std::string operator_trace_to_csv(const SearchResult& r);

}  // namespace mcbap
