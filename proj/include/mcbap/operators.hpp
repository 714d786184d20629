#pragma once

#include <array>
#include <string>
#include <vector>

#include "mcbap/planner.hpp"
#include "mcbap/rng.hpp"

namespace mcbap {

// 1-based greedy-randomized index: ceil(n * p^alpha) clamped to [1, n].
// alpha = 1 is uniform; large alpha concentrates on the front of the list.
int randomized_index(int n, double alpha, double p);

// Shaw relatedness between two scheduled visits: weighted distance in berth
// position, start time and end time. Lower is more related.
double relatedness(const Instance& inst, const Solution& sol, int call_i, int call_j,
                   double pos_weight, double start_weight, double end_weight);

struct ShawWeights {
  double position = 0.55;
  double start = 1.36;
  double end = 0.89;
};

// Removals unschedule exactly min(K, scheduled) calls from the state and
// return them in removal order.
std::vector<int> shaw_removal(ScheduleState& st, int K, double alpha,
                              const ShawWeights& w, Rng& rng);
std::vector<int> cost_time_removal(ScheduleState& st, int K, double alpha, Rng& rng);
std::vector<int> cost_space_removal(ScheduleState& st, int K, double alpha, Rng& rng);
std::vector<int> random_removal(ScheduleState& st, int K, Rng& rng);

// Insertions schedule every listed call, leaving the state complete and
// feasible.
void greedy_insertion(ScheduleState& st, const std::vector<int>& removed, double gamma,
                      Rng& rng);
void kregret_insertion(ScheduleState& st, const std::vector<int>& removed, int kappa);
void packing_insertion(ScheduleState& st, const std::vector<int>& removed, double gamma,
                       Rng& rng);
void arrival_insertion(ScheduleState& st, const std::vector<int>& removed, double mu,
                       Rng& rng);

inline constexpr int kNumRemovalOps = 4;
inline constexpr int kNumInsertionOps = 4;
const char* removal_op_name(int op);   // shaw, cost_time, cost_space, random
const char* insertion_op_name(int op); // greedy, kregret, packing, arrival

enum class Outcome : int { NewBest = 0, Better = 1, Accepted = 2, Rejected = 3 };

// Roulette-wheel operator selection with periodically updated weights:
// w <- (1 - lambda) * w + lambda * (score accumulated since the last update).
class OperatorBank {
 public:
  OperatorBank(double lambda, const std::array<double, 4>& rewards);

  int select_removal(Rng& rng) const { return select(removal_, rng); }
  int select_insertion(Rng& rng) const { return select(insertion_, rng); }

  void record(int removal_op, int insertion_op, Outcome outcome);
  void update();

  std::array<double, kNumRemovalOps> removal_probabilities() const;
  std::array<double, kNumInsertionOps> insertion_probabilities() const;
  std::array<long long, kNumRemovalOps> removal_uses() const;
  std::array<long long, kNumInsertionOps> insertion_uses() const;
  std::array<long long, kNumRemovalOps> removal_successes() const;
  std::array<long long, kNumInsertionOps> insertion_successes() const;

 private:
  struct Op {
    double weight = 1.0;
    double probability = 0.25;
    double score = 0.0;
    long long uses = 0;
    long long successes = 0; // outcomes better than the current solution
  };
  template <std::size_t N>
  int select(const std::array<Op, N>& fam, Rng& rng) const {
    double r = rng.uniform();
    double cum = 0;
    for (std::size_t i = 0; i < N; ++i) {
      cum += fam[i].probability;
      if (r < cum) return static_cast<int>(i);
    }
    return static_cast<int>(N) - 1;
  }
  template <std::size_t N>
  static void renormalize(std::array<Op, N>& fam);

  double lambda_;
  std::array<double, 4> rewards_; // by Outcome
  std::array<Op, kNumRemovalOps> removal_;
  std::array<Op, kNumInsertionOps> insertion_;
};

}  // namespace mcbap
