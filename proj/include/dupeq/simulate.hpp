#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dupeq/model.hpp"
#include "dupeq/rational.hpp"

namespace dupeq {

// Per-trial randomness is derived from (seed, trial index) alone, so
// trials are independent, parallel-safe, and reproducible regardless of
// the number of worker threads.
class TrialRng {
 public:
  TrialRng(std::uint64_t seed, std::uint64_t trial);

  std::uint64_t next_u64();
  // Unbiased uniform draw from [0, bound), bound >= 1.
  std::uint64_t uniform(std::uint64_t bound);
  // Exact Bernoulli(p) for rational p in [0, 1].
  bool bernoulli(const Rational& p);

 private:
  std::uint64_t state_;
};

enum class SimMode { game, ring };

struct SimConfig {
  long L = 0;
  long t = 0;
  long m = 0;
  UtilityModel model;
  long trials = 1;
  std::uint64_t seed = 0;
  SimMode mode = SimMode::game;
  // When set, every trial uses this network size instead of sampling
  // n ~ U[t, L]; used to validate e_m and the collision rate pointwise.
  std::optional<long> fixed_n;
};

enum class OutcomeClass { legal, erroneous };

struct TrialOutcome {
  long n = 0;
  bool detected = false;
  int utility = 0;  // 0 or 1; detected runs are erroneous and score 0
  OutcomeClass outcome_class = OutcomeClass::legal;
};

struct SimReport {
  double estimate = 0.0;  // mean utility over trials
  double stderr_ = 0.0;   // sqrt(estimate (1-estimate) / trials)
  double z_score = 0.0;   // against the analytic value
  Rational analytic;      // engine f or g for the same (L, t, m)
  long trials = 0;
  long wins = 0;
  long detected = 0;
};

// Round-0 commitment game: sample n, deal distinct ids, draw the m fake
// ids from the L-1 non-own ids, detect collisions, then award utility
// Bernoulli(em(n, m)) on undetected runs. Mean converges to g(L, t, m)
// (f when m = 0).
SimReport simulate_duplication_game(const SimConfig& config);

// Synchronous ring: the cheater occupies one physical node simulating
// m+1 virtual ring nodes. Phase 1 circulates all ids for N rounds
// (N = claimed agent count); any node seeing a duplicate id or N > L
// aborts the run. Phase 2 elects the agent at index (sum of per-agent
// random draws mod N) in the id-sorted list. Leader-election models only.
SimReport simulate_ring_leader_election(const SimConfig& config);

// Dispatches on config.mode.
SimReport simulate(const SimConfig& config);

// All-honest ring at fixed n: wins per id-sorted rank, for fairness
// validation (each rank should win with frequency 1/n).
std::vector<long> ring_rank_wins(long n, long L, long trials,
                                 std::uint64_t seed);

// Single game-level trial, exposed for property tests.
TrialOutcome run_game_trial(const SimConfig& config, TrialRng& rng);
// Single ring trial; winner_rank (into the id-sorted virtual agent list)
// is set on undetected runs, -1 otherwise.
TrialOutcome run_ring_trial(const SimConfig& config, TrialRng& rng,
                            long* winner_rank = nullptr);

}  // namespace dupeq
