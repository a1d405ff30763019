#include "dupeq/simulate.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "dupeq/engine.hpp"
#include "dupeq/numerics.hpp"

namespace dupeq {

namespace {

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

TrialRng::TrialRng(std::uint64_t seed, std::uint64_t trial) {
  // Hash (seed, trial) into a pseudo-random stream start so trial
  // streams do not overlap in lockstep.
  state_ = mix64(seed ^ 0x2545f4914f6cdd1dULL) ^
           mix64(trial * 0x9e3779b97f4a7c15ULL + 0x853c49e6748fea9bULL);
}

std::uint64_t TrialRng::next_u64() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return mix64(state_);
}

std::uint64_t TrialRng::uniform(std::uint64_t bound) {
  std::uint64_t threshold = (0 - bound) % bound;  // reject to kill modulo bias
  for (;;) {
    std::uint64_t r = next_u64();
    if (r >= threshold) return r % bound;
  }
}

bool TrialRng::bernoulli(const Rational& p) {
  if (p <= 0) return false;
  if (p >= 1) return true;
  // r / 2^64 < p, compared exactly.
  BigInt lhs = BigInt(next_u64()) * p.get_den();
  BigInt rhs = p.get_num() << 64;
  return lhs < rhs;
}

namespace {

// Draws distinct values from [0, range) in O(draws) time and memory
// (sparse Fisher-Yates), independent of range.
class SparseSampler {
 public:
  explicit SparseSampler(long range) : range_(range) {}

  long next(TrialRng& rng) {
    long i = picked_++;
    long j = i + static_cast<long>(rng.uniform(range_ - i));
    long vi = value_at(i);
    long vj = value_at(j);
    perm_[j] = vi;
    return vj;
  }

 private:
  long value_at(long k) const {
    auto it = perm_.find(k);
    return it == perm_.end() ? k : it->second;
  }

  long range_;
  long picked_ = 0;
  std::unordered_map<long, long> perm_;
};

void validate_config(const SimConfig& cfg) {
  if (cfg.L < 3) throw std::invalid_argument("sim: L < 3");
  if (cfg.t < 3 || cfg.t > cfg.L)
    throw std::invalid_argument("sim: t outside [3, L]");
  if (cfg.m < 0) throw std::invalid_argument("sim: m < 0");
  if (cfg.m > cfg.L - 1)
    throw std::invalid_argument("sim: m > L-1, cannot commit distinct ids");
  if (cfg.trials < 1) throw std::invalid_argument("sim: trials < 1");
  if (!cfg.model.e0 || !cfg.model.em)
    throw std::invalid_argument("sim: model has no utility functions");
  if (cfg.fixed_n && (*cfg.fixed_n < cfg.t || *cfg.fixed_n > cfg.L))
    throw std::invalid_argument("sim: fixed_n outside [t, L]");
}

long sample_n(const SimConfig& cfg, TrialRng& rng) {
  if (cfg.fixed_n) return *cfg.fixed_n;
  return cfg.t + static_cast<long>(rng.uniform(cfg.L - cfg.t + 1));
}

struct DealtIds {
  long own = 0;                  // the tracked agent's real id
  std::vector<long> honest;      // the other n-1 real ids
  std::vector<long> fakes;       // m committed duplicate ids
  bool collision = false;        // some fake id equals an honest id
};

// Ids are dealt exactly as the probability model counts them: n distinct
// real ids uniform from [1, L], then m distinct fake ids uniform from the
// L-1 ids other than the agent's own.
DealtIds deal_ids(const SimConfig& cfg, long n, TrialRng& rng) {
  DealtIds out;
  SparseSampler real(cfg.L);
  out.own = real.next(rng) + 1;
  out.honest.reserve(n - 1);
  for (long i = 1; i < n; ++i) out.honest.push_back(real.next(rng) + 1);

  SparseSampler fake(cfg.L - 1);
  out.fakes.reserve(cfg.m);
  std::unordered_set<long> honest_set(out.honest.begin(), out.honest.end());
  for (long i = 0; i < cfg.m; ++i) {
    long raw = fake.next(rng);
    long id = raw + 1 < out.own ? raw + 1 : raw + 2;  // skip own id
    out.fakes.push_back(id);
    if (honest_set.count(id)) out.collision = true;
  }
  return out;
}

}  // namespace

TrialOutcome run_game_trial(const SimConfig& cfg, TrialRng& rng) {
  TrialOutcome out;
  out.n = sample_n(cfg, rng);
  DealtIds ids = deal_ids(cfg, out.n, rng);
  out.detected = ids.collision || out.n + cfg.m > cfg.L;
  if (out.detected) {
    out.utility = 0;
    out.outcome_class = OutcomeClass::erroneous;
    return out;
  }
  out.utility = rng.bernoulli(cfg.model.em(out.n, cfg.m)) ? 1 : 0;
  return out;
}

TrialOutcome run_ring_trial(const SimConfig& cfg, TrialRng& rng,
                            long* winner_rank) {
  TrialOutcome out;
  if (winner_rank) *winner_rank = -1;
  out.n = sample_n(cfg, rng);
  const long n = out.n;
  const long N = n + cfg.m;  // virtual ring size

  DealtIds ids = deal_ids(cfg, n, rng);

  // Ring layout: honest nodes in dealt order; the cheater's physical
  // node expands into m+1 consecutive virtual positions.
  long cheater_pos = static_cast<long>(rng.uniform(n));
  std::vector<long> ring;
  ring.reserve(N);
  long h = 0;
  for (long i = 0; i < n; ++i) {
    if (i == cheater_pos) {
      ring.push_back(ids.own);
      for (long f : ids.fakes) ring.push_back(f);
    } else {
      ring.push_back(ids.honest[h++]);
    }
  }

  // Phase 1, wake-up stand-in: every id circulates once around the ring.
  // Node i starts knowing its own id and receives one id per round from
  // its predecessor; after N rounds the token returns home.
  std::vector<std::vector<long>> seen(N);
  for (long i = 0; i < N; ++i) {
    seen[i].reserve(N);
    seen[i].push_back(ring[i]);
  }
  std::vector<long> sent = ring;
  std::vector<long> recv(N);
  for (long round = 1; round < N; ++round) {
    for (long i = 0; i < N; ++i) recv[i] = sent[(i + N - 1) % N];
    for (long i = 0; i < N; ++i) seen[i].push_back(recv[i]);
    sent = recv;
  }
  bool abort = N > cfg.L;  // circulated count exceeds the id space
  for (long i = 0; i < N && !abort; ++i) {
    std::vector<long>& s = seen[i];
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) abort = true;
  }
  out.detected = abort;
  if (abort) {
    out.utility = 0;  // aborted runs are erroneous for everyone
    out.outcome_class = OutcomeClass::erroneous;
    return out;
  }

  // Phase 2, fair election: each virtual agent contributes a uniform
  // draw in [0, N); the winner is the (sum mod N)-th id in sorted order.
  std::uint64_t sum = 0;
  for (long i = 0; i < N; ++i) sum += rng.uniform(static_cast<std::uint64_t>(N));
  long rank = static_cast<long>(sum % static_cast<std::uint64_t>(N));

  std::vector<long> sorted_ids = ring;
  std::sort(sorted_ids.begin(), sorted_ids.end());
  long winner = sorted_ids[rank];
  if (winner_rank) *winner_rank = rank;

  bool cheater_won = winner == ids.own ||
                     std::find(ids.fakes.begin(), ids.fakes.end(), winner) !=
                         ids.fakes.end();
  out.utility = cheater_won ? 1 : 0;
  return out;
}

namespace {

Rational analytic_value(const SimConfig& cfg) {
  if (cfg.fixed_n) {
    long n = *cfg.fixed_n;
    return collision_survival(cfg.L, n, cfg.m) * cfg.model.em(n, cfg.m);
  }
  return cheat_utility(cfg.L, cfg.t, cfg.m, cfg.model);
}

template <typename Trial>
SimReport run_trials(const SimConfig& cfg, Trial&& trial) {
  long wins = 0;
  long detected = 0;
#pragma omp parallel for reduction(+ : wins, detected) schedule(static)
  for (long i = 0; i < cfg.trials; ++i) {
    TrialRng rng(cfg.seed, static_cast<std::uint64_t>(i));
    TrialOutcome o = trial(rng);
    wins += o.utility;
    detected += o.detected ? 1 : 0;
  }

  SimReport report;
  report.trials = cfg.trials;
  report.wins = wins;
  report.detected = detected;
  report.analytic = analytic_value(cfg);
  report.estimate = static_cast<double>(wins) / static_cast<double>(cfg.trials);
  report.stderr_ = std::sqrt(report.estimate * (1.0 - report.estimate) /
                             static_cast<double>(cfg.trials));
  double analytic_d = to_double(report.analytic);
  if (report.stderr_ > 0.0) {
    report.z_score = (report.estimate - analytic_d) / report.stderr_;
  } else {
    // Degenerate sample (all 0s or all 1s): score against the analytic
    // variance instead of the zero Wald width.
    double se = std::sqrt(analytic_d * (1.0 - analytic_d) /
                          static_cast<double>(cfg.trials));
    report.z_score = se > 0.0 ? (report.estimate - analytic_d) / se : 0.0;
  }
  return report;
}

}  // namespace

SimReport simulate_duplication_game(const SimConfig& cfg) {
  validate_config(cfg);
  return run_trials(cfg, [&cfg](TrialRng& rng) { return run_game_trial(cfg, rng); });
}

SimReport simulate_ring_leader_election(const SimConfig& cfg) {
  validate_config(cfg);
  if (cfg.model.name != "le")
    throw std::invalid_argument("ring simulation supports leader election only");
  return run_trials(cfg, [&cfg](TrialRng& rng) { return run_ring_trial(cfg, rng); });
}

SimReport simulate(const SimConfig& cfg) {
  return cfg.mode == SimMode::ring ? simulate_ring_leader_election(cfg)
                                   : simulate_duplication_game(cfg);
}

std::vector<long> ring_rank_wins(long n, long L, long trials,
                                 std::uint64_t seed) {
  if (n < 3 || n > L) throw std::invalid_argument("ring_rank_wins: n outside [3, L]");
  SimConfig cfg;
  cfg.L = L;
  cfg.t = 3;
  cfg.m = 0;
  cfg.model = leader_election_model();
  cfg.trials = trials;
  cfg.seed = seed;
  cfg.fixed_n = n;

  std::vector<long> wins(n, 0);
#pragma omp parallel
  {
    std::vector<long> local(n, 0);
#pragma omp for schedule(static)
    for (long i = 0; i < trials; ++i) {
      TrialRng rng(seed, static_cast<std::uint64_t>(i));
      long rank = -1;
      TrialOutcome o = run_ring_trial(cfg, rng, &rank);
      if (!o.detected && rank >= 0) local[rank]++;
    }
#pragma omp critical(dupeq_ring_rank_merge)
    for (long r = 0; r < n; ++r) wins[r] += local[r];
  }
  return wins;
}

}  // namespace dupeq
