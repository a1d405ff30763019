#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <omp.h>

#include <cmath>
#include <cstdint>
#include <set>

#include "dupeq/engine.hpp"
#include "dupeq/numerics.hpp"
#include "dupeq/render.hpp"
#include "dupeq/simulate.hpp"

using namespace dupeq;

namespace {

SimConfig game_config(long L, long t, long m, long trials, std::uint64_t seed) {
  SimConfig cfg;
  cfg.L = L;
  cfg.t = t;
  cfg.m = m;
  cfg.model = leader_election_model();
  cfg.trials = trials;
  cfg.seed = seed;
  return cfg;
}

double binomial_se(double p, long trials) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

}  // namespace

TEST_CASE("trial rng basics") {
  TrialRng a(7, 0), b(7, 0), c(7, 1);
  for (int i = 0; i < 64; ++i) CHECK(a.next_u64() == b.next_u64());
  bool differs = false;
  TrialRng a2(7, 0);
  for (int i = 0; i < 64; ++i) differs |= a2.next_u64() != c.next_u64();
  CHECK(differs);

  TrialRng r(123, 9);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 10000; ++i) {
    std::uint64_t v = r.uniform(37);
    CHECK(v < 37);
    seen.insert(v);
  }
  CHECK(seen.size() == 37);

  TrialRng rb(5, 5);
  CHECK_FALSE(rb.bernoulli(Rational(0)));
  CHECK(rb.bernoulli(Rational(1)));
  long hits = 0;
  const long draws = 60000;
  for (long i = 0; i < draws; ++i)
    if (rb.bernoulli(make_rational(1, 3))) ++hits;
  double freq = static_cast<double>(hits) / draws;
  CHECK(std::abs(freq - 1.0 / 3.0) < 4 * binomial_se(1.0 / 3.0, draws));
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(simulate_duplication_game(game_config(2, 3, 0, 10, 1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(simulate_duplication_game(game_config(10, 2, 0, 10, 1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(simulate_duplication_game(game_config(10, 11, 0, 10, 1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(simulate_duplication_game(game_config(10, 3, -1, 10, 1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(simulate_duplication_game(game_config(10, 3, 10, 10, 1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(simulate_duplication_game(game_config(10, 3, 0, 0, 1)),
                  std::invalid_argument);
  SimConfig bad_n = game_config(10, 4, 0, 10, 1);
  bad_n.fixed_n = 3;
  CHECK_THROWS_AS(simulate_duplication_game(bad_n), std::invalid_argument);

  SimConfig ring = game_config(10, 3, 0, 10, 1);
  ring.model = knowledge_sharing_model(3);
  CHECK_THROWS_AS(simulate_ring_leader_election(ring), std::invalid_argument);
}

TEST_CASE("certain collision at t = L scores zero") {
  SimConfig cfg = game_config(50, 50, 1, 2000, 1);
  SimReport r = simulate_duplication_game(cfg);
  CHECK(r.estimate == 0.0);
  CHECK(r.wins == 0);
  CHECK(r.detected == 2000);
  CHECK(r.analytic == Rational(0));
  CHECK(r.z_score == 0.0);

  cfg.mode = SimMode::ring;
  cfg.trials = 500;
  SimReport rr = simulate(cfg);
  CHECK(rr.estimate == 0.0);
  CHECK(rr.detected == 500);
}

TEST_CASE("honest runs are never detected and track f") {
  SimConfig cfg = game_config(60, 12, 0, 50000, 2024);
  SimReport r = simulate_duplication_game(cfg);
  CHECK(r.detected == 0);
  CHECK(std::abs(r.z_score) <= 4.0);
  CHECK(r.analytic == honest_utility(60, 12, cfg.model));
}

TEST_CASE("duplication game tracks the engine's cheat utility") {
  SimConfig cfg = game_config(200, 40, 1, 100000, 42);
  SimReport r = simulate_duplication_game(cfg);
  CHECK(r.analytic == cheat_utility(200, 40, 1, cfg.model));
  CHECK(std::abs(r.z_score) <= 4.0);

  SimConfig ks = cfg;
  ks.model = knowledge_sharing_model(4);
  ks.L = 60;
  ks.t = 12;
  ks.m = 12;
  ks.trials = 60000;
  SimReport rk = simulate_duplication_game(ks);
  CHECK(rk.analytic == cheat_utility(60, 12, 12, ks.model));
  CHECK(std::abs(rk.z_score) <= 4.0);
}

TEST_CASE("collision rate at fixed n matches the survival probability") {
  SimConfig cfg = game_config(20, 8, 3, 80000, 7);
  cfg.fixed_n = 8;
  SimReport r = simulate_duplication_game(cfg);
  double p_survive = to_double(collision_survival(20, 8, 3));
  double rate = static_cast<double>(r.detected) / static_cast<double>(r.trials);
  CHECK(std::abs(rate - (1.0 - p_survive)) <=
        4 * binomial_se(1.0 - p_survive, r.trials));
  // analytic at fixed n is p_m(n) em(n, m)
  CHECK(r.analytic == collision_survival(20, 8, 3) * cfg.model.em(8, 3));
  CHECK(std::abs(r.z_score) <= 4.0);
}

TEST_CASE("detected trials never score") {
  SimConfig cfg = game_config(12, 3, 5, 0, 11);
  for (long i = 0; i < 3000; ++i) {
    TrialRng rng(11, i);
    TrialOutcome o = run_game_trial(cfg, rng);
    if (o.detected) {
      CHECK(o.utility == 0);
      CHECK(o.outcome_class == OutcomeClass::erroneous);
    } else {
      CHECK(o.outcome_class == OutcomeClass::legal);
    }
    CHECK((o.utility == 0 || o.utility == 1));
    CHECK(o.n >= cfg.t);
    CHECK(o.n <= cfg.L);
  }
  for (long i = 0; i < 800; ++i) {
    TrialRng rng(12, i);
    TrialOutcome o = run_ring_trial(cfg, rng);
    if (o.detected) {
      CHECK(o.utility == 0);
      CHECK(o.outcome_class == OutcomeClass::erroneous);
    }
  }
}

TEST_CASE("all-honest ring elects every rank uniformly") {
  const long n = 6, L = 20, trials = 60000;
  std::vector<long> wins = ring_rank_wins(n, L, trials, 99);
  REQUIRE(wins.size() == static_cast<std::size_t>(n));
  long total = 0;
  for (long w : wins) total += w;
  CHECK(total == trials);  // no detections in honest runs
  double se = binomial_se(1.0 / n, trials);
  for (long w : wins) {
    double freq = static_cast<double>(w) / trials;
    CHECK(std::abs(freq - 1.0 / n) <= 4 * se);
  }
}

TEST_CASE("undetected ring cheater wins like the model says") {
  SimConfig cfg = game_config(30, 8, 2, 60000, 5);
  cfg.fixed_n = 8;
  cfg.mode = SimMode::ring;
  SimReport r = simulate(cfg);

  // Conditional win frequency among undetected runs vs em(n, m).
  long undetected = r.trials - r.detected;
  REQUIRE(undetected > 0);
  double cond = static_cast<double>(r.wins) / static_cast<double>(undetected);
  double expect = to_double(cfg.model.em(8, 2));
  CHECK(std::abs(cond - expect) <= 4 * binomial_se(expect, undetected));

  // Detection rate vs 1 - p_m(n).
  double p_survive = to_double(collision_survival(30, 8, 2));
  double rate = static_cast<double>(r.detected) / static_cast<double>(r.trials);
  CHECK(std::abs(rate - (1.0 - p_survive)) <=
        4 * binomial_se(1.0 - p_survive, r.trials));

  // Unconditional estimate vs the analytic product.
  CHECK(std::abs(r.z_score) <= 4.0);
}

TEST_CASE("ring pipeline with sampled n tracks g") {
  SimConfig cfg = game_config(30, 6, 2, 40000, 17);
  cfg.mode = SimMode::ring;
  SimReport r = simulate(cfg);
  CHECK(r.analytic == cheat_utility(30, 6, 2, cfg.model));
  CHECK(std::abs(r.z_score) <= 4.0);
}

TEST_CASE("identical configs give bit-identical reports at any thread count") {
  SimConfig cfg = game_config(80, 16, 2, 30000, 321);
  int saved = omp_get_max_threads();
  std::string first;
  for (int threads : {1, 2, 8}) {
    omp_set_num_threads(threads);
    SimReport r = simulate_duplication_game(cfg);
    std::string rendered = sim_report_json(r).dump();
    if (first.empty())
      first = rendered;
    else
      CHECK(rendered == first);

    cfg.mode = SimMode::ring;
    SimReport rr = simulate(cfg);
    cfg.mode = SimMode::game;
    static std::string first_ring;
    if (threads == 1)
      first_ring = sim_report_json(rr).dump();
    else
      CHECK(sim_report_json(rr).dump() == first_ring);
  }
  omp_set_num_threads(saved);

  SimReport again = simulate_duplication_game(cfg);
  CHECK(sim_report_json(again).dump() == first);
}
