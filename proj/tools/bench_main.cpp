// Timing comparison between the serial reference kernels and the OpenMP
// ones. Outputs one CSV row per measurement; correctness of the parallel
// kernels against the serial references is asserted as it goes.

#include <omp.h>

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>

#include "dupeq/engine.hpp"
#include "dupeq/model.hpp"
#include "dupeq/simulate.hpp"

using namespace dupeq;

namespace {

double time_ms(const std::function<void()>& fn) {
  auto start = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

void row(const std::string& kernel, const std::string& param, int threads,
         double ms) {
  std::cout << kernel << "," << param << "," << threads << "," << ms << "\n";
}

bool tables_equal(const CheatTable& a, const CheatTable& b) {
  if (a.size() != b.size()) return false;
  for (long t = a.t_min; t < a.t_min + a.size(); ++t)
    if (a.f_at(t) != b.f_at(t) || a.g_star_at(t) != b.g_star_at(t) ||
        a.m_star_at(t) != b.m_star_at(t))
      return false;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  long table_L = argc > 1 ? std::atol(argv[1]) : 200;
  long trials = argc > 2 ? std::atol(argv[2]) : 200000;
  int threads = omp_get_max_threads();

  std::cout << "kernel,param,threads,ms\n";

  for (const UtilityModel& model :
       {leader_election_model(), knowledge_sharing_model(6)}) {
    CheatTable serial, parallel;
    row("cheat_table_serial", model.name + ":L=" + std::to_string(table_L), 1,
        time_ms([&] { serial = cheat_table_serial(table_L, model); }));
    row("cheat_table_omp", model.name + ":L=" + std::to_string(table_L),
        threads,
        time_ms([&] { parallel = cheat_table(table_L, model); }));
    if (!tables_equal(serial, parallel)) {
      std::cerr << "parallel cheat_table diverged from the serial reference\n";
      return 1;
    }
  }

  SimConfig game;
  game.L = 200;
  game.t = 40;
  game.m = 1;
  game.model = leader_election_model();
  game.trials = trials;
  game.seed = 42;

  SimReport serial_report, parallel_report;
  omp_set_num_threads(1);
  row("simulate_game", "le:trials=" + std::to_string(trials), 1,
      time_ms([&] { serial_report = simulate_duplication_game(game); }));
  omp_set_num_threads(threads);
  row("simulate_game", "le:trials=" + std::to_string(trials), threads,
      time_ms([&] { parallel_report = simulate_duplication_game(game); }));
  if (serial_report.wins != parallel_report.wins ||
      serial_report.detected != parallel_report.detected) {
    std::cerr << "parallel simulation diverged from the serial run\n";
    return 1;
  }

  SimConfig ring = game;
  ring.mode = SimMode::ring;
  ring.L = 30;
  ring.t = 6;
  ring.m = 2;
  ring.trials = trials / 4;
  omp_set_num_threads(1);
  row("simulate_ring", "le:trials=" + std::to_string(ring.trials), 1,
      time_ms([&] { serial_report = simulate(ring); }));
  omp_set_num_threads(threads);
  row("simulate_ring", "le:trials=" + std::to_string(ring.trials), threads,
      time_ms([&] { parallel_report = simulate(ring); }));
  if (serial_report.wins != parallel_report.wins) {
    std::cerr << "parallel ring simulation diverged from the serial run\n";
    return 1;
  }

  return 0;
}
