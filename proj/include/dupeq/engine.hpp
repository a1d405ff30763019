#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dupeq/model.hpp"
#include "dupeq/rational.hpp"

namespace dupeq {

enum class EvalMode { exact, floating };

struct EngineOptions {
  // Honor the model's enhancement hints (limited-dup scan set, binary
  // search). Hints never change answers: binary-search results are
  // re-certified exactly and fall back to a scan on mismatch.
  bool use_hints = true;
  // floating evaluates search trajectories in high-precision floats;
  // the reported threshold is still certified with exact rationals.
  EvalMode mode = EvalMode::exact;
  unsigned float_bits = 128;
  // OpenMP kernels vs the serial reference path.
  bool parallel = true;
};

// Result of maximizing the cheat utility over a set of duplication counts.
// m_star is the smallest maximizer; equilibrium holds iff f >= g_star
// (weak inequality: an indifferent agent has no strict incentive).
struct CheatAssessment {
  long m_star = 0;
  Rational g_star;
  Rational f_value;
  std::vector<std::pair<long, Rational>> per_m;  // filled on request
  bool equilibrium() const { return f_value >= g_star; }
};

enum class SearchMethod { automatic, scan, binary };

struct ThresholdResult {
  // Smallest equilibrium threshold in [3, L]; empty if none exists
  // (possible only for models that are not in equilibrium even at t = L).
  std::optional<long> t_star;
  // scan | scan-limited-dup | binary-search | binary-search-limited-dup
  std::string method;
  // Binary search certification failed and the result comes from the
  // exact fallback scan; flags a wrong linear-threshold hint.
  bool hint_fallback = false;
  std::optional<CheatAssessment> witness_below;  // at t*-1, absent if t*=3
  std::optional<CheatAssessment> witness_at;     // at t*
};

// f(L, t): expected utility of an honest agent, n uniform on [t, L].
Rational honest_utility(long L, long t, const UtilityModel& model);

// g(L, t, m): expected utility of an agent committing to m duplications,
// discounted by the collision-survival probability. Empty sum (m > L-t)
// yields 0; g(L, t, 0) == f(L, t).
Rational cheat_utility(long L, long t, long m, const UtilityModel& model);

// Maximizes g over the scanned duplication counts: {0, m'} when the
// model hints limited duplications and hints are enabled, otherwise all
// of [0, L-t]. keep_per_m records the full table scanned.
CheatAssessment best_cheat(long L, long t, const UtilityModel& model,
                           const EngineOptions& opts = {},
                           bool keep_per_m = false);

struct EquilibriumCheck {
  bool equilibrium = false;
  CheatAssessment assessment;
};
EquilibriumCheck check_equilibrium(long L, long t, const UtilityModel& model,
                                   const EngineOptions& opts = {});
bool is_equilibrium(long L, long t, const UtilityModel& model,
                    const EngineOptions& opts = {});

ThresholdResult minimal_threshold(long L, const UtilityModel& model,
                                  SearchMethod method = SearchMethod::automatic,
                                  const EngineOptions& opts = {});

// Brute-force audits of the enhancement hints, full m scans, exact.
// Intended for small L (guideline L <= 500).
bool verify_linear_threshold(long L, const UtilityModel& model,
                             const EngineOptions& opts = {});
bool verify_limited_dup(long L, const UtilityModel& model, long m_prime,
                        const EngineOptions& opts = {});

// Exact f, max_m g and argmax for every t in [t_min, L], computed with
// one suffix-sum sweep per m. The workhorse behind the verifiers and the
// grid checks; rows for distinct m are independent, which is what the
// parallel kernel exploits.
struct CheatTable {
  long L = 0;
  long t_min = 3;
  std::vector<Rational> f;
  std::vector<Rational> g_star;
  std::vector<long> m_star;

  long size() const { return static_cast<long>(f.size()); }
  const Rational& f_at(long t) const { return f[t - t_min]; }
  const Rational& g_star_at(long t) const { return g_star[t - t_min]; }
  long m_star_at(long t) const { return m_star[t - t_min]; }
  bool equilibrium_at(long t) const { return f_at(t) >= g_star_at(t); }
};

CheatTable cheat_table(long L, const UtilityModel& model, long t_min = 3,
                       bool parallel = true);
// Serial reference implementation, kept for testing the parallel kernel.
CheatTable cheat_table_serial(long L, const UtilityModel& model,
                              long t_min = 3);

// g(L, t, m) for fixed m and every t in [t_min, L] (one suffix sweep).
std::vector<Rational> cheat_utility_row(long L, long m,
                                        const UtilityModel& model,
                                        long t_min = 3);

}  // namespace dupeq
