#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "dupeq/rational.hpp"

namespace dupeq {

// Claims a model makes about its own structure. They are hints, not
// guarantees: the engine exposes brute-force verifiers to audit them on
// small L, and certifies every binary-search result exactly.
struct EnhancementHints {
  // A pivot t0 exists with equilibrium exactly for t >= t0.
  bool linear_threshold = false;
  // A single duplication count m' whose profitability is equivalent to
  // the existence of any profitable m.
  std::optional<long> limited_dup;
};

// Pluggable utility profile of one algorithm:
//   e0(x)    expected utility of an honest agent in a network of x agents
//   em(x, m) expected utility after m successful duplications
// Both are normalized to [0, 1] and em(x, 0) == e0(x).
struct UtilityModel {
  std::string name;
  std::function<Rational(long x)> e0;
  std::function<Rational(long x, long m)> em;
  EnhancementHints hints;
};

// Fair leader election: e0(x) = 1/x, em(x, m) = (1+m)/(x+m).
UtilityModel leader_election_model();

// Knowledge sharing over k possible outputs: e0(x) = 1/k; a cheater
// controlling at least as many virtual agents as there are real ones
// dictates the output (em = 1 for x <= m), otherwise gains nothing
// (em = 1/k for m < x). The id-exhaustion branch (m > L-x) is enforced
// by the engine's summation cutoff, not here: the model does not know L.
UtilityModel knowledge_sharing_model(long k);

// Registry keyed by selection string: "le", "ks:<k>".
// Third-party models plug in via register_model_factory.
UtilityModel parse_model(std::string_view selection);
void register_model_factory(
    std::string key,
    std::function<UtilityModel(std::string_view args)> factory);

}  // namespace dupeq
