#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dupeq {

using BigInt = mpz_class;

// Canonical exact rational: denominator > 0, gcd(|num|, den) = 1 after
// every operation. All equilibrium comparisons in the engine are exact,
// so this type carries every f/g/p value end to end.
using Rational = mpq_class;

inline Rational make_rational(BigInt num, BigInt den) {
  if (den == 0) throw std::domain_error("rational: zero denominator");
  Rational q(std::move(num), std::move(den));
  q.canonicalize();
  return q;
}

inline Rational make_rational(long num, long den) {
  return make_rational(BigInt(num), BigInt(den));
}

// Serialized as "p/q" even for integers ("0/1", "1/5"), so downstream
// parsers never need a special case.
inline std::string to_fraction_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline double to_double(const Rational& q) { return q.get_d(); }

}  // namespace dupeq
