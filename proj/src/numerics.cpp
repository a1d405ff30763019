#include "dupeq/numerics.hpp"

namespace dupeq {

BigInt binom(long a, long b) {
  if (b < 0 || a < 0 || b > a) return BigInt(0);
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(a),
               static_cast<unsigned long>(b));
  return r;
}

Rational harmonic(long n) {
  if (n < 0) throw std::domain_error("harmonic: n < 0");
  Rational h(0);
  for (long i = 1; i <= n; ++i) h += Rational(1, i);
  return h;
}

Rational collision_survival(long L, long x, long m) {
  if (L < 3) throw std::domain_error("collision_survival: L < 3");
  if (x < 3 || x > L) throw std::domain_error("collision_survival: x outside [3, L]");
  if (m < 0) throw std::domain_error("collision_survival: m < 0");
  if (m > L - x) return Rational(0);
  return make_rational(binom(L - x, m), binom(L - 1, m));
}

}  // namespace dupeq
