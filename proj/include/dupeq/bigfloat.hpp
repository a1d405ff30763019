#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include "dupeq/rational.hpp"

namespace dupeq {

// Variable-precision float for large-L search trajectories and the
// closed-form bound evaluations. Anything decided in this type is
// re-certified with exact rationals before it is reported.
using BigFloat = boost::multiprecision::mpfr_float;

inline constexpr unsigned kDefaultFloatBits = 128;

inline unsigned bits_to_digits10(unsigned bits) {
  // floor(bits * log10(2)) + safety digit
  return static_cast<unsigned>(bits * 0.30102999566398119) + 2;
}

// Sets the thread's default mpfr precision for the lifetime of the guard.
class FloatPrecisionGuard {
 public:
  explicit FloatPrecisionGuard(unsigned bits)
      : saved_(BigFloat::default_precision()) {
    BigFloat::default_precision(bits_to_digits10(bits));
  }
  ~FloatPrecisionGuard() { BigFloat::default_precision(saved_); }
  FloatPrecisionGuard(const FloatPrecisionGuard&) = delete;
  FloatPrecisionGuard& operator=(const FloatPrecisionGuard&) = delete;

 private:
  unsigned saved_;
};

inline BigFloat to_bigfloat(const Rational& q) {
  BigFloat x;
  mpfr_set_q(x.backend().data(), q.get_mpq_t(), MPFR_RNDN);
  return x;
}

inline BigFloat to_bigfloat(const BigInt& z) {
  BigFloat x;
  mpfr_set_z(x.backend().data(), z.get_mpz_t(), MPFR_RNDN);
  return x;
}

// Exact value of the (binary, hence finite) float as a rational.
// Lets sandwich tests compare float bounds against exact sums with no
// rounding step in the comparison itself.
inline Rational bigfloat_to_rational(const BigFloat& x) {
  mpq_class q;
  mpfr_get_q(q.get_mpq_t(), x.backend().data());
  return q;
}

// Euler-Mascheroni constant at the current default precision.
BigFloat euler_gamma();

}  // namespace dupeq
