#pragma once

#include <vector>

#include "dupeq/rational.hpp"

namespace dupeq {

// C(a, b); 0 whenever b < 0, b > a, or a < 0.
BigInt binom(long a, long b);

// H_n = sum_{i=1..n} 1/i, exact. H_0 = 0. Throws on n < 0.
Rational harmonic(long n);

// Probability that m ids drawn without replacement from the L-1 ids other
// than one's own avoid all x-1 ids already present in a network of x
// agents: C(L-x, m) / C(L-1, m). Zero when m > L-x.
// Domain: L >= 3, 3 <= x <= L, m >= 0; violations throw std::domain_error.
Rational collision_survival(long L, long x, long m);

// Incremental row of binomials C(n, m) for fixed m and ascending n,
// starting at n = m with C(m, m) = 1. Engine sweeps walk one row per
// (L, m) pair so the shared C(L-1, m) denominator is computed once.
class BinomRow {
 public:
  explicit BinomRow(long m) : m_(m), n_(m), value_(1) {
    if (m < 0) throw std::domain_error("BinomRow: m < 0");
  }

  long n() const { return n_; }
  const BigInt& value() const { return value_; }

  // Advances to C(n+1, m) = C(n, m) * (n+1) / (n+1-m).
  void advance() {
    ++n_;
    value_ *= n_;
    mpz_divexact_ui(value_.get_mpz_t(), value_.get_mpz_t(),
                    static_cast<unsigned long>(n_ - m_));
  }

  // Advances until n() == target (target >= current n).
  void advance_to(long target) {
    while (n_ < target) advance();
  }

 private:
  long m_;
  long n_;
  BigInt value_;
};

}  // namespace dupeq
