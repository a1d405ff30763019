#include "dupeq/approx.hpp"

#include <mpfr.h>

#include <stdexcept>

namespace dupeq {

BigFloat euler_gamma() {
  BigFloat g;
  mpfr_const_euler(g.backend().data(), MPFR_RNDN);
  return g;
}

namespace {

// RAII mpfr_t at an explicit bit precision, for the directed-rounding
// paths where boost's operator layer would round to nearest.
class Raw {
 public:
  explicit Raw(unsigned bits) { mpfr_init2(v_, bits); }
  ~Raw() { mpfr_clear(v_); }
  Raw(const Raw&) = delete;
  Raw& operator=(const Raw&) = delete;
  mpfr_ptr get() { return v_; }

 private:
  mpfr_t v_;
};

BigFloat from_raw(mpfr_ptr v) {
  BigFloat out;
  mpfr_set(out.backend().data(), v, MPFR_RNDN);
  return out;
}

}  // namespace

HarmonicBounds harmonic_bounds(long n, unsigned bits) {
  if (n < 1) throw std::domain_error("harmonic_bounds: n < 1");
  FloatPrecisionGuard guard(bits + 8);

  Raw gamma(bits + 8), tmp(bits + 8), denom(bits + 8), term(bits + 8),
      acc(bits + 8);

  // lower = ln n + gamma + 1/(2n - 2 + 1/(1-gamma)), rounded down.
  // The correction term needs its denominator rounded up, which needs
  // 1/(1-gamma) rounded up, which needs gamma rounded up.
  mpfr_const_euler(gamma.get(), MPFR_RNDU);
  mpfr_ui_sub(tmp.get(), 1, gamma.get(), MPFR_RNDD);       // 1-gamma, down
  mpfr_ui_div(denom.get(), 1, tmp.get(), MPFR_RNDU);       // 1/(1-gamma), up
  mpfr_add_si(denom.get(), denom.get(), 2 * n - 2, MPFR_RNDU);
  mpfr_ui_div(term.get(), 1, denom.get(), MPFR_RNDD);      // correction, down
  mpfr_set_si(acc.get(), n, MPFR_RNDD);
  mpfr_log(acc.get(), acc.get(), MPFR_RNDD);               // ln n, down
  mpfr_const_euler(gamma.get(), MPFR_RNDD);
  mpfr_add(acc.get(), acc.get(), gamma.get(), MPFR_RNDD);
  mpfr_add(acc.get(), acc.get(), term.get(), MPFR_RNDD);
  BigFloat lower = from_raw(acc.get());

  // upper = ln n + gamma + 1/(2n + 1/3), rounded up; denominator down.
  mpfr_set_ui(tmp.get(), 1, MPFR_RNDD);
  mpfr_div_ui(denom.get(), tmp.get(), 3, MPFR_RNDD);       // 1/3, down
  mpfr_add_si(denom.get(), denom.get(), 2 * n, MPFR_RNDD);
  mpfr_ui_div(term.get(), 1, denom.get(), MPFR_RNDU);
  mpfr_set_si(acc.get(), n, MPFR_RNDU);
  mpfr_log(acc.get(), acc.get(), MPFR_RNDU);
  mpfr_const_euler(gamma.get(), MPFR_RNDU);
  mpfr_add(acc.get(), acc.get(), gamma.get(), MPFR_RNDU);
  mpfr_add(acc.get(), acc.get(), term.get(), MPFR_RNDU);
  BigFloat upper = from_raw(acc.get());

  return {lower, upper};
}

namespace {

void check_Lt(long L, long t) {
  if (L < 3) throw std::domain_error("bounds: L < 3");
  if (t < 3 || t > L) throw std::domain_error("bounds: t outside [3, L]");
}

}  // namespace

RealBounds f_bounds_le(long L, long t, unsigned bits) {
  check_Lt(L, t);
  FloatPrecisionGuard guard(bits);
  BigFloat inv = 1 / (1 - euler_gamma());  // 1/(1-gamma)
  BigFloat third = BigFloat(1) / 3;
  BigFloat lhead = log(BigFloat(L) / (t - 1));

  BigFloat lower = lhead + (2 * (t - 1) - 2 * L - inv + BigFloat(7) / 3) /
                               ((2 * L + inv - 2) * (2 * (t - 1) + third));
  BigFloat upper = lhead + (2 * (t - 1) - 2 * L + inv - BigFloat(7) / 3) /
                               ((2 * L + third) * (2 * (t - 1) + inv - 2));
  return {lower, upper};
}

RealBounds g1_bounds_le(long L, long t, unsigned bits) {
  check_Lt(L, t);
  FloatPrecisionGuard guard(bits);
  BigFloat Lp1(L + 1);
  BigFloat lower =
      (BigFloat(2) / (L - 1)) * (Lp1 * log(Lp1 / (t + 1)) + (t - L));
  BigFloat upper =
      2 * (Lp1 / (L - 1)) * log(Lp1 / t) - 2 * (BigFloat(L + 1 - t) / (L - 1));
  return {lower, upper};
}

const char* to_string(BandVerdict v) {
  switch (v) {
    case BandVerdict::certified_cheat: return "certified-cheat";
    case BandVerdict::certified_no_cheat: return "certified-no-cheat";
    case BandVerdict::indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

BoundReport evaluate_bounds(long L, long t, unsigned bits) {
  check_Lt(L, t);
  FloatPrecisionGuard guard(bits);
  BoundReport report;
  report.L = L;
  report.t = t;
  auto f = f_bounds_le(L, t, bits);
  auto g = g1_bounds_le(L, t, bits);
  report.f_lb = f.lower;
  report.f_ub = f.upper;
  report.g_lb = g.lower;
  report.g_ub = g.upper;
  report.euler_gamma_value = euler_gamma();
  if (report.f_ub < report.g_lb)
    report.verdict = BandVerdict::certified_cheat;
  else if (report.g_ub < report.f_lb)
    report.verdict = BandVerdict::certified_no_cheat;
  else
    report.verdict = BandVerdict::indeterminate;
  return report;
}

ThresholdBand le_threshold_band(long L, unsigned bits) {
  if (L < 3) throw std::domain_error("bounds: L < 3");
  auto clamp_t = [L](long t) { return t < 3 ? 3 : (t > L ? L : t); };
  long t_cheat = clamp_t(L / 5);                  // floor(0.2 L)
  long t_no_cheat = clamp_t((21 * L + 99) / 100); // ceil(0.21 L)

  ThresholdBand band;
  band.at_cheat = evaluate_bounds(L, t_cheat, bits);
  band.at_no_cheat = evaluate_bounds(L, t_no_cheat, bits);
  band.approx_threshold = (L + 2) / 5;  // round(L/5)
  return band;
}

}  // namespace dupeq
