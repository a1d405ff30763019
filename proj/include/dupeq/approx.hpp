#pragma once

#include "dupeq/bigfloat.hpp"

namespace dupeq {

struct HarmonicBounds {
  BigFloat lower;
  BigFloat upper;
};

// Closed-form sandwich around H_n:
//   ln n + g + 1/(2n + 1/(1-g) - 2)  <=  H_n  <  ln n + g + 1/(2n + 1/3)
// with g the Euler-Mascheroni constant. Evaluated with directed rounding,
// so the returned endpoints are certified outer approximations and the
// sandwich survives the float evaluation. n >= 1.
HarmonicBounds harmonic_bounds(long n, unsigned bits = kDefaultFloatBits);

struct RealBounds {
  BigFloat lower;
  BigFloat upper;
};

// Bounds on the unnormalized honest leader-election sum sum_{x=t}^L 1/x.
// The 1/(L-t+1) factor cancels in the equilibrium comparison, so the
// closed forms bound the raw sums; callers comparing against the engine's
// normalized f must multiply by (L-t+1).
RealBounds f_bounds_le(long L, long t, unsigned bits = kDefaultFloatBits);

// Bounds on the unnormalized single-duplication cheat sum
// (2/(L-1)) sum_{x=t}^L (L-x)/(x+1).
RealBounds g1_bounds_le(long L, long t, unsigned bits = kDefaultFloatBits);

enum class BandVerdict { certified_cheat, certified_no_cheat, indeterminate };
const char* to_string(BandVerdict v);

struct BoundReport {
  long L = 0;
  long t = 0;
  BigFloat f_lb, f_ub, g_lb, g_ub;
  BigFloat euler_gamma_value;
  BandVerdict verdict = BandVerdict::indeterminate;
};

// Evaluates all four bounds at (L, t). certified-cheat when f_ub < g_lb,
// certified-no-cheat when g_ub < f_lb, indeterminate otherwise (the
// expected outcome for small L, where the asymptotic argument has no
// bite and we do not extrapolate).
BoundReport evaluate_bounds(long L, long t, unsigned bits = kDefaultFloatBits);

// Constant-time leader-election threshold band: bounds at t = floor(L/5)
// and t = ceil(0.21 L), both clamped to [3, L], plus the t ~ L/5 headline.
struct ThresholdBand {
  BoundReport at_cheat;      // t = floor(0.2 L)
  BoundReport at_no_cheat;   // t = ceil(0.21 L)
  long approx_threshold = 0; // round(L/5)
};
ThresholdBand le_threshold_band(long L, unsigned bits = kDefaultFloatBits);

}  // namespace dupeq
