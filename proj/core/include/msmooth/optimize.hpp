#pragma once

#include <cmath>
#include <utility>

namespace msmooth {

/// Golden-section minimisation on [a,b]; f must be unimodal there.
/// Returns the abscissa of the minimum to within xtol.
template <typename F>
double golden_min(F&& f, double a, double b, double xtol) {
  constexpr double ratio = 0.6180339887498949;  // (sqrt(5)-1)/2
  double x1 = b - ratio * (b - a);
  double x2 = a + ratio * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > xtol) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - ratio * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + ratio * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

/// Global scan over n equispaced candidates on [lo,hi] followed by
/// golden-section refinement of the winning bracket. The scan guards
/// against multiple local minima (the order-p energies are not convex
/// for p < 1); the refinement delivers the final accuracy.
template <typename F>
double scan_golden_min(F&& f, double lo, double hi, int n, double xtol) {
  if (!(hi > lo)) return lo;
  int best = 0;
  double fbest = f(lo);
  const double step = (hi - lo) / (n - 1);
  for (int k = 1; k < n; ++k) {
    const double fx = f(lo + k * step);
    if (fx < fbest) {
      fbest = fx;
      best = k;
    }
  }
  const double a = lo + std::max(0, best - 1) * step;
  const double b = lo + std::min(n - 1, best + 1) * step;
  return golden_min(f, a, b, xtol);
}

}  // namespace msmooth
