#pragma once

#include <array>
#include <cmath>

namespace bfa {

// 8-point Gauss-Legendre nodes and weights on [-1,1]; exact through
// polynomial degree 15.
inline constexpr std::array<double, 4> gl8_nodes = {
    0.1834346424956498049394761,
    0.5255324099163289858177390,
    0.7966664774136267395915539,
    0.9602898564975362316835609,
};
inline constexpr std::array<double, 4> gl8_weights = {
    0.3626837833783619829651504,
    0.3137066458778872873379622,
    0.2223810344533744705443560,
    0.1012285362903762591525314,
};

template <class F>
double gauss8(F&& fn, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int k = 0; k < 4; ++k) {
    const double dx = half * gl8_nodes[k];
    sum += gl8_weights[k] * (fn(mid - dx) + fn(mid + dx));
  }
  return half * sum;
}

// Composite rule with fixed panel count.
template <class F>
double integrate_panels(F&& fn, double a, double b, int panels) {
  double sum = 0.0;
  const double h = (b - a) / panels;
  for (int k = 0; k < panels; ++k)
    sum += gauss8(fn, a + k * h, a + (k + 1) * h);
  return sum;
}

// Composite rule with a panel-width cap, so high-degree integrands on long
// segments stay inside the quadrature's exactness range.
template <class F>
double integrate_capped(F&& fn, double a, double b, double max_panel) {
  if (b <= a) return 0.0;
  const int panels =
      std::max(1, static_cast<int>(std::ceil((b - a) / max_panel)));
  return integrate_panels(fn, a, b, panels);
}

// Root of a continuous function bracketed by [lo, hi]; fn(lo) and fn(hi)
// must have opposite signs (or one of them be zero).
template <class F>
double bisect(F&& fn, double lo, double hi, double tol) {
  double flo = fn(lo);
  if (flo == 0.0) return lo;
  for (int iter = 0; iter < 200 && hi - lo > tol; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = fn(mid);
    if (fmid == 0.0) return mid;
    if ((flo < 0.0) == (fmid < 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace bfa
