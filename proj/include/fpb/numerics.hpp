#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "fpb/entropy.hpp"

namespace fpb {

/// Root of f on [lo, hi] by bisection; f(lo) and f(hi) must differ in sign.
template <typename F>
double bisect(F&& f, double lo, double hi, double tol = 1e-12, int max_iter = 200) {
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) throw std::invalid_argument("bisect: no sign change on the bracket");
  for (int i = 0; i < max_iter && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// `steps` evenly spaced points from lo to hi inclusive; endpoints exact.
inline std::vector<double> linspace(double lo, double hi, std::size_t steps) {
  if (steps < 2) throw std::invalid_argument("linspace needs at least 2 steps");
  std::vector<double> out(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
  }
  out.back() = hi;
  return out;
}

/// Error rate at which 1 - 2h(delta) vanishes (about 11%).
inline double shor_preskill_threshold() {
  return bisect([](double d) { return 1.0 - 2.0 * binary_entropy(d); }, 1e-6, 0.5);
}

}  // namespace fpb
