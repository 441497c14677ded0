#pragma once

#include <functional>

namespace renpost {

struct QuadResult {
  double value = 0;
  double abs_error = 0;
  int panels = 0;
};

// Adaptive Gauss-Kronrod (G7,K15) on a finite interval. Bisects panels until
// the summed error estimate is below abs_tol; throws NumericError past the
// depth limit.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol);

// Integral over (a, infinity) via the substitution x = a + t/(1-t).
QuadResult integrate_upper(const std::function<double(double)>& f, double a,
                           double abs_tol);

// Integral over (0, infinity) split at a positive interior point (typically
// the distribution mean) so each half has a single scale.
QuadResult integrate_positive_axis(const std::function<double(double)>& f,
                                   double split, double abs_tol);

}  // namespace renpost
