#pragma once

#include <stdexcept>
#include <string>

namespace renpost {

// Thrown when an iterative numeric routine (quadrature, incomplete gamma,
// root bracketing) fails to meet its tolerance.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Standard normal cdf, accurate to ~1e-16 relative in both tails.
double normal_cdf(double x);

// Inverse standard normal cdf for p in (0,1). Acklam's rational
// approximation polished with one Halley step; |relative error| < 1e-14.
double normal_quantile(double p);

// Regularized lower incomplete gamma P(a,x) and its complement Q(a,x).
// Series expansion for x < a+1, Lentz continued fraction otherwise.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

}  // namespace renpost
