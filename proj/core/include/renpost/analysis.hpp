#pragma once

#include <cstdint>
#include <vector>

namespace renpost {

struct KsReport {
  double statistic = 0;      // sup-norm distance of the empirical cdfs
  std::size_t n_first = 0;
  std::size_t n_second = 0;  // 0 for one-sample tests
  double critical_005 = 0;   // 5% asymptotic critical value
  bool reject_at_005 = false;
};

// Classical two-sample Kolmogorov-Smirnov statistic with the asymptotic 5%
// critical value 1.358*sqrt((m+n)/(mn)). Ties (atoms) are handled by
// stepping both empirical cdfs through shared points.
KsReport ks_two_sample(std::vector<double> xs, std::vector<double> ys);

// One-sample KS against the standard normal cdf.
KsReport ks_vs_normal(std::vector<double> xs);

struct MartingaleCheck {
  double mean = 0;
  double stderr_mean = 0;
  double z = 0;
  bool pass = false;  // |z| < 3
};

MartingaleCheck martingale_check(const std::vector<double>& samples,
                                 double prior_value);

struct McEstimate {
  double mean = 0;
  double stderr_mean = 0;
  std::int64_t reps = 0;
  double ci_lo = 0;  // 95% normal interval
  double ci_hi = 0;
  std::uint64_t seed = 0;
};

McEstimate mc_estimate(const std::vector<double>& samples, std::uint64_t seed);

}  // namespace renpost
