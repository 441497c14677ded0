#include "renpost/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "renpost/special.hpp"

namespace renpost {

KsReport ks_two_sample(std::vector<double> xs, std::vector<double> ys) {
  if (xs.empty() || ys.empty()) {
    throw std::invalid_argument("ks_two_sample: empty sample");
  }
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  const double m = static_cast<double>(xs.size());
  const double n = static_cast<double>(ys.size());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < xs.size() && j < ys.size()) {
    const double v = std::min(xs[i], ys[j]);
    while (i < xs.size() && xs[i] <= v) ++i;
    while (j < ys.size() && ys[j] <= v) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / m -
                              static_cast<double>(j) / n));
  }
  KsReport out;
  out.statistic = d;
  out.n_first = xs.size();
  out.n_second = ys.size();
  out.critical_005 = 1.358 * std::sqrt((m + n) / (m * n));
  out.reject_at_005 = d > out.critical_005;
  return out;
}

KsReport ks_vs_normal(std::vector<double> xs) {
  if (xs.empty()) throw std::invalid_argument("ks_vs_normal: empty sample");
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double cdf = normal_cdf(xs[i]);
    d = std::max(d, std::fabs(static_cast<double>(i) / n - cdf));
    d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - cdf));
  }
  KsReport out;
  out.statistic = d;
  out.n_first = xs.size();
  out.n_second = 0;
  out.critical_005 = 1.358 / std::sqrt(n);
  out.reject_at_005 = d > out.critical_005;
  return out;
}

MartingaleCheck martingale_check(const std::vector<double>& samples,
                                 double prior_value) {
  if (samples.empty()) {
    throw std::invalid_argument("martingale_check: empty sample");
  }
  double sum = 0;
  for (double s : samples) sum += s;
  const double n = static_cast<double>(samples.size());
  const double mean = sum / n;
  double ss = 0;
  for (double s : samples) ss += (s - mean) * (s - mean);
  const double se = std::sqrt(ss / (n - 1) / n);
  MartingaleCheck out;
  out.mean = mean;
  out.stderr_mean = se;
  out.z = se > 0 ? (mean - prior_value) / se
                 : (mean == prior_value ? 0
                                        : std::numeric_limits<double>::infinity());
  out.pass = std::fabs(out.z) < 3;
  return out;
}

McEstimate mc_estimate(const std::vector<double>& samples, std::uint64_t seed) {
  if (samples.empty()) throw std::invalid_argument("mc_estimate: empty sample");
  double sum = 0;
  for (double s : samples) sum += s;
  const double n = static_cast<double>(samples.size());
  const double mean = sum / n;
  double ss = 0;
  for (double s : samples) ss += (s - mean) * (s - mean);
  const double se = samples.size() > 1 ? std::sqrt(ss / (n - 1) / n) : 0;
  McEstimate out;
  out.mean = mean;
  out.stderr_mean = se;
  out.reps = static_cast<std::int64_t>(samples.size());
  out.ci_lo = mean - 1.96 * se;
  out.ci_hi = mean + 1.96 * se;
  out.seed = seed;
  return out;
}

}  // namespace renpost
