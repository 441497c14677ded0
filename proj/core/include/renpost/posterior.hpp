#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "renpost/system.hpp"

namespace renpost {

// Time-indexed posterior over the prior support. log_phi holds log
// Radon-Nikodym values against the reference-rate hypothesis (l = 0, rate
// alpha); when 0 is in the support its column is exactly zero. Rows are
// stored flat with stride width() to keep Monte-Carlo loops allocation-free.
struct PosteriorPath {
  std::vector<double> support;
  std::vector<double> grid;            // scaled times, ascending
  std::vector<double> log_phi_flat;    // grid.size() * width()
  std::vector<double> probs_flat;      // grid.size() * width()
  bool survival_saturated = false;     // a censoring survival underflowed

  std::size_t width() const { return support.size(); }
  std::size_t points() const { return grid.size(); }
  double log_phi(std::size_t i, std::size_t k) const {
    return log_phi_flat[i * support.size() + k];
  }
  double prob(std::size_t i, std::size_t k) const {
    return probs_flat[i * support.size() + k];
  }
  void clear() {
    grid.clear();
    log_phi_flat.clear();
    probs_flat.clear();
    survival_saturated = false;
  }
};

// log phitilde^n(l, t): the exact likelihood ratio of the observations up
// to scaled time t under rate mu_l against the reference rate mu_0 = alpha.
// Three terms: arrival density ratios (the first arrival evaluated at its
// full age including t_v), the residual-age survival prefactor, and the
// censoring survival ratio at the age since the last arrival.
double log_likelihood(const ArrivalPath& path, const SystemSpec& spec,
                      double l, double t);

// Posterior over the whole support on the grid {multiples of dt} union
// {scaled arrival epochs} union {horizon}. Probabilities are formed by
// log-sum-exp normalization of log_phi + log prior.
PosteriorPath posterior_path(const ArrivalPath& path, const SystemSpec& spec,
                             double dt);

// Buffer-reusing variant for replication loops.
void posterior_path_into(const ArrivalPath& path, const SystemSpec& spec,
                         double dt, PosteriorPath& out);

// Monte-Carlo samples of the scaled posterior marginal at a fixed time:
// samples[k][r] is the posterior mass on support point k in replication r.
std::vector<std::vector<double>> posterior_marginal_samples(
    const SystemSpec& spec, double t, std::int64_t reps, RngStream root);

// As above, but the posterior is evaluated at busy time rho*t, the filter
// of an intermittently working system observed at calendar time t.
std::vector<std::vector<double>> posterior_marginal_samples_busy(
    const SystemSpec& spec, double t, std::int64_t reps, RngStream root);

// CSV with header "t,pi_<l1>,pi_<l2>,...", 17 significant digits.
void write_csv(const PosteriorPath& path, std::ostream& os);

namespace detail {

// Incremental evaluator used by posterior_path and the stopping module:
// feeds arrivals one at a time and evaluates the posterior between them.
class PosteriorAccumulator {
 public:
  PosteriorAccumulator(const ArrivalPath& path, const SystemSpec& spec);

  // Advance past all arrivals with epoch <= unscaled time nt.
  void advance(double nt);
  // log_phi vector at unscaled time nt (>= last advanced arrival epoch).
  void log_phi_at(double nt, std::vector<double>& out);
  // posterior probabilities at unscaled time nt
  void probs_at(double nt, std::vector<double>& out);
  // normalize a log_phi vector in place against the prior
  void probs_from_log_phi(std::vector<double>& phi_to_probs) const;

  bool saturated() const { return saturated_; }

 private:
  const ArrivalPath& path_;
  const SystemSpec& spec_;
  std::vector<double> mu_;           // per support point
  std::vector<double> log_mu_;
  std::vector<double> log_prior_;
  std::vector<double> arrival_sum_;  // accumulated density-ratio terms
  double mu0_;
  double log_mu0_;
  std::size_t next_arrival_ = 0;
  double last_epoch_;  // -t_v^n before the first arrival
  bool saturated_ = false;

  double safe_log_survival(double x);
  double censor_term_base(double age);
};

}  // namespace detail

}  // namespace renpost
