#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "renpost/posterior.hpp"
#include "renpost/system.hpp"

namespace renpost {

// Posterior machinery for X(t) = theta*t + sigma*W(t) with theta drawn from
// a finite prior. The posterior at time t is a function of X(t) alone.
struct BrownianPosteriorSpec {
  double sigma;
  Prior prior;
  double horizon;
  double grid_step;

  BrownianPosteriorSpec(double sigma_in, Prior prior_in, double horizon_in,
                        double grid_step_in);
};

// log of the likelihood-ratio density exp{(l/sigma^2) x - (l/sigma)^2 t / 2}.
double rn_log_density(double sigma, double l, double x, double t);
double rn_density(double sigma, double l, double x, double t);

// Posterior over the support given the endpoint X(t) = x; depends on the
// path only through x.
std::vector<double> posterior_given_endpoint(const BrownianPosteriorSpec& spec,
                                             double x, double t);

// Monte-Carlo samples of the posterior marginal at time t: theta ~ prior,
// X(t) = theta t + sigma sqrt(t) Z. samples[k][r] as in the system module.
std::vector<std::vector<double>> sample_posterior_marginal(
    const BrownianPosteriorSpec& spec, double t, std::int64_t reps,
    RngStream root);

// Posterior path on the uniform grid with exact Gaussian increments for X.
// theta_fixed overrides the prior draw (the prior still drives the filter).
PosteriorPath posterior_path_brownian(const BrownianPosteriorSpec& spec,
                                      std::optional<double> theta_fixed,
                                      RngStream& rng);

// Buffer-reusing variant for replication loops.
void posterior_path_brownian_into(const BrownianPosteriorSpec& spec,
                                  std::optional<double> theta_fixed,
                                  RngStream& rng, PosteriorPath& out);

}  // namespace renpost
