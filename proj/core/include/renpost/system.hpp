#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "renpost/density.hpp"
#include "renpost/rng.hpp"

namespace renpost {

// Finite prior over the drift parameter theta.
struct Prior {
  std::vector<double> support;  // distinct, ascending
  std::vector<double> probs;    // nonnegative, sums to 1 within 1e-12

  Prior(std::vector<double> support_in, std::vector<double> probs_in);

  static Prior uniform(std::vector<double> support_in);
  static Prior point_mass(double value);

  std::size_t size() const { return support.size(); }
  std::size_t index_of(double value) const;  // throws if absent
  double draw(RngStream& rng) const;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// The n-th random-parameter system. Rates follow mu_l = alpha + l/sqrt(n),
// so the rate-gap function h^n(l) = sqrt(n)(mu_l - mu_0) equals l exactly
// and the reference rate mu_0 equals alpha exactly.
struct SystemSpec {
  std::int64_t n = 1;
  double alpha = 1;
  Prior prior;
  DensityModel density;
  double t_u = 0;       // residual age before t=0, in unscaled v-units
  double rho = 1;       // busy-time fraction in (0,1]
  double horizon = 1;   // scaled-time horizon T

  SystemSpec(std::int64_t n_in, double alpha_in, Prior prior_in,
             DensityModel density_in, double horizon_in, double t_u_in = 0,
             double rho_in = 1);

  double mu_of(double l) const { return alpha + l / std::sqrt(double(n)); }
  double mu_base() const { return alpha; }
};

// Rates per support point, in support order. Throws ConfigError if any rate
// is nonpositive.
std::vector<double> rates(const SystemSpec& spec);

// One realized arrival path of the system, in unscaled time over [0, nT].
// raw_draws holds the unscaled interarrival variables behind the epochs
// (the shared coupling variables): raw_draws[0] is the full first
// interarrival including the pre-zero age t_u; raw_draws[i>=1] are iid
// draws of v. One extra draw past the horizon supplies the censoring
// residual and is kept in next_epoch_past_horizon.
struct ArrivalPath {
  double theta = 0;
  double mu = 0;                   // realized rate mu_theta
  double residual_age_used = 0;    // t_v^n = t_u / mu_theta
  std::vector<double> epochs;      // strictly increasing, <= nT
  std::vector<double> raw_draws;   // unscaled v draws, one per epoch
  double next_epoch_past_horizon = 0;

  std::int64_t count_up_to(double unscaled_t) const;
};

ArrivalPath simulate_path(const SystemSpec& spec, RngStream& rng);

// Scaled observed process Ltilde^n(t) = (L^n(nt) - mu_0 * nt) / sqrt(n),
// centered at the reference rate the DM knows, not at mu_theta.
double scaled_observed(const ArrivalPath& path, const SystemSpec& spec,
                       double t);

// Path re-expressed on the calendar clock of a system that works a
// deterministic fraction rho of the time: an arrival at working time u is
// observed at calendar time u/rho. Posteriors of the intermittent system at
// calendar time t equal posteriors of the underlying path at rho*t.
ArrivalPath apply_busy_time(const ArrivalPath& path, const SystemSpec& spec);

// Score walk Wtilde^n(t) = (sum_{i<=floor(nt)} [-f'(v_i)/f(v_i) v_i] - nt)
// / (sigma_f sqrt(n)); asymptotically a standard Brownian motion.
// Direct form: one sample per replication from fresh iid draws.
std::vector<double> score_walk_samples(const DensityModel& density,
                                       std::int64_t n, double t,
                                       std::int64_t reps, RngStream root,
                                       double sigma_f);

// Path-ensemble form; each path must carry at least floor(nt) raw draws.
std::vector<double> score_walk(const std::vector<ArrivalPath>& paths,
                               const DensityModel& density, std::int64_t n,
                               double t, double sigma_f);

}  // namespace renpost
