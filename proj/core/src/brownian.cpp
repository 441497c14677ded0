#include "renpost/brownian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace renpost {

BrownianPosteriorSpec::BrownianPosteriorSpec(double sigma_in, Prior prior_in,
                                             double horizon_in,
                                             double grid_step_in)
    : sigma(sigma_in),
      prior(std::move(prior_in)),
      horizon(horizon_in),
      grid_step(grid_step_in) {
  if (!(sigma > 0)) throw ConfigError("brownian: sigma must be positive");
  if (!(horizon >= 0)) throw ConfigError("brownian: horizon must be >= 0");
  if (!(grid_step > 0)) throw ConfigError("brownian: grid_step must be > 0");
}

double rn_log_density(double sigma, double l, double x, double t) {
  return (l / (sigma * sigma)) * x - 0.5 * (l / sigma) * (l / sigma) * t;
}

double rn_density(double sigma, double l, double x, double t) {
  return std::exp(rn_log_density(sigma, l, x, t));
}

namespace {

void posterior_from_endpoint(const BrownianPosteriorSpec& spec, double x,
                             double t, std::vector<double>& out) {
  const std::size_t k = spec.prior.size();
  out.resize(k);
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < k; ++i) {
    const double lp = spec.prior.probs[i] > 0
                          ? std::log(spec.prior.probs[i])
                          : -std::numeric_limits<double>::infinity();
    out[i] = rn_log_density(spec.sigma, spec.prior.support[i], x, t) + lp;
    m = std::max(m, out[i]);
  }
  double sum = 0;
  for (std::size_t i = 0; i < k; ++i) {
    out[i] = std::exp(out[i] - m);
    sum += out[i];
  }
  for (std::size_t i = 0; i < k; ++i) out[i] /= sum;
}

}  // namespace

std::vector<double> posterior_given_endpoint(const BrownianPosteriorSpec& spec,
                                             double x, double t) {
  if (t < 0) throw std::domain_error("posterior_given_endpoint: t < 0");
  std::vector<double> out;
  posterior_from_endpoint(spec, x, t, out);
  return out;
}

std::vector<std::vector<double>> sample_posterior_marginal(
    const BrownianPosteriorSpec& spec, double t, std::int64_t reps,
    RngStream root) {
  std::vector<std::vector<double>> out(
      spec.prior.size(), std::vector<double>(static_cast<std::size_t>(reps)));
  std::vector<double> probs;
  const double sqt = std::sqrt(t);
  for (std::int64_t r = 0; r < reps; ++r) {
    RngStream stream = root.substream(static_cast<std::uint64_t>(r));
    const double theta = spec.prior.draw(stream);
    const double x = theta * t + spec.sigma * sqt * stream.normal();
    posterior_from_endpoint(spec, x, t, probs);
    for (std::size_t k = 0; k < probs.size(); ++k) {
      out[k][static_cast<std::size_t>(r)] = probs[k];
    }
  }
  return out;
}

void posterior_path_brownian_into(const BrownianPosteriorSpec& spec,
                                  std::optional<double> theta_fixed,
                                  RngStream& rng, PosteriorPath& out) {
  const double theta =
      theta_fixed.has_value() ? *theta_fixed : spec.prior.draw(rng);
  const double dt = spec.grid_step;
  const std::int64_t steps =
      static_cast<std::int64_t>(std::ceil(spec.horizon / dt - 1e-12));
  out.clear();
  out.support = spec.prior.support;
  const std::size_t k = spec.prior.size();
  out.grid.reserve(static_cast<std::size_t>(steps) + 1);
  out.log_phi_flat.reserve((static_cast<std::size_t>(steps) + 1) * k);
  out.probs_flat.reserve((static_cast<std::size_t>(steps) + 1) * k);

  std::vector<double> phi(k), probs;
  double x = 0;
  double t_prev = 0;
  for (std::int64_t i = 0; i <= steps; ++i) {
    const double t = (i == steps) ? spec.horizon
                                  : static_cast<double>(i) * dt;
    if (i > 0 && t > t_prev) {
      const double step = t - t_prev;
      x += theta * step + spec.sigma * std::sqrt(step) * rng.normal();
    }
    for (std::size_t j = 0; j < k; ++j) {
      phi[j] = rn_log_density(spec.sigma, spec.prior.support[j], x, t);
    }
    probs = phi;
    posterior_from_endpoint(spec, x, t, probs);
    out.grid.push_back(t);
    out.log_phi_flat.insert(out.log_phi_flat.end(), phi.begin(), phi.end());
    out.probs_flat.insert(out.probs_flat.end(), probs.begin(), probs.end());
    t_prev = t;
  }
}

PosteriorPath posterior_path_brownian(const BrownianPosteriorSpec& spec,
                                      std::optional<double> theta_fixed,
                                      RngStream& rng) {
  PosteriorPath out;
  posterior_path_brownian_into(spec, theta_fixed, rng, out);
  return out;
}

}  // namespace renpost
