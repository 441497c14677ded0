#include "renpost/system.hpp"

#include <algorithm>
#include <cmath>

namespace renpost {

Prior::Prior(std::vector<double> support_in, std::vector<double> probs_in)
    : support(std::move(support_in)), probs(std::move(probs_in)) {
  if (support.empty() || support.size() != probs.size()) {
    throw ConfigError("prior: support and probs must be nonempty and aligned");
  }
  for (std::size_t i = 1; i < support.size(); ++i) {
    if (!(support[i] > support[i - 1])) {
      throw ConfigError("prior: support must be strictly ascending");
    }
  }
  double sum = 0;
  for (double p : probs) {
    if (p < 0) throw ConfigError("prior: negative probability");
    sum += p;
  }
  if (std::fabs(sum - 1) > 1e-12) {
    throw ConfigError("prior: probabilities sum to " + std::to_string(sum));
  }
}

Prior Prior::uniform(std::vector<double> support_in) {
  const std::size_t k = support_in.size();
  return Prior(std::move(support_in),
               std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

Prior Prior::point_mass(double value) { return Prior({value}, {1.0}); }

std::size_t Prior::index_of(double value) const {
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (support[i] == value) return i;
  }
  throw ConfigError("prior: value not in support");
}

double Prior::draw(RngStream& rng) const {
  const double u = rng.uniform01();
  double acc = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u <= acc) return support[i];
  }
  return support.back();
}

SystemSpec::SystemSpec(std::int64_t n_in, double alpha_in, Prior prior_in,
                       DensityModel density_in, double horizon_in,
                       double t_u_in, double rho_in)
    : n(n_in),
      alpha(alpha_in),
      prior(std::move(prior_in)),
      density(std::move(density_in)),
      t_u(t_u_in),
      rho(rho_in),
      horizon(horizon_in) {
  if (n <= 0) throw ConfigError("system: n must be positive");
  if (!(alpha > 0)) throw ConfigError("system: alpha must be positive");
  if (!(horizon >= 0)) throw ConfigError("system: horizon must be nonnegative");
  if (t_u < 0) throw ConfigError("system: t_u must be nonnegative");
  if (!(rho > 0 && rho <= 1)) throw ConfigError("system: rho must be in (0,1]");
  rates(*this);  // validates positivity of every mu_l
}

std::vector<double> rates(const SystemSpec& spec) {
  std::vector<double> out;
  out.reserve(spec.prior.size());
  for (double l : spec.prior.support) {
    const double mu = spec.mu_of(l);
    if (!(mu > 0)) {
      throw ConfigError("rate mu_l = " + std::to_string(mu) +
                        " nonpositive for l = " + std::to_string(l));
    }
    out.push_back(mu);
  }
  return out;
}

std::int64_t ArrivalPath::count_up_to(double unscaled_t) const {
  return std::upper_bound(epochs.begin(), epochs.end(), unscaled_t) -
         epochs.begin();
}

ArrivalPath simulate_path(const SystemSpec& spec, RngStream& rng) {
  ArrivalPath path;
  path.theta = spec.prior.draw(rng);
  path.mu = spec.mu_of(path.theta);
  path.residual_age_used = spec.t_u / path.mu;

  const double end = static_cast<double>(spec.n) * spec.horizon;
  const std::size_t expected =
      static_cast<std::size_t>(end * path.mu * 1.1) + 8;
  path.epochs.reserve(expected);
  path.raw_draws.reserve(expected);

  // First interarrival carries the pre-zero residual age (the coupling
  // divides the same unscaled draws by mu for every hypothesis).
  double v1 = spec.density.sample_residual_first(path.mu,
                                                 path.residual_age_used, rng);
  double t = v1;
  double raw = (v1 + path.residual_age_used) * path.mu;
  while (t <= end) {
    path.epochs.push_back(t);
    path.raw_draws.push_back(raw);
    raw = spec.density.sample(rng);
    t += raw / path.mu;
  }
  path.next_epoch_past_horizon = t;
  return path;
}

double scaled_observed(const ArrivalPath& path, const SystemSpec& spec,
                       double t) {
  if (t < 0 || t > spec.horizon) {
    throw std::domain_error("scaled_observed: t outside [0, horizon]");
  }
  const double nt = static_cast<double>(spec.n) * t;
  const double count = static_cast<double>(path.count_up_to(nt));
  return (count - spec.mu_base() * nt) / std::sqrt(double(spec.n));
}

ArrivalPath apply_busy_time(const ArrivalPath& path, const SystemSpec& spec) {
  ArrivalPath out = path;
  const double rho = spec.rho;
  for (double& e : out.epochs) e /= rho;
  out.next_epoch_past_horizon /= rho;
  out.residual_age_used /= rho;
  return out;
}

std::vector<double> score_walk_samples(const DensityModel& density,
                                       std::int64_t n, double t,
                                       std::int64_t reps, RngStream root,
                                       double sigma_f) {
  const std::int64_t count = static_cast<std::int64_t>(
      std::floor(static_cast<double>(n) * t));
  std::vector<double> out(static_cast<std::size_t>(reps));
  const double denom = sigma_f * std::sqrt(double(n));
  for (std::int64_t r = 0; r < reps; ++r) {
    RngStream stream = root.substream(static_cast<std::uint64_t>(r));
    double sum = 0;
    for (std::int64_t i = 0; i < count; ++i) {
      const double v = density.sample(stream);
      sum += -density.score(v);
    }
    out[static_cast<std::size_t>(r)] =
        (sum - static_cast<double>(n) * t) / denom;
  }
  return out;
}

std::vector<double> score_walk(const std::vector<ArrivalPath>& paths,
                               const DensityModel& density, std::int64_t n,
                               double t, double sigma_f) {
  const std::size_t count =
      static_cast<std::size_t>(std::floor(static_cast<double>(n) * t));
  std::vector<double> out;
  out.reserve(paths.size());
  const double denom = sigma_f * std::sqrt(double(n));
  for (const ArrivalPath& path : paths) {
    if (path.raw_draws.size() < count) {
      throw std::invalid_argument(
          "score_walk: path carries fewer than floor(nt) draws");
    }
    double sum = 0;
    for (std::size_t i = 0; i < count; ++i) {
      sum += -density.score(path.raw_draws[i]);
    }
    out.push_back((sum - static_cast<double>(n) * t) / denom);
  }
  return out;
}

}  // namespace renpost
