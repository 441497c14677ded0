#include "renpost/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace renpost {

namespace {

// ln(1e-300); censoring survivals below this saturate instead of aborting
// the replication.
constexpr double kLogSurvFloor = -690.775527898213705;

}  // namespace

namespace detail {

PosteriorAccumulator::PosteriorAccumulator(const ArrivalPath& path,
                                           const SystemSpec& spec)
    : path_(path), spec_(spec) {
  const std::size_t k = spec.prior.size();
  mu_.resize(k);
  log_mu_.resize(k);
  log_prior_.resize(k);
  arrival_sum_.assign(k, 0.0);
  mu0_ = spec.mu_base();
  log_mu0_ = std::log(mu0_);
  last_epoch_ = -path.residual_age_used;
  for (std::size_t i = 0; i < k; ++i) {
    mu_[i] = spec.mu_of(spec.prior.support[i]);
    log_mu_[i] = std::log(mu_[i]);
    log_prior_[i] = spec.prior.probs[i] > 0
                        ? std::log(spec.prior.probs[i])
                        : -std::numeric_limits<double>::infinity();
  }
  // Residual-age prefactor ln((1-F_0(t_v))/(1-F_l(t_v))); constant in t.
  const double tv = path.residual_age_used;
  if (tv > 0) {
    const double base = censor_term_base(tv);
    for (std::size_t i = 0; i < k; ++i) {
      arrival_sum_[i] += base - safe_log_survival(tv * mu_[i]);
    }
  }
}

double PosteriorAccumulator::safe_log_survival(double x) {
  const double v = spec_.density.log_survival(x);
  if (v < kLogSurvFloor || !std::isfinite(v)) {
    saturated_ = true;
    return kLogSurvFloor;
  }
  return v;
}

double PosteriorAccumulator::censor_term_base(double age) {
  return safe_log_survival(age * mu0_);
}

void PosteriorAccumulator::advance(double nt) {
  const std::size_t k = mu_.size();
  const auto& epochs = path_.epochs;
  while (next_arrival_ < epochs.size() && epochs[next_arrival_] <= nt) {
    const double w = epochs[next_arrival_] - last_epoch_;
    const double base = log_mu0_ + spec_.density.log_pdf(w * mu0_);
    for (std::size_t i = 0; i < k; ++i) {
      arrival_sum_[i] +=
          log_mu_[i] + spec_.density.log_pdf(w * mu_[i]) - base;
    }
    last_epoch_ = epochs[next_arrival_];
    ++next_arrival_;
  }
}

void PosteriorAccumulator::log_phi_at(double nt, std::vector<double>& out) {
  const std::size_t k = mu_.size();
  out.resize(k);
  const double age = std::max(0.0, nt - last_epoch_);
  if (age == 0) {
    for (std::size_t i = 0; i < k; ++i) out[i] = arrival_sum_[i];
    return;
  }
  const double base = censor_term_base(age);
  for (std::size_t i = 0; i < k; ++i) {
    out[i] = arrival_sum_[i] + safe_log_survival(age * mu_[i]) - base;
  }
}

void PosteriorAccumulator::probs_from_log_phi(
    std::vector<double>& phi_to_probs) const {
  const std::size_t k = phi_to_probs.size();
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < k; ++i) {
    phi_to_probs[i] += log_prior_[i];
    m = std::max(m, phi_to_probs[i]);
  }
  double sum = 0;
  for (std::size_t i = 0; i < k; ++i) {
    phi_to_probs[i] = std::exp(phi_to_probs[i] - m);
    sum += phi_to_probs[i];
  }
  for (std::size_t i = 0; i < k; ++i) phi_to_probs[i] /= sum;
}

void PosteriorAccumulator::probs_at(double nt, std::vector<double>& out) {
  log_phi_at(nt, out);
  probs_from_log_phi(out);
}

}  // namespace detail

double log_likelihood(const ArrivalPath& path, const SystemSpec& spec,
                      double l, double t) {
  if (t < 0 || t > spec.horizon) {
    throw std::domain_error("log_likelihood: t outside [0, horizon]");
  }
  detail::PosteriorAccumulator acc(path, spec);
  const double nt = static_cast<double>(spec.n) * t;
  acc.advance(nt);
  std::vector<double> phi;
  acc.log_phi_at(nt, phi);
  const std::size_t idx = spec.prior.index_of(l);
  return phi[idx];
}

void posterior_path_into(const ArrivalPath& path, const SystemSpec& spec,
                         double dt, PosteriorPath& out) {
  if (!(dt > 0)) throw std::domain_error("posterior_path: dt must be positive");
  const double n = static_cast<double>(spec.n);
  const double end = n * spec.horizon;

  // grid assembled in unscaled time so arrival epochs are hit exactly
  static thread_local std::vector<double> grid_unscaled;
  grid_unscaled.clear();
  const double step = dt * n;
  for (std::int64_t i = 0; static_cast<double>(i) * step < end; ++i) {
    grid_unscaled.push_back(static_cast<double>(i) * step);
  }
  grid_unscaled.push_back(end);
  grid_unscaled.insert(grid_unscaled.end(), path.epochs.begin(),
                       path.epochs.end());
  std::sort(grid_unscaled.begin(), grid_unscaled.end());
  grid_unscaled.erase(std::unique(grid_unscaled.begin(), grid_unscaled.end()),
                      grid_unscaled.end());
  while (!grid_unscaled.empty() && grid_unscaled.back() > end) {
    grid_unscaled.pop_back();
  }

  out.clear();
  out.support = spec.prior.support;
  const std::size_t width = out.support.size();
  out.grid.reserve(grid_unscaled.size());
  out.log_phi_flat.reserve(grid_unscaled.size() * width);
  out.probs_flat.reserve(grid_unscaled.size() * width);

  detail::PosteriorAccumulator acc(path, spec);
  std::vector<double> phi, probs;
  for (double g : grid_unscaled) {
    acc.advance(g);
    acc.log_phi_at(g, phi);
    probs = phi;
    acc.probs_from_log_phi(probs);
    out.grid.push_back(g / n);
    out.log_phi_flat.insert(out.log_phi_flat.end(), phi.begin(), phi.end());
    out.probs_flat.insert(out.probs_flat.end(), probs.begin(), probs.end());
  }
  out.survival_saturated = acc.saturated();
}

PosteriorPath posterior_path(const ArrivalPath& path, const SystemSpec& spec,
                             double dt) {
  PosteriorPath out;
  posterior_path_into(path, spec, dt, out);
  return out;
}

namespace {

std::vector<std::vector<double>> marginal_samples_at(const SystemSpec& spec,
                                                     double eval_t,
                                                     std::int64_t reps,
                                                     RngStream root) {
  SystemSpec local = spec;
  local.horizon = eval_t;
  const double nt = static_cast<double>(local.n) * eval_t;
  std::vector<std::vector<double>> out(
      spec.prior.size(), std::vector<double>(static_cast<std::size_t>(reps)));
  std::vector<double> probs;
  for (std::int64_t r = 0; r < reps; ++r) {
    RngStream stream = root.substream(static_cast<std::uint64_t>(r));
    ArrivalPath path = simulate_path(local, stream);
    detail::PosteriorAccumulator acc(path, local);
    acc.advance(nt);
    acc.probs_at(nt, probs);
    for (std::size_t k = 0; k < probs.size(); ++k) {
      out[k][static_cast<std::size_t>(r)] = probs[k];
    }
  }
  return out;
}

}  // namespace

std::vector<std::vector<double>> posterior_marginal_samples(
    const SystemSpec& spec, double t, std::int64_t reps, RngStream root) {
  return marginal_samples_at(spec, t, reps, root);
}

std::vector<std::vector<double>> posterior_marginal_samples_busy(
    const SystemSpec& spec, double t, std::int64_t reps, RngStream root) {
  return marginal_samples_at(spec, spec.rho * t, reps, root);
}

void write_csv(const PosteriorPath& path, std::ostream& os) {
  os << "t";
  for (double l : path.support) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "pi_%g", l);
    os << ',' << buf;
  }
  os << '\n';
  char num[64];
  for (std::size_t i = 0; i < path.grid.size(); ++i) {
    std::snprintf(num, sizeof(num), "%.17g", path.grid[i]);
    os << num;
    for (double p : path.probs[i]) {
      std::snprintf(num, sizeof(num), "%.17g", p);
      os << ',' << num;
    }
    os << '\n';
  }
}

}  // namespace renpost
