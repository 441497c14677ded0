#pragma once

#include <string>
#include <vector>

#include "renpost/rng.hpp"

namespace renpost {

// Interarrival density families. Every family is internally rescaled so the
// mean is exactly 1; the support is (0,inf) and the pdf is strictly positive
// on it.
enum class Family {
  kGamma,            // shape beta, rate beta
  kWeibull,          // shape k, scale 1/Gamma(1+1/k)
  kLogNormal,        // log-sd s, log-mean -s^2/2
  kRayleigh,         // sigma = sqrt(2/pi)
  kMaxwellBoltzmann, // a = sqrt(pi/2)/2
  kTruncatedCubic,   // cubic-tail core C/(1+x^3) cut at y, exponential tail
};

// Two noise functionals of a density model:
//   sigma_v     sd of the mean-1 interarrival variable v
//   sigma_f     sd of the score statistic f'(v)/f(v) * v
//   sigma_prime sqrt(alpha)/sigma_f, the limit noise of the posterior process
//   product     sigma_f * sigma_v (>= 1, with equality exactly for gamma)
struct DensityFunctionals {
  double sigma_v = 0;
  double sigma_f = 0;
  double sigma_prime = 0;
  double product = 0;
};

// The three integration-by-parts identities of the score statistic:
//   E[f'(v)/f(v) v]        = -1
//   E[(f'/f)'(v) v^2]      = 1 - sigma_f^2
//   E[f'(v)/f(v) v^2]      = -2
// computed by quadrature; callers assert the targets.
struct ScoreIdentityReport {
  double mean_score = 0;
  double mean_dscore_v2 = 0;
  double mean_score_v2 = 0;
};

class DensityModel {
 public:
  static DensityModel gamma(double shape);
  static DensityModel weibull(double shape);
  static DensityModel log_normal(double log_sd);
  static DensityModel rayleigh();
  static DensityModel maxwell_boltzmann();
  // Heavy-tail family used to make sigma_v - 1/sigma_f large: the core
  // C/(1+x^3) with C = 2*pi/3^1.5 on (0, cutoff), glued over a unit window
  // by a C^3 smoothstep to c*exp(-x), with two polynomial bump terms solved
  // so that mass and mean are exactly 1. Requires cutoff > 16.
  static DensityModel truncated_cubic(double cutoff);

  Family family() const { return family_; }
  double parameter() const { return param_; }

  double pdf(double x) const;       // x > 0; throws std::domain_error otherwise
  double log_pdf(double x) const;   // x > 0
  double cdf(double x) const;       // x >= 0
  double survival(double x) const;  // cdf + survival == 1 exactly
  double log_survival(double x) const;

  // Score statistic f'(x)/f(x) * x, closed form per family.
  double score(double x) const;
  // d/dx of score(x); finite differences for the truncated-cubic composite.
  double score_derivative(double x) const;

  // Inverse cdf. Closed form where the family admits one, otherwise
  // bisection on the cdf to 1e-12 in probability.
  double quantile(double p) const;

  // One draw of v (mean 1, unscaled).
  double sample(RngStream& rng) const;

  // First interarrival of a system with rate mu whose last arrival happened
  // t_v time units (in 1/mu-scaled time) before t=0: returns v1 >= 0 such
  // that v1 + t_v is distributed as (v/mu | v/mu >= t_v). Inverse-cdf on the
  // conditional survival, tolerance 1e-12 in probability.
  double sample_residual_first(double mu, double t_v, RngStream& rng) const;

  std::string describe() const;

  // Interior points where the pdf changes analytic piece; quadratures over
  // (0,inf) split here so narrow features are never skipped.
  std::vector<double> quadrature_breakpoints() const;

 private:
  DensityModel(Family family, double param);
  void init_truncated_cubic();

  double cdf_raw(double x) const;
  double survival_raw(double x) const;

  // truncated-cubic pieces
  double tc_blend_pdf(double x) const;
  double tc_blend_pdf_derivative(double x) const;

  Family family_;
  double param_;
  double scale_ = 1;     // family-specific cached scale
  double log_norm_ = 0;  // family-specific cached log normalization

  // cached truncated-cubic coefficients
  double tc_tail_coeff_ = 0;   // c in c*exp(-x) past the glue window
  double tc_bump1_coeff_ = 0;  // mass-correction bump on (1/8, 1/4)
  double tc_bump2_coeff_ = 0;  // mean-correction bump on (8, 9)
  double tc_glue_mass_ = 0;    // mass of the blend window
  double tc_cdf_at_glue_ = 0;  // cdf at the glue start (cutoff)
};

// sigma_v and sigma_f by adaptive quadrature (abs tol 1e-9), and the derived
// noise levels for a given alpha. Throws NumericError on non-convergence.
DensityFunctionals compute_functionals(const DensityModel& model, double alpha);

ScoreIdentityReport verify_score_identities(const DensityModel& model);

}  // namespace renpost
