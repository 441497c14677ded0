#include "renpost/density.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "renpost/quadrature.hpp"
#include "renpost/special.hpp"

namespace renpost {

namespace {

constexpr double kPi = 3.14159265358979323846;
// Normalizing constant of the cubic-tail core C/(1+x^3).
const double kCubicC = 2.0 * kPi / std::pow(3.0, 1.5);

// Antiderivative of 1/(1+x^3).
double cubic_mass_anti(double x) {
  return std::log((1 + x) * (1 + x) / (x * x - x + 1)) / 6.0 +
         std::atan((2 * x - 1) / std::sqrt(3.0)) / std::sqrt(3.0);
}

// Antiderivative of x/(1+x^3).
double cubic_mean_anti(double x) {
  return std::log((x * x - x + 1) / ((1 + x) * (1 + x))) / 6.0 +
         std::atan((2 * x - 1) / std::sqrt(3.0)) / std::sqrt(3.0);
}

double cubic_core(double x) { return kCubicC / (1 + x * x * x); }
double cubic_core_derivative(double x) {
  const double d = 1 + x * x * x;
  return -3.0 * kCubicC * x * x / (d * d);
}

// C^3 smoothstep on [0,1]: value and first three derivatives vanish at 0;
// value 1 with flat derivatives at 1.
double smoothstep7(double u) {
  return u * u * u * u * (35 + u * (-84 + u * (70 - 20 * u)));
}
double smoothstep7_derivative(double u) {
  const double a = u * (1 - u);
  return 140 * a * a * a;
}

// Quartic-contact bump ((x-lo)(hi-x))^4 on (lo,hi); C^3 against zero outside.
struct Bump {
  double lo, hi;
  double value(double x) const {
    if (x <= lo || x >= hi) return 0;
    const double t = (x - lo) * (hi - x);
    return t * t * t * t;
  }
  double derivative(double x) const {
    if (x <= lo || x >= hi) return 0;
    const double t = (x - lo) * (hi - x);
    return 4 * t * t * t * (hi + lo - 2 * x);
  }
  double partial_mass(double x) const {
    const double b = std::min(x, hi);
    if (b <= lo) return 0;
    return integrate([this](double t) { return value(t); }, lo, b, 1e-14)
        .value;
  }
  double moment(int power) const {
    return integrate(
               [this, power](double t) {
                 return std::pow(t, power) * value(t);
               },
               lo, hi, 1e-14)
        .value;
  }
};

const Bump kBump1{0.125, 0.25};  // mass correction
const Bump kBump2{8.0, 9.0};     // mean correction

}  // namespace

DensityModel::DensityModel(Family family, double param)
    : family_(family), param_(param) {
  switch (family_) {
    case Family::kGamma:
      log_norm_ = param_ * std::log(param_) - std::lgamma(param_);
      scale_ = 1.0 / param_;
      break;
    case Family::kWeibull:
      scale_ = 1.0 / std::tgamma(1 + 1 / param_);
      log_norm_ = std::log(param_ / scale_);
      break;
    case Family::kLogNormal:
      log_norm_ = -std::log(param_) - 0.5 * std::log(2 * kPi);
      scale_ = -0.5 * param_ * param_;  // log-mean
      break;
    case Family::kRayleigh:
    case Family::kMaxwellBoltzmann:
      scale_ = param_;
      log_norm_ = 0;
      break;
    case Family::kTruncatedCubic:
      break;
  }
}

DensityModel DensityModel::gamma(double shape) {
  if (!(shape > 0)) throw std::domain_error("gamma: shape must be positive");
  return DensityModel(Family::kGamma, shape);
}

DensityModel DensityModel::weibull(double shape) {
  if (!(shape > 0)) throw std::domain_error("weibull: shape must be positive");
  return DensityModel(Family::kWeibull, shape);
}

DensityModel DensityModel::log_normal(double log_sd) {
  if (!(log_sd > 0)) {
    throw std::domain_error("log_normal: log-sd must be positive");
  }
  return DensityModel(Family::kLogNormal, log_sd);
}

DensityModel DensityModel::rayleigh() {
  return DensityModel(Family::kRayleigh, std::sqrt(2.0 / kPi));
}

DensityModel DensityModel::maxwell_boltzmann() {
  return DensityModel(Family::kMaxwellBoltzmann, 0.5 * std::sqrt(kPi / 2.0));
}

DensityModel DensityModel::truncated_cubic(double cutoff) {
  if (!(cutoff > 16)) {
    throw std::domain_error("truncated_cubic: cutoff must exceed 16");
  }
  DensityModel m(Family::kTruncatedCubic, cutoff);
  m.init_truncated_cubic();
  return m;
}

double DensityModel::tc_blend_pdf(double x) const {
  const double s = smoothstep7(x - param_);
  return (1 - s) * cubic_core(x) + s * tc_tail_coeff_ * std::exp(-x);
}

double DensityModel::tc_blend_pdf_derivative(double x) const {
  const double u = x - param_;
  const double s = smoothstep7(u);
  const double ds = smoothstep7_derivative(u);
  const double tail = tc_tail_coeff_ * std::exp(-x);
  return -ds * cubic_core(x) + (1 - s) * cubic_core_derivative(x) + ds * tail -
         s * tail;
}

void DensityModel::init_truncated_cubic() {
  const double y = param_;
  tc_tail_coeff_ = cubic_core(y) * std::exp(y);

  const double core_mass = kCubicC * (cubic_mass_anti(y) - cubic_mass_anti(0));
  const double core_mean = kCubicC * (cubic_mean_anti(y) - cubic_mean_anti(0));
  tc_glue_mass_ =
      integrate([&](double x) { return tc_blend_pdf(x); }, y, y + 1, 1e-14)
          .value;
  const double glue_mean =
      integrate([&](double x) { return x * tc_blend_pdf(x); }, y, y + 1, 1e-14)
          .value;
  const double tail_mass = tc_tail_coeff_ * std::exp(-(y + 1));
  const double tail_mean = tc_tail_coeff_ * (y + 2) * std::exp(-(y + 1));

  const double mass_deficit = 1 - (core_mass + tc_glue_mass_ + tail_mass);
  const double mean_deficit = 1 - (core_mean + glue_mean + tail_mean);

  const double q1m = kBump1.moment(0);
  const double q1t = kBump1.moment(1);
  const double q2m = kBump2.moment(0);
  const double q2t = kBump2.moment(1);

  const double det = q1m * q2t - q2m * q1t;
  tc_bump1_coeff_ = (mass_deficit * q2t - mean_deficit * q2m) / det;
  tc_bump2_coeff_ = (mean_deficit * q1m - mass_deficit * q1t) / det;
  tc_cdf_at_glue_ = core_mass + tc_bump1_coeff_ * q1m + tc_bump2_coeff_ * q2m;

  // The mass-trim coefficient may come out negative; the density must stay
  // strictly positive across both bump windows.
  for (const Bump& b : {kBump1, kBump2}) {
    for (int i = 0; i <= 512; ++i) {
      const double x = b.lo + (b.hi - b.lo) * i / 512.0;
      if (x > 0 && pdf(x) <= 0) {
        throw NumericError(
            "truncated_cubic: bump correction drove the pdf non-positive "
            "near x=" + std::to_string(x));
      }
    }
  }
}

double DensityModel::pdf(double x) const {
  if (!(x > 0)) throw std::domain_error("pdf: x must be positive");
  if (family_ == Family::kTruncatedCubic) {
    const double y = param_;
    double value;
    if (x <= y) {
      value = cubic_core(x);
    } else if (x >= y + 1) {
      value = tc_tail_coeff_ * std::exp(-x);
    } else {
      value = tc_blend_pdf(x);
    }
    value += tc_bump1_coeff_ * kBump1.value(x);
    value += tc_bump2_coeff_ * kBump2.value(x);
    return value;
  }
  return std::exp(log_pdf(x));
}

double DensityModel::log_pdf(double x) const {
  if (!(x > 0)) throw std::domain_error("log_pdf: x must be positive");
  switch (family_) {
    case Family::kGamma:
      return log_norm_ + (param_ - 1) * std::log(x) - param_ * x;
    case Family::kWeibull: {
      const double z = x / scale_;
      return log_norm_ + (param_ - 1) * std::log(z) - std::pow(z, param_);
    }
    case Family::kLogNormal: {
      const double z = (std::log(x) - scale_) / param_;
      return log_norm_ - std::log(x) - 0.5 * z * z;
    }
    case Family::kRayleigh:
      return std::log(x / (scale_ * scale_)) - x * x / (2 * scale_ * scale_);
    case Family::kMaxwellBoltzmann:
      return 0.5 * std::log(2 / kPi) + 2 * std::log(x) -
             3 * std::log(scale_) - x * x / (2 * scale_ * scale_);
    case Family::kTruncatedCubic:
      return std::log(pdf(x));
  }
  throw std::logic_error("unreachable");
}

double DensityModel::cdf_raw(double x) const {
  switch (family_) {
    case Family::kGamma:
      return gamma_p(param_, param_ * x);
    case Family::kWeibull:
      return -std::expm1(-std::pow(x / scale_, param_));
    case Family::kLogNormal:
      return normal_cdf((std::log(x) - scale_) / param_);
    case Family::kRayleigh:
      return -std::expm1(-x * x / (2 * scale_ * scale_));
    case Family::kMaxwellBoltzmann: {
      const double z = x / scale_;
      return std::erf(z / std::sqrt(2.0)) -
             std::sqrt(2 / kPi) * z * std::exp(-z * z / 2);
    }
    case Family::kTruncatedCubic: {
      const double y = param_;
      if (x >= y + 1) return 1 - tc_tail_coeff_ * std::exp(-x);
      if (x >= y) {
        return tc_cdf_at_glue_ +
               integrate([&](double t) { return tc_blend_pdf(t); }, y, x,
                         1e-13)
                   .value;
      }
      return kCubicC * (cubic_mass_anti(x) - cubic_mass_anti(0)) +
             tc_bump1_coeff_ * kBump1.partial_mass(x) +
             tc_bump2_coeff_ * kBump2.partial_mass(x);
    }
  }
  throw std::logic_error("unreachable");
}

double DensityModel::survival_raw(double x) const {
  switch (family_) {
    case Family::kGamma:
      return gamma_q(param_, param_ * x);
    case Family::kWeibull:
      return std::exp(-std::pow(x / scale_, param_));
    case Family::kLogNormal:
      return normal_cdf(-(std::log(x) - scale_) / param_);
    case Family::kRayleigh:
      return std::exp(-x * x / (2 * scale_ * scale_));
    case Family::kMaxwellBoltzmann: {
      const double z = x / scale_;
      return std::erfc(z / std::sqrt(2.0)) +
             std::sqrt(2 / kPi) * z * std::exp(-z * z / 2);
    }
    case Family::kTruncatedCubic: {
      const double y = param_;
      if (x >= y + 1) return tc_tail_coeff_ * std::exp(-x);
      const double past_glue = tc_tail_coeff_ * std::exp(-(y + 1));
      if (x >= y) {
        return past_glue +
               integrate([&](double t) { return tc_blend_pdf(t); }, x, y + 1,
                         1e-13)
                   .value;
      }
      return past_glue + tc_glue_mass_ +
             kCubicC * (cubic_mass_anti(y) - cubic_mass_anti(x)) +
             tc_bump1_coeff_ * (kBump1.moment(0) - kBump1.partial_mass(x)) +
             tc_bump2_coeff_ * (kBump2.moment(0) - kBump2.partial_mass(x));
    }
  }
  throw std::logic_error("unreachable");
}

double DensityModel::cdf(double x) const {
  if (x < 0) throw std::domain_error("cdf: x must be nonnegative");
  if (x == 0) return 0;
  const double c = cdf_raw(x);
  return c <= 0.5 ? c : 1 - survival_raw(x);
}

double DensityModel::survival(double x) const {
  if (x < 0) throw std::domain_error("survival: x must be nonnegative");
  if (x == 0) return 1;
  const double c = cdf_raw(x);
  return c <= 0.5 ? 1 - c : survival_raw(x);
}

double DensityModel::log_survival(double x) const {
  if (x < 0) throw std::domain_error("log_survival: x must be nonnegative");
  if (x == 0) return 0;
  switch (family_) {
    case Family::kGamma:
      if (param_ == 1.0) return -x;
      return std::log(survival(x));
    case Family::kWeibull:
      return -std::pow(x / scale_, param_);
    case Family::kRayleigh:
      return -x * x / (2 * scale_ * scale_);
    case Family::kTruncatedCubic:
      if (x >= param_ + 1) return std::log(tc_tail_coeff_) - x;
      return std::log(survival(x));
    default:
      return std::log(survival(x));
  }
}

double DensityModel::score(double x) const {
  if (!(x > 0)) throw std::domain_error("score: x must be positive");
  switch (family_) {
    case Family::kGamma:
      return (param_ - 1) - param_ * x;
    case Family::kWeibull:
      return (param_ - 1) - param_ * std::pow(x / scale_, param_);
    case Family::kLogNormal:
      return -1 - (std::log(x) - scale_) / (param_ * param_);
    case Family::kRayleigh:
      return 1 - x * x / (scale_ * scale_);
    case Family::kMaxwellBoltzmann:
      return 2 - x * x / (scale_ * scale_);
    case Family::kTruncatedCubic: {
      const double y = param_;
      double d;
      if (x <= y) {
        d = cubic_core_derivative(x);
      } else if (x >= y + 1) {
        d = -tc_tail_coeff_ * std::exp(-x);
      } else {
        d = tc_blend_pdf_derivative(x);
      }
      d += tc_bump1_coeff_ * kBump1.derivative(x);
      d += tc_bump2_coeff_ * kBump2.derivative(x);
      return x * d / pdf(x);
    }
  }
  throw std::logic_error("unreachable");
}

double DensityModel::score_derivative(double x) const {
  if (!(x > 0)) throw std::domain_error("score_derivative: x must be positive");
  switch (family_) {
    case Family::kGamma:
      return -param_;
    case Family::kWeibull:
      return -param_ * param_ * std::pow(x / scale_, param_) / x;
    case Family::kLogNormal:
      return -1 / (param_ * param_ * x);
    case Family::kRayleigh:
    case Family::kMaxwellBoltzmann:
      return -2 * x / (scale_ * scale_);
    case Family::kTruncatedCubic: {
      // five-point central difference; the composite is C^3
      const double h = 1e-4 * std::max(x, 0.25);
      return (score(x - 2 * h) - 8 * score(x - h) + 8 * score(x + h) -
              score(x + 2 * h)) /
             (12 * h);
    }
  }
  throw std::logic_error("unreachable");
}

double DensityModel::quantile(double p) const {
  if (!(p > 0 && p < 1)) {
    throw std::domain_error("quantile: p must lie in (0,1)");
  }
  switch (family_) {
    case Family::kGamma:
      if (param_ == 1.0) return -std::log1p(-p);
      break;
    case Family::kWeibull:
      return scale_ * std::pow(-std::log1p(-p), 1 / param_);
    case Family::kLogNormal:
      return std::exp(scale_ + param_ * normal_quantile(p));
    case Family::kRayleigh:
      return scale_ * std::sqrt(-2 * std::log1p(-p));
    default:
      break;
  }
  // bisection on the cdf, tolerance 1e-12 in probability
  double lo = 0, hi = 2;
  while (cdf(hi) < p) {
    hi *= 2;
    if (hi > 1e300) throw NumericError("quantile: bracket expansion failed");
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double c = cdf(mid);
    if (std::fabs(c - p) <= 1e-12) return mid;
    (c < p ? lo : hi) = mid;
    if (hi - lo < 1e-15 * (1 + hi)) break;
  }
  return 0.5 * (lo + hi);
}

double DensityModel::sample(RngStream& rng) const {
  return quantile(rng.uniform01());
}

double DensityModel::sample_residual_first(double mu, double t_v,
                                           RngStream& rng) const {
  if (!(mu > 0)) throw std::domain_error("sample_residual_first: mu <= 0");
  if (t_v < 0) throw std::domain_error("sample_residual_first: t_v < 0");
  const double age = mu * t_v;  // elapsed age in unscaled v-units
  if (age == 0) return sample(rng) / mu;
  const double s_age = survival(age);
  if (s_age <= 1e-12) {
    throw std::domain_error(
        "sample_residual_first: conditioning event has vanishing probability "
        "(survival(" + std::to_string(age) + ") <= 1e-12)");
  }
  const double u = rng.uniform01();
  double full_age = 0;
  bool have_closed_form = true;
  switch (family_) {
    case Family::kGamma:
      if (param_ == 1.0) {
        full_age = age - std::log1p(-u);  // memorylessness
      } else {
        have_closed_form = false;
      }
      break;
    case Family::kWeibull:
      full_age = scale_ * std::pow(std::pow(age / scale_, param_) -
                                       std::log1p(-u),
                                   1 / param_);
      break;
    case Family::kRayleigh:
      full_age = std::sqrt(age * age - 2 * scale_ * scale_ * std::log1p(-u));
      break;
    case Family::kLogNormal: {
      const double p = cdf(age) + u * s_age;
      have_closed_form = p < 1;
      if (have_closed_form) full_age = quantile(p);
      break;
    }
    default:
      have_closed_form = false;
      break;
  }
  if (!have_closed_form) {
    // bisection on the conditional survival S(z)/S(age), tol 1e-12
    double lo = age, hi = age + std::max(1.0, age);
    while (survival(hi) / s_age > 1 - u) {
      lo = hi;
      hi = age + (hi - age) * 2;
      if (hi > 1e300) throw NumericError("sample_residual_first: bracket");
    }
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      const double cond_cdf = 1 - survival(mid) / s_age;
      if (std::fabs(cond_cdf - u) <= 1e-12) {
        lo = hi = mid;
        break;
      }
      (cond_cdf < u ? lo : hi) = mid;
      if (hi - lo < 1e-15 * (1 + hi)) break;
    }
    full_age = 0.5 * (lo + hi);
  }
  return std::max(0.0, full_age - age) / mu;
}

std::string DensityModel::describe() const {
  switch (family_) {
    case Family::kGamma:
      return "gamma(beta=" + std::to_string(param_) + ")";
    case Family::kWeibull:
      return "weibull(k=" + std::to_string(param_) + ")";
    case Family::kLogNormal:
      return "lognormal(s=" + std::to_string(param_) + ")";
    case Family::kRayleigh:
      return "rayleigh";
    case Family::kMaxwellBoltzmann:
      return "maxwell-boltzmann";
    case Family::kTruncatedCubic:
      return "truncated-cubic(y=" + std::to_string(param_) + ")";
  }
  return "?";
}

std::vector<double> DensityModel::quadrature_breakpoints() const {
  if (family_ == Family::kTruncatedCubic) {
    const double y = param_;
    return {kBump1.lo, kBump1.hi, 2.0 / 3, 1.0, kBump2.lo, kBump2.hi, y, y + 1};
  }
  return {1.0};
}

namespace {

double expectation(const DensityModel& model,
                   const std::function<double(double)>& g, double abs_tol) {
  auto integrand = [&](double x) { return g(x) * model.pdf(x); };
  std::vector<double> pts = model.quadrature_breakpoints();
  std::sort(pts.begin(), pts.end());
  double total = 0;
  double lo = 0;
  const double per_piece = abs_tol / static_cast<double>(pts.size() + 1);
  for (double p : pts) {
    total += integrate(integrand, lo, p, per_piece).value;
    lo = p;
  }
  total += integrate_upper(integrand, lo, per_piece).value;
  return total;
}

}  // namespace

DensityFunctionals compute_functionals(const DensityModel& model,
                                       double alpha) {
  if (!(alpha > 0)) throw std::domain_error("compute_functionals: alpha <= 0");
  const double mean = expectation(model, [](double x) { return x; }, 1e-10);
  const double var = expectation(
      model, [&](double x) { return (x - mean) * (x - mean); }, 1e-9);
  const double score_mean =
      expectation(model, [&](double x) { return model.score(x); }, 1e-10);
  const double score_var = expectation(
      model,
      [&](double x) {
        const double d = model.score(x) - score_mean;
        return d * d;
      },
      1e-9);
  DensityFunctionals out;
  out.sigma_v = std::sqrt(var);
  out.sigma_f = std::sqrt(score_var);
  out.sigma_prime = std::sqrt(alpha) / out.sigma_f;
  out.product = out.sigma_f * out.sigma_v;
  return out;
}

ScoreIdentityReport verify_score_identities(const DensityModel& model) {
  ScoreIdentityReport out;
  out.mean_score =
      expectation(model, [&](double x) { return model.score(x); }, 1e-9);
  out.mean_dscore_v2 = expectation(
      model,
      [&](double x) { return model.score_derivative(x) * x - model.score(x); },
      1e-8);
  out.mean_score_v2 =
      expectation(model, [&](double x) { return model.score(x) * x; }, 1e-8);
  return out;
}

}  // namespace renpost
