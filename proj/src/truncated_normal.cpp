#include "unfold/truncated_normal.hpp"

#include <cmath>
#include <limits>

#include "unfold/errors.hpp"
#include "unfold/normal.hpp"

namespace unfold {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMinInverseCdfMass = 1e-6;

// Robert (1995), "Simulation of truncated normal variables": accept-reject
// for N(0,1) on [lo, hi] with 0 <= lo, using a shifted exponential proposal.
double sample_tail_rejection(double lo, double hi, RngStream& rng) {
  const double rate = 0.5 * (lo + std::sqrt(lo * lo + 4.0));
  for (;;) {
    const double z = lo + rng.exponential() / rate;
    if (z > hi) continue;
    const double d = z - rate;
    if (std::log(rng.uniform()) <= -0.5 * d * d) return z;
  }
}

double sample_std_trunc(double lo, double hi, RngStream& rng) {
  if (lo == -kInf && hi == kInf) return rng.normal();

  const double mass = std_normal_interval_mass(lo, hi);
  if (mass < kMinInverseCdfMass && lo >= 0.0) return sample_tail_rejection(lo, hi, rng);
  if (mass < kMinInverseCdfMass && hi <= 0.0) return -sample_tail_rejection(-hi, -lo, rng);

  // Inverse CDF.  Same-signed tails are parametrized through the nearer tail
  // probability, which stays relatively accurate far out.
  const double u = rng.uniform();
  if (lo >= 0.0) {
    const double s_hi = std_normal_sf(hi);
    const double s_lo = std_normal_sf(lo);
    return -std_normal_quantile(s_hi + u * (s_lo - s_hi));
  }
  const double p_lo = std_normal_cdf(lo);
  const double p_hi = std_normal_cdf(hi);
  return std_normal_quantile(p_lo + u * (p_hi - p_lo));
}

}  // namespace

double std_normal_interval_mass(double lo, double hi) {
  if (lo >= 0.0) return std_normal_sf(lo) - std_normal_sf(hi);
  if (hi <= 0.0) return std_normal_cdf(hi) - std_normal_cdf(lo);
  // Straddling zero: erf keeps the difference accurate when both ends are
  // close to the origin.
  const double e_lo = lo == -kInf ? -1.0 : std::erf(lo / kSqrt2);
  const double e_hi = hi == kInf ? 1.0 : std::erf(hi / kSqrt2);
  return 0.5 * (e_hi - e_lo);
}

double sample_trunc_normal(double mean, double sd, double lower, double upper,
                           RngStream& rng) {
  if (!std::isfinite(mean) || !std::isfinite(sd) || sd <= 0.0) {
    throw invalid_parameter_error("sample_trunc_normal: mean/sd must be finite, sd > 0");
  }
  if (!(lower < upper)) {
    throw invalid_interval_error("sample_trunc_normal: requires lower < upper");
  }
  const double lo = (lower - mean) / sd;
  const double hi = (upper - mean) / sd;
  double x = mean + sd * sample_std_trunc(lo, hi, rng);
  // Rounding may land on a bound; the contract is the open interval.
  if (x <= lower) x = std::nextafter(lower, upper);
  if (x >= upper) x = std::nextafter(upper, lower);
  return x;
}

double log_trunc_normal_pdf(double x, double mean, double sd, double lower,
                            double upper) {
  if (!(lower < upper)) {
    throw invalid_interval_error("log_trunc_normal_pdf: requires lower < upper");
  }
  if (!std::isfinite(mean) || !std::isfinite(sd) || sd <= 0.0) {
    throw invalid_parameter_error("log_trunc_normal_pdf: mean/sd must be finite, sd > 0");
  }
  if (x < lower || x > upper) return -kInf;
  const double z = (x - mean) / sd;
  const double mass = std_normal_interval_mass((lower - mean) / sd, (upper - mean) / sd);
  return log_std_normal_pdf(z) - std::log(sd) - std::log(mass);
}

double trunc_normal_mean(double mean, double sd, double lower, double upper) {
  if (!(lower < upper)) {
    throw invalid_interval_error("trunc_normal_mean: requires lower < upper");
  }
  const double lo = (lower - mean) / sd;
  const double hi = (upper - mean) / sd;
  const double pdf_lo = std::isfinite(lo) ? std_normal_pdf(lo) : 0.0;
  const double pdf_hi = std::isfinite(hi) ? std_normal_pdf(hi) : 0.0;
  return mean + sd * (pdf_lo - pdf_hi) / std_normal_interval_mass(lo, hi);
}

}  // namespace unfold
