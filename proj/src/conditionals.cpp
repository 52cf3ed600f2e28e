#include "unfold/conditionals.hpp"

#include <cmath>
#include <limits>

#include "unfold/errors.hpp"
#include "unfold/normal.hpp"
#include "unfold/truncated_normal.hpp"

namespace unfold {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_iso_gauss2(const Eigen::Vector2d& x, const Eigen::Vector2d& center,
                      double var) {
  return -std::log(2.0 * M_PI * var) - (x - center).squaredNorm() / (2.0 * var);
}

}  // namespace

LatentUtilities sample_utilities(Vote vote, const ItemParams& item, double beta,
                                 const LatentUtilities& current, RngStream& rng) {
  const double mean1 = -item.alpha1 * (beta - item.delta1);
  const double mean3 = -item.alpha2 * (beta - item.delta2);
  LatentUtilities u = current;
  if (vote == Vote::Yea) {
    u.u1 = sample_trunc_normal(mean1, 1.0, -kInf, u.u2, rng);
    u.u2 = sample_trunc_normal(0.0, 1.0, std::max(u.u1, u.u3), kInf, rng);
    u.u3 = sample_trunc_normal(mean3, 1.0, -kInf, u.u2, rng);
  } else if (vote == Vote::Nay) {
    u.u1 = u.u3 > u.u2 ? rng.normal(mean1, 1.0)
                       : sample_trunc_normal(mean1, 1.0, u.u2, kInf, rng);
    u.u2 = sample_trunc_normal(0.0, 1.0, -kInf, std::max(u.u1, u.u3), rng);
    u.u3 = u.u1 > u.u2 ? rng.normal(mean3, 1.0)
                       : sample_trunc_normal(mean3, 1.0, u.u2, kInf, rng);
  } else {
    throw invalid_parameter_error("sample_utilities: cell is Missing");
  }
  return u;
}

GaussianConditional beta_conditional(std::span<const ItemParams> items,
                                     std::span<const LatentUtilities> utilities) {
  if (items.size() != utilities.size()) {
    throw invalid_parameter_error("beta_conditional: span size mismatch");
  }
  double precision = 1.0;  // N(0,1) prior
  double weighted = 0.0;
  for (std::size_t k = 0; k < items.size(); ++k) {
    const ItemParams& it = items[k];
    const LatentUtilities& u = utilities[k];
    precision += it.alpha1 * it.alpha1 + it.alpha2 * it.alpha2;
    weighted += it.alpha1 * (u.u1 - it.alpha1 * it.delta1) +
                it.alpha2 * (u.u3 - it.alpha2 * it.delta2);
  }
  GaussianConditional cond;
  cond.mean = Eigen::VectorXd::Constant(1, -weighted / precision);
  cond.covariance = Eigen::MatrixXd::Constant(1, 1, 1.0 / precision);
  return cond;
}

GaussianConditional alpha_conditional(std::span<const double> betas,
                                      const Eigen::Vector2d& delta,
                                      std::span<const LatentUtilities> utilities,
                                      const PriorHyper& hyper) {
  if (betas.size() != utilities.size()) {
    throw invalid_parameter_error("alpha_conditional: span size mismatch");
  }
  hyper.validate();
  Eigen::Vector2d precision{1.0 / hyper.omega2, 1.0 / hyper.omega2};
  Eigen::Vector2d weighted{0.0, 0.0};
  for (std::size_t i = 0; i < betas.size(); ++i) {
    const double d1 = betas[i] - delta(0);
    const double d2 = betas[i] - delta(1);
    precision(0) += d1 * d1;
    precision(1) += d2 * d2;
    weighted(0) += d1 * utilities[i].u1;
    weighted(1) += d2 * utilities[i].u3;
  }
  GaussianConditional cond;
  cond.mean = -(weighted.array() / precision.array()).matrix();
  cond.covariance = Eigen::Matrix2d::Zero();
  cond.covariance(0, 0) = 1.0 / precision(0);
  cond.covariance(1, 1) = 1.0 / precision(1);
  return cond;
}

double z_posterior_prob(const GaussianConditional& alpha_cond,
                        const Eigen::Vector2d& delta, const PriorHyper& hyper) {
  const double m1 = alpha_cond.mean(0);
  const double m2 = alpha_cond.mean(1);
  const double s1 = std::sqrt(alpha_cond.covariance(0, 0));
  const double s2 = std::sqrt(alpha_cond.covariance(1, 1));
  const double log_plus = log_iso_gauss2(delta, hyper.mu, hyper.kappa2) +
                          log_std_normal_cdf(m1 / s1) + log_std_normal_cdf(-m2 / s2);
  const double log_minus = log_iso_gauss2(delta, -hyper.mu, hyper.kappa2) +
                           log_std_normal_cdf(-m1 / s1) + log_std_normal_cdf(m2 / s2);
  return 1.0 / (1.0 + std::exp(log_minus - log_plus));
}

int sample_z(const GaussianConditional& alpha_cond, const Eigen::Vector2d& delta,
             const PriorHyper& hyper, RngStream& rng) {
  return rng.uniform() < z_posterior_prob(alpha_cond, delta, hyper) ? +1 : -1;
}

Eigen::Vector2d sample_alpha_given_z(const GaussianConditional& alpha_cond, int z,
                                     RngStream& rng) {
  const double m1 = alpha_cond.mean(0);
  const double m2 = alpha_cond.mean(1);
  const double s1 = std::sqrt(alpha_cond.covariance(0, 0));
  const double s2 = std::sqrt(alpha_cond.covariance(1, 1));
  Eigen::Vector2d alpha;
  if (z == +1) {
    alpha(0) = sample_trunc_normal(m1, s1, 0.0, kInf, rng);
    alpha(1) = sample_trunc_normal(m2, s2, -kInf, 0.0, rng);
  } else {
    alpha(0) = sample_trunc_normal(m1, s1, -kInf, 0.0, rng);
    alpha(1) = sample_trunc_normal(m2, s2, 0.0, kInf, rng);
  }
  return alpha;
}

GaussianConditional delta_conditional(const Eigen::Vector2d& alpha, int z,
                                      std::span<const double> betas,
                                      std::span<const LatentUtilities> utilities,
                                      const PriorHyper& hyper) {
  if (betas.size() != utilities.size()) {
    throw invalid_parameter_error("delta_conditional: span size mismatch");
  }
  hyper.validate();
  const double n = static_cast<double>(betas.size());
  Eigen::Vector2d precision{n * alpha(0) * alpha(0) + 1.0 / hyper.kappa2,
                            n * alpha(1) * alpha(1) + 1.0 / hyper.kappa2};
  // Residual u_k + alpha_k beta_i is centered at alpha_k delta_k.
  Eigen::Vector2d weighted = z * hyper.mu / hyper.kappa2;
  for (std::size_t i = 0; i < betas.size(); ++i) {
    weighted(0) += alpha(0) * (utilities[i].u1 + alpha(0) * betas[i]);
    weighted(1) += alpha(1) * (utilities[i].u3 + alpha(1) * betas[i]);
  }
  GaussianConditional cond;
  cond.mean = (weighted.array() / precision.array()).matrix();
  cond.covariance = Eigen::Matrix2d::Zero();
  cond.covariance(0, 0) = 1.0 / precision(0);
  cond.covariance(1, 1) = 1.0 / precision(1);
  return cond;
}

Eigen::Vector2d sample_delta(const Eigen::Vector2d& alpha, int z,
                             std::span<const double> betas,
                             std::span<const LatentUtilities> utilities,
                             const PriorHyper& hyper, RngStream& rng) {
  const GaussianConditional cond = delta_conditional(alpha, z, betas, utilities, hyper);
  Eigen::Vector2d delta;
  delta(0) = rng.normal(cond.mean(0), std::sqrt(cond.covariance(0, 0)));
  delta(1) = rng.normal(cond.mean(1), std::sqrt(cond.covariance(1, 1)));
  return delta;
}

}  // namespace unfold
