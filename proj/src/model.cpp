#include "unfold/model.hpp"

#include <cmath>
#include <limits>

#include "unfold/bvn.hpp"
#include "unfold/errors.hpp"
#include "unfold/normal.hpp"

namespace unfold {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kAlphaZeroTol = 1e-12;
}  // namespace

void ItemParams::validate() const {
  if (std::abs(alpha1) < kAlphaZeroTol || std::abs(alpha2) < kAlphaZeroTol) {
    throw invalid_parameter_error("ItemParams: discrimination numerically zero");
  }
  const bool plus = alpha1 > 0.0 && alpha2 < 0.0;
  const bool minus = alpha1 < 0.0 && alpha2 > 0.0;
  if (!(plus || minus)) {
    throw invalid_parameter_error("ItemParams: discriminations must have opposite signs");
  }
  if ((plus && z != +1) || (minus && z != -1)) {
    throw invalid_parameter_error("ItemParams: z inconsistent with discrimination signs");
  }
}

ItemParams negate(const ItemParams& item) {
  return {-item.alpha1, -item.alpha2, -item.delta1, -item.delta2, -item.z};
}

void PriorHyper::validate() const {
  if (!(omega2 > 0.0) || !(kappa2 > 0.0)) {
    throw invalid_parameter_error("PriorHyper: omega2 and kappa2 must be positive");
  }
  if (!mu.allFinite()) throw invalid_parameter_error("PriorHyper: mu must be finite");
}

ItemParams item_from_psi(const PsiTriple& psi) {
  const bool ascending = psi.psi1 < psi.psi2 && psi.psi2 < psi.psi3;
  const bool descending = psi.psi3 < psi.psi2 && psi.psi2 < psi.psi1;
  if (!(ascending || descending)) {
    throw invalid_geometry_error("item_from_psi: psi positions must be strictly ordered");
  }
  ItemParams item;
  item.alpha1 = 2.0 * (psi.psi2 - psi.psi1);
  item.alpha2 = 2.0 * (psi.psi2 - psi.psi3);
  item.delta1 = 0.5 * (psi.psi1 + psi.psi2);
  item.delta2 = 0.5 * (psi.psi3 + psi.psi2);
  item.z = item.alpha1 > 0.0 ? +1 : -1;
  item.validate();
  return item;
}

double response_probability(double beta, const ItemParams& item) {
  return bvn_response_cdf(item.alpha1 * (beta - item.delta1),
                          item.alpha2 * (beta - item.delta2));
}

double log_prior_item(const ItemParams& item, const PriorHyper& hyper) {
  hyper.validate();
  const double a1 = item.alpha1, a2 = item.alpha2;
  const bool plus = a1 > 0.0 && a2 < 0.0;
  const bool minus = a1 < 0.0 && a2 > 0.0;
  if (!plus && !minus) return -kInf;

  const Eigen::Vector2d delta(item.delta1, item.delta2);
  const Eigen::Vector2d centered = plus ? Eigen::Vector2d(delta - hyper.mu)
                                        : Eigen::Vector2d(delta + hyper.mu);
  const double quad = (a1 * a1 + a2 * a2) / hyper.omega2 +
                      centered.squaredNorm() / hyper.kappa2;
  // Each mixture component is a quadrant-truncated Gaussian (mass 1/4) with
  // weight 1/2, so the normalizer is 2/(4 pi^2 omega^2 kappa^2).
  const double log_norm =
      std::log(2.0) - 2.0 * std::log(2.0 * M_PI) - std::log(hyper.omega2) -
      std::log(hyper.kappa2);
  return log_norm - 0.5 * quad;
}

ItemParams sample_item_prior(const PriorHyper& hyper, RngStream& rng) {
  hyper.validate();
  ItemParams item;
  item.z = rng.uniform() < 0.5 ? +1 : -1;
  const double omega = std::sqrt(hyper.omega2);
  const double kappa = std::sqrt(hyper.kappa2);
  item.alpha1 = item.z * std::abs(rng.normal(0.0, omega));
  item.alpha2 = -item.z * std::abs(rng.normal(0.0, omega));
  item.delta1 = rng.normal(item.z * hyper.mu(0), kappa);
  item.delta2 = rng.normal(item.z * hyper.mu(1), kappa);
  return item;
}

VoteMatrix simulate_votes(const Eigen::VectorXd& betas,
                          const std::vector<ItemParams>& items, double missing_rate,
                          RngStream& rng) {
  if (!(missing_rate >= 0.0 && missing_rate < 1.0)) {
    throw invalid_parameter_error("simulate_votes: missing_rate must be in [0,1)");
  }
  for (const auto& item : items) item.validate();

  VoteMatrix m;
  m.legislators.resize(betas.size());
  for (Eigen::Index i = 0; i < betas.size(); ++i) {
    m.legislators[i].id = "leg" + std::to_string(i + 1);
  }
  m.votes.resize(items.size());
  for (std::size_t j = 0; j < items.size(); ++j) {
    m.votes[j].id = "v" + std::to_string(j + 1);
  }
  m.cells.resize(betas.size(), static_cast<Eigen::Index>(items.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double theta = response_probability(betas(i), items[j]);
      Vote v = rng.uniform() < theta ? Vote::Yea : Vote::Nay;
      if (missing_rate > 0.0 && rng.uniform() < missing_rate) v = Vote::Missing;
      m.set(i, j, v);
    }
  }
  return m;
}

}  // namespace unfold
