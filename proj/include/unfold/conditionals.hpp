#pragma once

#include <Eigen/Core>
#include <span>

#include "unfold/model.hpp"
#include "unfold/mvn.hpp"
#include "unfold/rng.hpp"
#include "unfold/vote_matrix.hpp"

namespace unfold {

// Latent utility triple (y*1, y*2, y*3) behind one observed cell.  A Yea cell
// keeps u2 above max(u1, u3); a Nay cell keeps it below.
struct LatentUtilities {
  double u1 = 0.0;
  double u2 = 0.0;
  double u3 = 0.0;

  bool consistent_with(Vote v) const {
    const double m = u1 > u3 ? u1 : u3;
    return v == Vote::Yea ? u2 > m : u2 < m;
  }
};

// One sequential Gibbs scan over (u1, u2, u3) given the vote; each step
// conditions on the freshest values, so the output always satisfies the
// vote's ordering constraint.
LatentUtilities sample_utilities(Vote vote, const ItemParams& item, double beta,
                                 const LatentUtilities& current, RngStream& rng);

// Full conditional of a single ideal point given the items and utilities of
// that legislator's observed cells (parallel spans).  No observations
// recovers the N(0,1) prior.
GaussianConditional beta_conditional(std::span<const ItemParams> items,
                                     std::span<const LatentUtilities> utilities);

// Full conditional of a vote's discrimination pair before truncation, given
// the ideal points and utilities of the legislators voting on it.  Diagonal.
GaussianConditional alpha_conditional(std::span<const double> betas,
                                      const Eigen::Vector2d& delta,
                                      std::span<const LatentUtilities> utilities,
                                      const PriorHyper& hyper);

// P(z = +1 | ...) with alpha integrated out; evaluated in log space.
double z_posterior_prob(const GaussianConditional& alpha_cond,
                        const Eigen::Vector2d& delta, const PriorHyper& hyper);

int sample_z(const GaussianConditional& alpha_cond, const Eigen::Vector2d& delta,
             const PriorHyper& hyper, RngStream& rng);

// Component-wise truncated draws on the z-selected quadrant.
Eigen::Vector2d sample_alpha_given_z(const GaussianConditional& alpha_cond, int z,
                                     RngStream& rng);

// Full conditional of a vote's location pair; prior mean is z * mu.
GaussianConditional delta_conditional(const Eigen::Vector2d& alpha, int z,
                                      std::span<const double> betas,
                                      std::span<const LatentUtilities> utilities,
                                      const PriorHyper& hyper);

Eigen::Vector2d sample_delta(const Eigen::Vector2d& alpha, int z,
                             std::span<const double> betas,
                             std::span<const LatentUtilities> utilities,
                             const PriorHyper& hyper, RngStream& rng);

}  // namespace unfold
