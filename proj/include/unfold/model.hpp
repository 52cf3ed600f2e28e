#pragma once

#include <Eigen/Core>
#include <vector>

#include "unfold/rng.hpp"
#include "unfold/vote_matrix.hpp"

namespace unfold {

// Per-vote item parameters.  The discriminations always carry opposite signs;
// z records which orientation the item takes.
struct ItemParams {
  double alpha1 = 1.0;
  double alpha2 = -1.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  int z = +1;

  // Throws invalid_parameter_error when the sign pattern does not match z or
  // a discrimination is numerically zero.
  void validate() const;
};

ItemParams negate(const ItemParams& item);

struct PriorHyper {
  Eigen::Vector2d mu{-2.0, 10.0};
  double omega2 = 25.0;
  double kappa2 = 10.0;

  void validate() const;
};

// The three positions on the policy line: Nay-below, Aye, Nay-above (or the
// mirror image).  One-way input convenience for simulation.
struct PsiTriple {
  double psi1;
  double psi2;
  double psi3;
};

// alpha1 = 2(psi2-psi1), alpha2 = 2(psi2-psi3), delta1 = (psi1+psi2)/2,
// delta2 = (psi3+psi2)/2.  Requires a strictly ordered triple.
ItemParams item_from_psi(const PsiTriple& psi);

// P(Yea | beta, item): bivariate probit response evaluated at
// (alpha1(beta-delta1), alpha2(beta-delta2)).
double response_probability(double beta, const ItemParams& item);

// Log density of the two-component truncated-Gaussian mixture prior on
// (alpha, delta); -inf when the discrimination signs coincide.
double log_prior_item(const ItemParams& item, const PriorHyper& hyper);

// z ~ uniform on {+1,-1}; |alpha_k| half-normal with scale omega; delta ~
// N(z mu, kappa^2 I).
ItemParams sample_item_prior(const PriorHyper& hyper, RngStream& rng);

// Generative use of the response function; cells masked Missing independently
// with probability missing_rate.
VoteMatrix simulate_votes(const Eigen::VectorXd& betas,
                          const std::vector<ItemParams>& items, double missing_rate,
                          RngStream& rng);

}  // namespace unfold
