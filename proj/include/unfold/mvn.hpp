#pragma once

#include <Eigen/Core>

#include "unfold/rng.hpp"

namespace unfold {

// Moment pair of a Gaussian full conditional.  Covariance must be symmetric
// positive definite; validity is established by a successful Cholesky.
struct GaussianConditional {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;

  Eigen::Index dim() const { return mean.size(); }
};

// Throws factorization_error when the covariance is not SPD.
void validate(const GaussianConditional& cond);

// Draw from N(mean, covariance) via Cholesky.
Eigen::VectorXd sample_mvn(const GaussianConditional& cond, RngStream& rng);

}  // namespace unfold
