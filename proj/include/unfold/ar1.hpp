#pragma once

#include <Eigen/Core>
#include <span>

#include "unfold/conditionals.hpp"
#include "unfold/rng.hpp"

namespace unfold {

// AR(1) correlation matrix with entries rho^|t-s|.
Eigen::MatrixXd omega_matrix(double rho, int T);

// Its tridiagonal inverse: 1/(1-rho^2) at the corners, (1+rho^2)/(1-rho^2)
// inside, -rho/(1-rho^2) off the diagonal.
Eigen::MatrixXd omega_inverse(double rho, int T);

// log N(x | 0, Omega(rho)) in O(T) through the innovation decomposition.
double ar1_log_density(const Eigen::VectorXd& x, double rho);

// Moments of a whole-trajectory conditional in precision form:
// covariance (B + Omega^-1)^-1 and mean -(B + Omega^-1)^-1 m.
struct TrajectoryConditional {
  Eigen::VectorXd m;
  Eigen::VectorXd B;  // diagonal entries
  double rho = 0.0;

  void validate() const;
};

// Accumulates the per-term quadratic and linear terms of the augmented
// likelihood for one legislator.  cell_terms gives each observed cell's
// 0-based position inside the tenure window.
TrajectoryConditional beta_trajectory_conditional(
    std::span<const ItemParams> items, std::span<const LatentUtilities> utilities,
    std::span<const int> cell_terms, int tenure_len, double rho);

// Mean and covariance of the conditional as dense objects (small T only;
// used by reduction checks and reports).
GaussianConditional trajectory_moments(const TrajectoryConditional& cond);

// O(T) draw via the banded Cholesky of the tridiagonal precision.
Eigen::VectorXd sample_beta_trajectory(const TrajectoryConditional& cond,
                                       RngStream& rng);

}  // namespace unfold
