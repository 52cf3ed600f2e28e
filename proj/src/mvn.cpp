#include "unfold/mvn.hpp"

#include <Eigen/Cholesky>

#include "unfold/errors.hpp"

namespace unfold {

namespace {

Eigen::LLT<Eigen::MatrixXd> cholesky_or_throw(const GaussianConditional& cond) {
  if (cond.covariance.rows() != cond.mean.size() ||
      cond.covariance.cols() != cond.mean.size()) {
    throw factorization_error("GaussianConditional: dimension mismatch");
  }
  if (!cond.covariance.isApprox(cond.covariance.transpose(), 1e-12)) {
    throw factorization_error("GaussianConditional: covariance not symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cond.covariance);
  if (llt.info() != Eigen::Success) {
    throw factorization_error("GaussianConditional: covariance not positive definite");
  }
  return llt;
}

}  // namespace

void validate(const GaussianConditional& cond) { cholesky_or_throw(cond); }

Eigen::VectorXd sample_mvn(const GaussianConditional& cond, RngStream& rng) {
  const auto llt = cholesky_or_throw(cond);
  Eigen::VectorXd z(cond.dim());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
  return cond.mean + llt.matrixL() * z;
}

}  // namespace unfold
