#include "unfold/ar1.hpp"

#include <cmath>

#include "unfold/errors.hpp"
#include "unfold/normal.hpp"

namespace unfold {

namespace {

void check_rho(double rho) {
  if (!(rho >= 0.0 && rho < 1.0)) {
    throw invalid_parameter_error("AR(1) prior degenerate: rho must lie in [0,1)");
  }
}

// Lower-bidiagonal Cholesky of the tridiagonal precision diag(B) + Omega^-1.
void tridiag_cholesky(const Eigen::VectorXd& B, double rho, Eigen::VectorXd& d,
                      Eigen::VectorXd& e) {
  const int T = static_cast<int>(B.size());
  const double denom = 1.0 - rho * rho;
  const double off = -rho / denom;
  d.resize(T);
  e.resize(std::max(T - 1, 0));
  for (int t = 0; t < T; ++t) {
    double diag = B(t);
    if (T == 1) {
      diag += 1.0;
    } else if (t == 0 || t == T - 1) {
      diag += 1.0 / denom;
    } else {
      diag += (1.0 + rho * rho) / denom;
    }
    if (t > 0) diag -= e(t - 1) * e(t - 1);
    if (!(diag > 0.0)) {
      throw factorization_error("trajectory precision not positive definite");
    }
    d(t) = std::sqrt(diag);
    if (t < T - 1) e(t) = off / d(t);
  }
}

}  // namespace

Eigen::MatrixXd omega_matrix(double rho, int T) {
  check_rho(rho);
  if (T < 1) throw invalid_parameter_error("omega_matrix: T must be positive");
  Eigen::MatrixXd out(T, T);
  for (int i = 0; i < T; ++i) {
    out(i, i) = 1.0;
    for (int j = i + 1; j < T; ++j) {
      out(i, j) = out(j, i) = std::pow(rho, j - i);
    }
  }
  return out;
}

Eigen::MatrixXd omega_inverse(double rho, int T) {
  check_rho(rho);
  if (T < 1) throw invalid_parameter_error("omega_inverse: T must be positive");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(T, T);
  if (T == 1) {
    out(0, 0) = 1.0;
    return out;
  }
  const double denom = 1.0 - rho * rho;
  for (int t = 0; t < T; ++t) {
    out(t, t) = (t == 0 || t == T - 1) ? 1.0 / denom : (1.0 + rho * rho) / denom;
    if (t < T - 1) {
      out(t, t + 1) = out(t + 1, t) = -rho / denom;
    }
  }
  return out;
}

double ar1_log_density(const Eigen::VectorXd& x, double rho) {
  check_rho(rho);
  const int T = static_cast<int>(x.size());
  if (T < 1) throw invalid_parameter_error("ar1_log_density: empty vector");
  double quad = x(0) * x(0);
  const double denom = 1.0 - rho * rho;
  for (int t = 1; t < T; ++t) {
    const double innov = x(t) - rho * x(t - 1);
    quad += innov * innov / denom;
  }
  return -0.5 * (T * kLog2Pi + (T - 1) * std::log(denom) + quad);
}

void TrajectoryConditional::validate() const {
  if (m.size() != B.size() || m.size() < 1) {
    throw invalid_parameter_error("TrajectoryConditional: m and B must match");
  }
  if ((B.array() < 0.0).any()) {
    throw invalid_parameter_error("TrajectoryConditional: B entries must be >= 0");
  }
  check_rho(rho);
}

TrajectoryConditional beta_trajectory_conditional(
    std::span<const ItemParams> items, std::span<const LatentUtilities> utilities,
    std::span<const int> cell_terms, int tenure_len, double rho) {
  if (items.size() != utilities.size() || items.size() != cell_terms.size()) {
    throw invalid_parameter_error("beta_trajectory_conditional: span size mismatch");
  }
  check_rho(rho);
  TrajectoryConditional cond;
  cond.rho = rho;
  cond.m = Eigen::VectorXd::Zero(tenure_len);
  cond.B = Eigen::VectorXd::Zero(tenure_len);
  for (std::size_t k = 0; k < items.size(); ++k) {
    const int t = cell_terms[k];
    if (t < 0 || t >= tenure_len) {
      throw invalid_parameter_error("beta_trajectory_conditional: term outside window");
    }
    const ItemParams& it = items[k];
    const LatentUtilities& u = utilities[k];
    cond.B(t) += it.alpha1 * it.alpha1 + it.alpha2 * it.alpha2;
    cond.m(t) += it.alpha1 * (u.u1 - it.alpha1 * it.delta1) +
                 it.alpha2 * (u.u3 - it.alpha2 * it.delta2);
  }
  return cond;
}

GaussianConditional trajectory_moments(const TrajectoryConditional& cond) {
  cond.validate();
  const int T = static_cast<int>(cond.m.size());
  Eigen::MatrixXd precision = omega_inverse(cond.rho, T);
  precision.diagonal() += cond.B;
  GaussianConditional out;
  out.covariance = precision.inverse();
  out.mean = -out.covariance * cond.m;
  return out;
}

Eigen::VectorXd sample_beta_trajectory(const TrajectoryConditional& cond,
                                       RngStream& rng) {
  cond.validate();
  const int T = static_cast<int>(cond.m.size());
  Eigen::VectorXd d, e;
  tridiag_cholesky(cond.B, cond.rho, d, e);

  // mean = -(L L')^{-1} m: forward then backward substitution.
  Eigen::VectorXd y(T);
  for (int t = 0; t < T; ++t) {
    double v = -cond.m(t);
    if (t > 0) v -= e(t - 1) * y(t - 1);
    y(t) = v / d(t);
  }
  Eigen::VectorXd x(T);
  for (int t = T - 1; t >= 0; --t) {
    double v = y(t);
    if (t < T - 1) v -= e(t) * x(t + 1);
    x(t) = v / d(t);
  }

  // x += L'^{-1} z gives the N(0, P^{-1}) fluctuation.
  Eigen::VectorXd z(T);
  for (int t = 0; t < T; ++t) z(t) = rng.normal();
  Eigen::VectorXd w(T);
  for (int t = T - 1; t >= 0; --t) {
    double v = z(t);
    if (t < T - 1) v -= e(t) * w(t + 1);
    w(t) = v / d(t);
  }
  return x + w;
}

}  // namespace unfold
