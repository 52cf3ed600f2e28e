#pragma once

namespace unfold {

// P(X <= x, Y <= y) for standard bivariate normal with correlation rho.
// Port of Alan Genz's BVND (tvpack.f); absolute accuracy ~1e-15.
double bvn_cdf(double x, double y, double rho);

// Response-function kernel: CDF of N(0, [[2,1],[1,2]]) at (a, b), i.e. the
// probability that both utility differences fall below their thresholds.
// Arguments may be +-inf.
double bvn_response_cdf(double a, double b);

}  // namespace unfold
