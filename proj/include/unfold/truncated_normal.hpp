#pragma once

#include "unfold/rng.hpp"

namespace unfold {

// Probability mass N(0,1) assigns to (lo, hi); computed from the nearer tail
// so it stays accurate when both endpoints sit far out.
double std_normal_interval_mass(double lo, double hi);

// Draw from N(mean, sd^2) restricted to the open interval (lower, upper).
// Inverse-CDF when the interval keeps at least ~1e-6 of the untruncated mass;
// exponential-proposal rejection (Robert 1995) in far tails, where the
// inverse CDF runs out of precision.  Bounds may be +-inf.
double sample_trunc_normal(double mean, double sd, double lower, double upper,
                           RngStream& rng);

// Log density at x of N(mean, sd^2) truncated to [lower, upper]; -inf outside.
double log_trunc_normal_pdf(double x, double mean, double sd, double lower,
                            double upper);

// Mean of the truncated distribution (closed form); used by conditional checks.
double trunc_normal_mean(double mean, double sd, double lower, double upper);

}  // namespace unfold
