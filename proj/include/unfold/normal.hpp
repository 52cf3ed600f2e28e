#pragma once

namespace unfold {

inline constexpr double kSqrt2 = 1.4142135623730951;
inline constexpr double kLog2Pi = 1.8378770664093453;
inline constexpr double kInvSqrt2Pi = 0.3989422804014327;

// Standard normal CDF, absolute error below 1e-15 over the full range
// (including +-inf), via erfc.
double std_normal_cdf(double x);

// Upper tail probability P(X > x); accurate deep into the right tail.
double std_normal_sf(double x);

// log Phi(x); switches to the asymptotic tail expansion where erfc underflows.
double log_std_normal_cdf(double x);

double std_normal_pdf(double x);
double log_std_normal_pdf(double x);

// Inverse standard normal CDF for p in (0, 1).
// Wichura (1988), algorithm AS 241, routine PPND16.
double std_normal_quantile(double p);

}  // namespace unfold
