#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "unfold/samples.hpp"
#include "unfold/vote_matrix.hpp"

namespace unfold {

// Resolves the reflection mode: any draw whose anchor statistic (beta, or
// tenure-mean beta for dynamic fits) is negative gets (beta, alpha, delta, z)
// negated wholesale.  Response probabilities are untouched.
PosteriorSamples apply_sign_anchor(const PosteriorSamples& samples,
                                   const std::string& anchor);

struct WaicReport {
  double total = 0.0;
  std::vector<double> per_unit;  // blocked per-legislator contributions
};

// Blocked WAIC of the fit against the data it was computed on (fingerprints
// must agree).  lppd term by log-sum-exp over draws, penalty by the unbiased
// variance of the per-block log likelihood.
WaicReport waic_blocked(const PosteriorSamples& samples, const VoteMatrix& data);

// Same construction with the blocks taken per vote.
std::vector<double> waic_per_vote(const PosteriorSamples& samples,
                                  const VoteMatrix& data);

// Midrank-based Spearman correlation of two score vectors.
double spearman(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

// Average ranks with ties shared (midranks); rank 1 is the smallest value.
Eigen::VectorXd midranks(const Eigen::VectorXd& values);

struct RankSummary {
  std::vector<double> median_rank;  // per legislator
  Eigen::MatrixXd rank_draws;       // draws x legislators
};

RankSummary rank_summary(const PosteriorSamples& samples);

// Per-term variant for dynamic fits; legislators outside the term get NaN.
Eigen::MatrixXd rank_draws_for_term(const PosteriorSamples& samples, int term);

enum class DispersionMetric { Range, Sd, Iqr };

struct DispersionResult {
  std::vector<double> ratio_draws;  // draws with zero denominators removed
  double posterior_mean = 0.0;
  int excluded_draws = 0;
};

// Per-draw ratio of a spread metric between two legislator groups (indices
// into the samples' legislator list).
DispersionResult dispersion_ratio(const PosteriorSamples& samples,
                                  const std::vector<int>& group_a,
                                  const std::vector<int>& group_b,
                                  DispersionMetric metric);

// Potential scale reduction factor over >= 2 equally long scalar chains.
double gelman_rubin(const std::vector<Eigen::VectorXd>& chains);

struct ResponseCurve {
  Eigen::VectorXd grid;
  Eigen::VectorXd mean;
  Eigen::VectorXd lower;  // pointwise 2.5%
  Eigen::VectorXd upper;  // pointwise 97.5%
};

ResponseCurve response_curve(const PosteriorSamples& samples, const std::string& vote,
                             const Eigen::VectorXd& grid);

// Linear interpolation of order statistics.
double quantile_interp(std::vector<double> values, double q);

}  // namespace unfold
