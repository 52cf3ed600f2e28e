#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

#include "unfold/ar1.hpp"
#include "unfold/preprocess.hpp"
#include "unfold/rng.hpp"
#include "unfold/samples.hpp"
#include "unfold/static_chain.hpp"

namespace unfold {

struct DynamicHyper {
  double eta = 0.9;      // rho prior mean
  double lambda = 0.04;  // rho prior sd
  double tau2 = 0.1;     // logit-scale random walk variance (starting value)
  bool adapt = true;     // tune tau2 toward 40% acceptance during burn-in

  void validate() const;
};

struct RhoStepResult {
  double rho_new;
  bool accepted;
  double log_alpha;
};

// Log acceptance ratio for rho -> rho_prop: AR(1) prior terms over every
// tenure window, the truncated-normal prior on rho, and the logit Jacobian
// rho(1-rho) on both sides.
double rho_log_accept(double rho_cur, double rho_prop,
                      std::span<const Eigen::VectorXd> trajectories,
                      const DynamicHyper& hyper);

// One random-walk Metropolis-Hastings step on logit(rho).
RhoStepResult rho_mh_step(double rho, std::span<const Eigen::VectorXd> trajectories,
                          const DynamicHyper& hyper, RngStream& rng);

struct DynamicChainState {
  std::vector<Eigen::VectorXd> trajectories;  // per legislator, tenure window
  std::vector<ItemParams> items;              // per vote
  Eigen::MatrixXd u1, u2, u3;
  double rho = 0.9;
  double tau2 = 0.1;
  long iteration = 0;
  long adapt_updates = 0;
  long accepts_post_burnin = 0;
  long steps_post_burnin = 0;
};

DynamicChainState init_dynamic_state(const DynamicVoteData& data,
                                     const ChainConfig& config,
                                     const DynamicHyper& dyn, RngStream& rng);

// One sweep: utilities, whole trajectories, per-vote (z, alpha) then delta,
// then the rho step (with Robbins-Monro tau2 adaptation inside burn-in).
void dynamic_sweep(DynamicChainState& state, const DynamicVoteData& data,
                   const ChainConfig& config, const DynamicHyper& dyn,
                   RngStream& rng);

PosteriorSamples run_dynamic_chain(const DynamicVoteData& data,
                                   const ChainConfig& config, const DynamicHyper& dyn,
                                   RngStream& rng);

}  // namespace unfold
