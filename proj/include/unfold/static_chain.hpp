#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

#include "unfold/conditionals.hpp"
#include "unfold/model.hpp"
#include "unfold/rng.hpp"
#include "unfold/samples.hpp"
#include "unfold/vote_matrix.hpp"

namespace unfold {

struct ChainConfig {
  int iterations = 1000;
  int burn_in = 500;
  int thin = 1;
  std::uint64_t seed = 0;
  std::string anchor_legislator;  // empty: callers pick the first eligible
  PriorHyper hyper;

  // Monotone-constrained baseline: fixes delta2 at z * this magnitude so the
  // second utility component never binds on the data range.
  std::optional<double> pin_delta2;

  void validate() const;
};

// Full Gibbs state.  Utility matrices are only meaningful on observed cells.
struct ChainState {
  Eigen::VectorXd betas;
  std::vector<ItemParams> items;
  Eigen::MatrixXd u1, u2, u3;
  long iteration = 0;
};

ChainState init_static_state(const VoteMatrix& data, const ChainConfig& config,
                             RngStream& rng);

// One sweep: all utilities, all betas, per vote (z, alpha) jointly, all deltas.
void static_sweep(ChainState& state, const VoteMatrix& data, const ChainConfig& config,
                  RngStream& rng);

PosteriorSamples run_static_chain(const VoteMatrix& data, const ChainConfig& config,
                                  RngStream& rng);

// Shared by the samplers and by joint-distribution tests: draws an item from
// the prior with the sign indicator fixed.
ItemParams sample_item_prior_given_z(int z, const PriorHyper& hyper, RngStream& rng);

}  // namespace unfold
