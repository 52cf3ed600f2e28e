#include "unfold/dynamic_chain.hpp"

#include <cassert>
#include <cmath>

#include "unfold/errors.hpp"
#include "unfold/truncated_normal.hpp"

namespace unfold {

namespace {
constexpr double kAdaptScale = 2.0;  // Robbins-Monro step is kAdaptScale / sweep
}

void DynamicHyper::validate() const {
  if (!(lambda > 0.0) || !(tau2 > 0.0)) {
    throw invalid_parameter_error("DynamicHyper: lambda and tau2 must be positive");
  }
  if (!std::isfinite(eta)) throw invalid_parameter_error("DynamicHyper: eta not finite");
}

double rho_log_accept(double rho_cur, double rho_prop,
                      std::span<const Eigen::VectorXd> trajectories,
                      const DynamicHyper& hyper) {
  if (!(rho_prop > 0.0 && rho_prop < 1.0)) {
    return -std::numeric_limits<double>::infinity();
  }
  double la = log_trunc_normal_pdf(rho_prop, hyper.eta, hyper.lambda, 0.0, 1.0) -
              log_trunc_normal_pdf(rho_cur, hyper.eta, hyper.lambda, 0.0, 1.0);
  la += std::log(rho_prop) + std::log1p(-rho_prop) - std::log(rho_cur) -
        std::log1p(-rho_cur);
  for (const auto& traj : trajectories) {
    la += ar1_log_density(traj, rho_prop) - ar1_log_density(traj, rho_cur);
  }
  return la;
}

RhoStepResult rho_mh_step(double rho, std::span<const Eigen::VectorXd> trajectories,
                          const DynamicHyper& hyper, RngStream& rng) {
  if (!(rho > 0.0 && rho < 1.0)) {
    throw invalid_parameter_error("rho_mh_step: rho must lie in (0,1)");
  }
  hyper.validate();
  const double upsilon = std::log(rho) - std::log1p(-rho);
  const double prop = upsilon + rng.normal(0.0, std::sqrt(hyper.tau2));
  const double rho_prop = 1.0 / (1.0 + std::exp(-prop));
  const double log_alpha = rho_log_accept(rho, rho_prop, trajectories, hyper);
  const bool accepted = std::log(rng.uniform()) < log_alpha;
  return {accepted ? rho_prop : rho, accepted, log_alpha};
}

DynamicChainState init_dynamic_state(const DynamicVoteData& data,
                                     const ChainConfig& config,
                                     const DynamicHyper& dyn, RngStream& rng) {
  const Eigen::Index I = data.base.rows();
  const Eigen::Index J = data.base.cols();
  DynamicChainState st;
  st.tau2 = dyn.tau2;
  st.rho = sample_trunc_normal(dyn.eta, dyn.lambda, 0.0, 1.0, rng);
  if (st.rho >= 1.0) st.rho = std::nextafter(1.0, 0.0);

  st.trajectories.resize(I);
  for (Eigen::Index i = 0; i < I; ++i) {
    TrajectoryConditional prior;
    prior.rho = st.rho;
    prior.m = Eigen::VectorXd::Zero(data.tenure_length(i));
    prior.B = Eigen::VectorXd::Zero(data.tenure_length(i));
    st.trajectories[i] = sample_beta_trajectory(prior, rng);
  }
  st.items.resize(J);
  for (Eigen::Index j = 0; j < J; ++j) {
    const int z = rng.uniform() < 0.5 ? +1 : -1;
    st.items[j] = sample_item_prior_given_z(z, config.hyper, rng);
  }

  st.u1 = Eigen::MatrixXd::Zero(I, J);
  st.u3 = Eigen::MatrixXd::Zero(I, J);
  st.u2.resize(I, J);
  for (Eigen::Index i = 0; i < I; ++i) {
    for (Eigen::Index j = 0; j < J; ++j) {
      st.u2(i, j) = data.base.at(i, j) == Vote::Yea ? 1.0 : -1.0;
    }
  }
  for (Eigen::Index i = 0; i < I; ++i) {
    for (Eigen::Index j = 0; j < J; ++j) {
      if (!data.base.observed(i, j)) continue;
      const double beta =
          st.trajectories[i](data.term_of_vote(j) - data.tenure[i][0]);
      const LatentUtilities cur{st.u1(i, j), st.u2(i, j), st.u3(i, j)};
      const LatentUtilities u =
          sample_utilities(data.base.at(i, j), st.items[j], beta, cur, rng);
      st.u1(i, j) = u.u1;
      st.u2(i, j) = u.u2;
      st.u3(i, j) = u.u3;
    }
  }
  return st;
}

void dynamic_sweep(DynamicChainState& state, const DynamicVoteData& data,
                   const ChainConfig& config, const DynamicHyper& dyn,
                   RngStream& rng) {
  const Eigen::Index I = data.base.rows();
  const Eigen::Index J = data.base.cols();

  auto beta_of_cell = [&](Eigen::Index i, Eigen::Index j) {
    return state.trajectories[i](data.term_of_vote(j) - data.tenure[i][0]);
  };

  // Latent utilities.
  for (Eigen::Index i = 0; i < I; ++i) {
    for (Eigen::Index j = 0; j < J; ++j) {
      if (!data.base.observed(i, j)) continue;
      const LatentUtilities cur{state.u1(i, j), state.u2(i, j), state.u3(i, j)};
      const LatentUtilities u = sample_utilities(data.base.at(i, j), state.items[j],
                                                 beta_of_cell(i, j), cur, rng);
      state.u1(i, j) = u.u1;
      state.u2(i, j) = u.u2;
      state.u3(i, j) = u.u3;
    }
  }

  // Whole ideal-point trajectories.
  std::vector<ItemParams> obs_items;
  std::vector<LatentUtilities> obs_utils;
  std::vector<int> obs_terms;
  for (Eigen::Index i = 0; i < I; ++i) {
    obs_items.clear();
    obs_utils.clear();
    obs_terms.clear();
    for (Eigen::Index j = 0; j < J; ++j) {
      if (!data.base.observed(i, j)) continue;
      obs_items.push_back(state.items[j]);
      obs_utils.push_back({state.u1(i, j), state.u2(i, j), state.u3(i, j)});
      obs_terms.push_back(data.term_of_vote(j) - data.tenure[i][0]);
    }
    const TrajectoryConditional cond = beta_trajectory_conditional(
        obs_items, obs_utils, obs_terms, data.tenure_length(i), state.rho);
    state.trajectories[i] = sample_beta_trajectory(cond, rng);
  }

  // Per-vote sign/discrimination, then locations, as in the static sweep.
  std::vector<double> obs_betas;
  for (Eigen::Index j = 0; j < J; ++j) {
    obs_betas.clear();
    obs_utils.clear();
    for (Eigen::Index i = 0; i < I; ++i) {
      if (!data.base.observed(i, j)) continue;
      obs_betas.push_back(beta_of_cell(i, j));
      obs_utils.push_back({state.u1(i, j), state.u2(i, j), state.u3(i, j)});
    }
    ItemParams& item = state.items[j];
    const Eigen::Vector2d delta(item.delta1, item.delta2);
    const GaussianConditional cond =
        alpha_conditional(obs_betas, delta, obs_utils, config.hyper);
    item.z = sample_z(cond, delta, config.hyper, rng);
    const Eigen::Vector2d alpha = sample_alpha_given_z(cond, item.z, rng);
    item.alpha1 = alpha(0);
    item.alpha2 = alpha(1);
  }
  for (Eigen::Index j = 0; j < J; ++j) {
    obs_betas.clear();
    obs_utils.clear();
    for (Eigen::Index i = 0; i < I; ++i) {
      if (!data.base.observed(i, j)) continue;
      obs_betas.push_back(beta_of_cell(i, j));
      obs_utils.push_back({state.u1(i, j), state.u2(i, j), state.u3(i, j)});
    }
    ItemParams& item = state.items[j];
    const Eigen::Vector2d alpha(item.alpha1, item.alpha2);
    const Eigen::Vector2d delta =
        sample_delta(alpha, item.z, obs_betas, obs_utils, config.hyper, rng);
    item.delta1 = delta(0);
    item.delta2 = delta(1);
  }

  // Autocorrelation.
  DynamicHyper step_hyper = dyn;
  step_hyper.tau2 = state.tau2;
  const RhoStepResult res = rho_mh_step(state.rho, state.trajectories, step_hyper, rng);
  state.rho = res.rho_new;

  ++state.iteration;
  if (state.iteration <= config.burn_in) {
    if (dyn.adapt) {
      ++state.adapt_updates;
      const double gamma =
          std::min(1.0, kAdaptScale / static_cast<double>(state.adapt_updates));
      const double indicator = res.accepted ? 1.0 : 0.0;
      state.tau2 = std::exp(std::log(state.tau2) + gamma * (indicator - 0.4));
    }
  } else {
    ++state.steps_post_burnin;
    if (res.accepted) ++state.accepts_post_burnin;
  }

#ifndef NDEBUG
  for (Eigen::Index j = 0; j < J; ++j) state.items[j].validate();
  for (Eigen::Index i = 0; i < I; ++i) {
    for (Eigen::Index j = 0; j < J; ++j) {
      if (!data.base.observed(i, j)) continue;
      const LatentUtilities u{state.u1(i, j), state.u2(i, j), state.u3(i, j)};
      assert(u.consistent_with(data.base.at(i, j)));
    }
  }
#endif
}

PosteriorSamples run_dynamic_chain(const DynamicVoteData& data,
                                   const ChainConfig& config, const DynamicHyper& dyn,
                                   RngStream& rng) {
  config.validate();
  dyn.validate();
  data.base.validate();
  if (data.base.rows() == 0 || data.base.cols() == 0) {
    throw empty_data_error("run_dynamic_chain: empty vote matrix");
  }
  if (config.pin_delta2) {
    throw invalid_parameter_error("run_dynamic_chain: pin_delta2 is static-only");
  }

  PosteriorSamples out;
  out.kind = ModelKind::Dynamic;
  for (const auto& l : data.base.legislators) out.legislator_ids.push_back(l.id);
  for (const auto& v : data.base.votes) out.vote_ids.push_back(v.id);
  out.vote_terms.resize(data.base.cols());
  for (Eigen::Index j = 0; j < data.base.cols(); ++j) {
    out.vote_terms[j] = data.term_of_vote(j);
  }
  out.tenure = data.tenure;
  out.num_terms = data.num_terms;
  out.data_fingerprint = fingerprint(data.base);
  out.config = {{"iterations", config.iterations},
                {"burn_in", config.burn_in},
                {"thin", config.thin},
                {"seed", config.seed},
                {"stream_id", rng.stream_id()},
                {"anchor", config.anchor_legislator},
                {"mu", {config.hyper.mu(0), config.hyper.mu(1)}},
                {"omega2", config.hyper.omega2},
                {"kappa2", config.hyper.kappa2},
                {"eta", dyn.eta},
                {"lambda", dyn.lambda},
                {"tau2", dyn.tau2},
                {"adapt", dyn.adapt}};

  DynamicChainState st = init_dynamic_state(data, config, dyn, rng);
  for (int s = 1; s <= config.iterations; ++s) {
    dynamic_sweep(st, data, config, dyn, rng);
    assert(st.iteration > config.burn_in ? st.adapt_updates <= config.burn_in : true);
    if (s > config.burn_in && (s - config.burn_in) % config.thin == 0) {
      Draw d;
      int total = 0;
      for (Eigen::Index i = 0; i < data.base.rows(); ++i) total += data.tenure_length(i);
      d.beta.resize(total);
      int off = 0;
      for (Eigen::Index i = 0; i < data.base.rows(); ++i) {
        d.beta.segment(off, data.tenure_length(i)) = st.trajectories[i];
        off += data.tenure_length(i);
      }
      d.items = st.items;
      d.rho = st.rho;
      out.draws.push_back(std::move(d));
    }
  }
  out.mh_acceptance_rate =
      st.steps_post_burnin > 0
          ? static_cast<double>(st.accepts_post_burnin) / st.steps_post_burnin
          : std::numeric_limits<double>::quiet_NaN();
  out.config["tau2_final"] = st.tau2;
  out.config["adapt_updates"] = st.adapt_updates;
  return out;
}

}  // namespace unfold
