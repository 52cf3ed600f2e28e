#include "unfold/static_chain.hpp"

#include <cassert>
#include <cmath>

#include "unfold/errors.hpp"
#include "unfold/normal.hpp"
#include "unfold/truncated_normal.hpp"

namespace unfold {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void ChainConfig::validate() const {
  if (iterations < 0 || burn_in < 0 || burn_in >= std::max(iterations, 1) || thin < 1) {
    throw invalid_parameter_error(
        "ChainConfig: need iterations > burn_in >= 0 and thin >= 1");
  }
  hyper.validate();
  if (pin_delta2 && !(*pin_delta2 > 0.0)) {
    throw invalid_parameter_error("ChainConfig: pin_delta2 must be positive");
  }
}

ItemParams sample_item_prior_given_z(int z, const PriorHyper& hyper, RngStream& rng) {
  ItemParams item;
  item.z = z;
  const double omega = std::sqrt(hyper.omega2);
  const double kappa = std::sqrt(hyper.kappa2);
  item.alpha1 = z * std::abs(rng.normal(0.0, omega));
  item.alpha2 = -z * std::abs(rng.normal(0.0, omega));
  item.delta1 = rng.normal(z * hyper.mu(0), kappa);
  item.delta2 = rng.normal(z * hyper.mu(1), kappa);
  return item;
}

ChainState init_static_state(const VoteMatrix& data, const ChainConfig& config,
                             RngStream& rng) {
  const Eigen::Index I = data.rows();
  const Eigen::Index J = data.cols();
  ChainState st;
  st.betas.resize(I);
  for (Eigen::Index i = 0; i < I; ++i) st.betas(i) = rng.normal();
  st.items.resize(J);
  for (Eigen::Index j = 0; j < J; ++j) {
    const int z = rng.uniform() < 0.5 ? +1 : -1;
    st.items[j] = sample_item_prior_given_z(z, config.hyper, rng);
    if (config.pin_delta2) st.items[j].delta2 = z * *config.pin_delta2;
  }
  // Any triple satisfying the vote constraint works as a seed; one Gibbs scan
  // immediately replaces it with a draw from the right conditional.
  st.u1 = Eigen::MatrixXd::Zero(I, J);
  st.u3 = Eigen::MatrixXd::Zero(I, J);
  st.u2.resize(I, J);
  for (Eigen::Index i = 0; i < I; ++i) {
    for (Eigen::Index j = 0; j < J; ++j) {
      st.u2(i, j) = data.at(i, j) == Vote::Yea ? 1.0 : -1.0;
    }
  }
  for (Eigen::Index i = 0; i < I; ++i) {
    for (Eigen::Index j = 0; j < J; ++j) {
      if (!data.observed(i, j)) continue;
      const LatentUtilities cur{st.u1(i, j), st.u2(i, j), st.u3(i, j)};
      const LatentUtilities u =
          sample_utilities(data.at(i, j), st.items[j], st.betas(i), cur, rng);
      st.u1(i, j) = u.u1;
      st.u2(i, j) = u.u2;
      st.u3(i, j) = u.u3;
    }
  }
  return st;
}

namespace {

// z conditional for the pinned baseline.  delta2 moves with z, so the two
// candidate alpha conditionals differ and their normalizing pieces stay in
// the weights: log s1 s2 + (m1^2/s1^2 + m2^2/s2^2)/2 + orthant mass.
int sample_z_pinned(const GaussianConditional& cond_plus,
                    const GaussianConditional& cond_minus, double delta1,
                    const PriorHyper& hyper, RngStream& rng) {
  auto weight = [&](const GaussianConditional& cond, int z) {
    const double m1 = cond.mean(0), m2 = cond.mean(1);
    const double s1 = std::sqrt(cond.covariance(0, 0));
    const double s2 = std::sqrt(cond.covariance(1, 1));
    const double d1 = delta1 - z * hyper.mu(0);
    double lw = -0.5 * std::log(2.0 * M_PI * hyper.kappa2) -
                d1 * d1 / (2.0 * hyper.kappa2);
    lw += std::log(s1) + std::log(s2);
    lw += 0.5 * (m1 * m1 / (s1 * s1) + m2 * m2 / (s2 * s2));
    lw += log_std_normal_cdf(z * m1 / s1) + log_std_normal_cdf(-z * m2 / s2);
    return lw;
  };
  const double log_plus = weight(cond_plus, +1);
  const double log_minus = weight(cond_minus, -1);
  const double p_plus = 1.0 / (1.0 + std::exp(log_minus - log_plus));
  return rng.uniform() < p_plus ? +1 : -1;
}

}  // namespace

void static_sweep(ChainState& state, const VoteMatrix& data, const ChainConfig& config,
                  RngStream& rng) {
  const Eigen::Index I = data.rows();
  const Eigen::Index J = data.cols();

  // Latent utilities.
  for (Eigen::Index i = 0; i < I; ++i) {
    for (Eigen::Index j = 0; j < J; ++j) {
      if (!data.observed(i, j)) continue;
      const LatentUtilities cur{state.u1(i, j), state.u2(i, j), state.u3(i, j)};
      const LatentUtilities u =
          sample_utilities(data.at(i, j), state.items[j], state.betas(i), cur, rng);
      state.u1(i, j) = u.u1;
      state.u2(i, j) = u.u2;
      state.u3(i, j) = u.u3;
    }
  }

  // Ideal points.
  std::vector<ItemParams> obs_items;
  std::vector<LatentUtilities> obs_utils;
  for (Eigen::Index i = 0; i < I; ++i) {
    obs_items.clear();
    obs_utils.clear();
    for (Eigen::Index j = 0; j < J; ++j) {
      if (!data.observed(i, j)) continue;
      obs_items.push_back(state.items[j]);
      obs_utils.push_back({state.u1(i, j), state.u2(i, j), state.u3(i, j)});
    }
    const GaussianConditional cond = beta_conditional(obs_items, obs_utils);
    state.betas(i) = rng.normal(cond.mean(0), std::sqrt(cond.covariance(0, 0)));
  }

  // Sign indicator and discriminations, one joint Gibbs step per vote.
  std::vector<double> obs_betas;
  for (Eigen::Index j = 0; j < J; ++j) {
    obs_betas.clear();
    obs_utils.clear();
    for (Eigen::Index i = 0; i < I; ++i) {
      if (!data.observed(i, j)) continue;
      obs_betas.push_back(state.betas(i));
      obs_utils.push_back({state.u1(i, j), state.u2(i, j), state.u3(i, j)});
    }
    ItemParams& item = state.items[j];
    if (config.pin_delta2) {
      const double pin = *config.pin_delta2;
      const GaussianConditional cond_plus = alpha_conditional(
          obs_betas, Eigen::Vector2d(item.delta1, pin), obs_utils, config.hyper);
      const GaussianConditional cond_minus = alpha_conditional(
          obs_betas, Eigen::Vector2d(item.delta1, -pin), obs_utils, config.hyper);
      item.z = sample_z_pinned(cond_plus, cond_minus, item.delta1, config.hyper, rng);
      item.delta2 = item.z * pin;
      const GaussianConditional& cond = item.z == +1 ? cond_plus : cond_minus;
      const Eigen::Vector2d alpha = sample_alpha_given_z(cond, item.z, rng);
      item.alpha1 = alpha(0);
      item.alpha2 = alpha(1);
    } else {
      const Eigen::Vector2d delta(item.delta1, item.delta2);
      const GaussianConditional cond =
          alpha_conditional(obs_betas, delta, obs_utils, config.hyper);
      item.z = sample_z(cond, delta, config.hyper, rng);
      const Eigen::Vector2d alpha = sample_alpha_given_z(cond, item.z, rng);
      item.alpha1 = alpha(0);
      item.alpha2 = alpha(1);
    }
  }

  // Locations.
  for (Eigen::Index j = 0; j < J; ++j) {
    obs_betas.clear();
    obs_utils.clear();
    for (Eigen::Index i = 0; i < I; ++i) {
      if (!data.observed(i, j)) continue;
      obs_betas.push_back(state.betas(i));
      obs_utils.push_back({state.u1(i, j), state.u2(i, j), state.u3(i, j)});
    }
    ItemParams& item = state.items[j];
    const Eigen::Vector2d alpha(item.alpha1, item.alpha2);
    if (config.pin_delta2) {
      const double n = static_cast<double>(obs_betas.size());
      const double prec = n * alpha(0) * alpha(0) + 1.0 / config.hyper.kappa2;
      double h = item.z * config.hyper.mu(0) / config.hyper.kappa2;
      for (std::size_t k = 0; k < obs_betas.size(); ++k) {
        h += alpha(0) * (obs_utils[k].u1 + alpha(0) * obs_betas[k]);
      }
      item.delta1 = rng.normal(h / prec, std::sqrt(1.0 / prec));
    } else {
      const Eigen::Vector2d delta =
          sample_delta(alpha, item.z, obs_betas, obs_utils, config.hyper, rng);
      item.delta1 = delta(0);
      item.delta2 = delta(1);
    }
  }

  ++state.iteration;

#ifndef NDEBUG
  for (Eigen::Index j = 0; j < J; ++j) state.items[j].validate();
  for (Eigen::Index i = 0; i < I; ++i) {
    for (Eigen::Index j = 0; j < J; ++j) {
      if (!data.observed(i, j)) continue;
      const LatentUtilities u{state.u1(i, j), state.u2(i, j), state.u3(i, j)};
      assert(u.consistent_with(data.at(i, j)));
    }
  }
#endif
}

PosteriorSamples run_static_chain(const VoteMatrix& data, const ChainConfig& config,
                                  RngStream& rng) {
  config.validate();
  data.validate();
  if (data.rows() == 0 || data.cols() == 0) {
    throw empty_data_error("run_static_chain: empty vote matrix");
  }

  PosteriorSamples out;
  out.kind = ModelKind::Static;
  for (const auto& l : data.legislators) out.legislator_ids.push_back(l.id);
  for (const auto& v : data.votes) out.vote_ids.push_back(v.id);
  out.data_fingerprint = fingerprint(data);
  out.config = {{"iterations", config.iterations},
                {"burn_in", config.burn_in},
                {"thin", config.thin},
                {"seed", config.seed},
                {"stream_id", rng.stream_id()},
                {"anchor", config.anchor_legislator},
                {"mu", {config.hyper.mu(0), config.hyper.mu(1)}},
                {"omega2", config.hyper.omega2},
                {"kappa2", config.hyper.kappa2}};
  if (config.pin_delta2) out.config["pin_delta2"] = *config.pin_delta2;

  ChainState st = init_static_state(data, config, rng);
  for (int s = 1; s <= config.iterations; ++s) {
    static_sweep(st, data, config, rng);
    if (s > config.burn_in && (s - config.burn_in) % config.thin == 0) {
      Draw d;
      d.beta = st.betas;
      d.items = st.items;
      out.draws.push_back(std::move(d));
    }
  }
  return out;
}

}  // namespace unfold
