#include "unfold/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "unfold/ar1.hpp"
#include "unfold/errors.hpp"

namespace unfold {

Scenario scenario_from_string(const std::string& name) {
  if (name == "partisan") return Scenario::Partisan;
  if (name == "ends-against-middle") return Scenario::EndsAgainstMiddle;
  if (name == "mixed") return Scenario::Mixed;
  throw invalid_parameter_error("unknown scenario '" + name +
                                "' (expected partisan, ends-against-middle or mixed)");
}

ItemParams simulate_item(bool nonmonotone, RngStream& rng) {
  const double aye = nonmonotone ? -1.5 + 3.0 * rng.uniform()
                                 : rng.normal(0.0, 1.0);
  const double near_gap = 0.5 + 1.0 * rng.uniform();
  const double far_gap =
      nonmonotone ? 0.5 + 1.0 * rng.uniform() : 8.0 + 7.0 * rng.uniform();
  const double flip = rng.uniform() < 0.5 ? 1.0 : -1.0;
  PsiTriple psi;
  psi.psi2 = aye;
  psi.psi1 = aye - flip * near_gap;
  psi.psi3 = aye + flip * far_gap;
  return item_from_psi(psi);
}

namespace {

std::vector<bool> nonmonotone_flags(Scenario scenario, int votes, double frac,
                                    RngStream& rng) {
  std::vector<bool> flags(votes, scenario == Scenario::EndsAgainstMiddle);
  if (scenario == Scenario::Mixed) {
    const int count = static_cast<int>(std::lround(frac * votes));
    for (int j = 0; j < votes; ++j) flags[j] = j < count;
    // Fisher-Yates with the run's stream keeps placement reproducible.
    for (int j = votes - 1; j > 0; --j) {
      const int k = static_cast<int>(rng.uniform() * (j + 1));
      std::swap(flags[j], flags[std::min(k, j)]);
    }
  }
  return flags;
}

}  // namespace

SimulatedData simulate_scenario(const SimulateSpec& spec, RngStream& rng) {
  if (spec.legislators < 1 || spec.votes < 1) {
    throw invalid_parameter_error("simulate_scenario: need legislators, votes >= 1");
  }
  if (!(spec.nonmonotone_frac >= 0.0 && spec.nonmonotone_frac <= 1.0)) {
    throw invalid_parameter_error("simulate_scenario: nonmonotone_frac in [0,1]");
  }
  SimulatedData out;

  if (spec.terms <= 0) {
    out.betas.resize(spec.legislators);
    for (int i = 0; i < spec.legislators; ++i) out.betas(i) = rng.normal();
    const auto flags =
        nonmonotone_flags(spec.scenario, spec.votes, spec.nonmonotone_frac, rng);
    out.items.reserve(spec.votes);
    for (int j = 0; j < spec.votes; ++j) {
      out.items.push_back(simulate_item(flags[j], rng));
    }
    out.votes = simulate_votes(out.betas, out.items, spec.missing_rate, rng);
    for (int i = 0; i < spec.legislators; ++i) {
      out.votes.legislators[i].party = out.betas(i) < 0.0 ? "D" : "R";
    }
    return out;
  }

  // Dynamic: every legislator serves all terms; items are drawn per term.
  const int T = spec.terms;
  out.trajectories.resize(spec.legislators);
  for (int i = 0; i < spec.legislators; ++i) {
    TrajectoryConditional prior;
    prior.rho = spec.rho;
    prior.m = Eigen::VectorXd::Zero(T);
    prior.B = Eigen::VectorXd::Zero(T);
    out.trajectories[i] = sample_beta_trajectory(prior, rng);
  }
  const int total_votes = T * spec.votes;
  out.items.reserve(total_votes);
  std::vector<bool> flags;
  for (int t = 1; t <= T; ++t) {
    const auto term_flags =
        nonmonotone_flags(spec.scenario, spec.votes, spec.nonmonotone_frac, rng);
    flags.insert(flags.end(), term_flags.begin(), term_flags.end());
  }
  for (int jt = 0; jt < total_votes; ++jt) {
    out.items.push_back(simulate_item(flags[jt], rng));
  }

  VoteMatrix m;
  m.legislators.resize(spec.legislators);
  for (int i = 0; i < spec.legislators; ++i) {
    m.legislators[i].id = "leg" + std::to_string(i + 1);
    m.legislators[i].party = out.trajectories[i].mean() < 0.0 ? "D" : "R";
  }
  m.votes.resize(total_votes);
  for (int t = 1; t <= T; ++t) {
    for (int j = 0; j < spec.votes; ++j) {
      const int jt = (t - 1) * spec.votes + j;
      m.votes[jt].id = "t" + std::to_string(t) + "v" + std::to_string(j + 1);
      m.votes[jt].term = t;
    }
  }
  m.cells.resize(spec.legislators, total_votes);
  for (int i = 0; i < spec.legislators; ++i) {
    for (int jt = 0; jt < total_votes; ++jt) {
      const int t = *m.votes[jt].term;
      const double theta =
          response_probability(out.trajectories[i](t - 1), out.items[jt]);
      Vote v = rng.uniform() < theta ? Vote::Yea : Vote::Nay;
      if (spec.missing_rate > 0.0 && rng.uniform() < spec.missing_rate) {
        v = Vote::Missing;
      }
      m.set(i, jt, v);
    }
  }
  out.votes = std::move(m);
  return out;
}

nlohmann::json truth_json(const SimulatedData& data) {
  nlohmann::json j;
  nlohmann::json items = nlohmann::json::array();
  for (std::size_t k = 0; k < data.items.size(); ++k) {
    const ItemParams& it = data.items[k];
    items.push_back({{"vote", data.votes.votes[k].id},
                     {"alpha1", it.alpha1},
                     {"alpha2", it.alpha2},
                     {"delta1", it.delta1},
                     {"delta2", it.delta2},
                     {"z", it.z}});
  }
  j["items"] = items;
  nlohmann::json legs = nlohmann::json::array();
  for (std::size_t i = 0; i < data.votes.legislators.size(); ++i) {
    nlohmann::json rec{{"id", data.votes.legislators[i].id}};
    if (data.betas.size() > 0) {
      rec["beta"] = data.betas(static_cast<Eigen::Index>(i));
    } else {
      std::vector<double> traj(data.trajectories[i].begin(),
                               data.trajectories[i].end());
      rec["beta_trajectory"] = traj;
    }
    legs.push_back(rec);
  }
  j["legislators"] = legs;
  return j;
}

}  // namespace unfold
