#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include <json.hpp>

#include "unfold/model.hpp"
#include "unfold/rng.hpp"
#include "unfold/vote_matrix.hpp"

namespace unfold {

enum class Scenario { Partisan, EndsAgainstMiddle, Mixed };

Scenario scenario_from_string(const std::string& name);

struct SimulateSpec {
  Scenario scenario = Scenario::Mixed;
  int legislators = 50;
  int votes = 200;              // total (static) or per term when terms > 0
  double missing_rate = 0.0;
  double nonmonotone_frac = 0.37;  // mixed scenario
  int terms = 0;                   // 0 = static data
  double rho = 0.9;                // AR(1) truth for dynamic trajectories
};

struct SimulatedData {
  VoteMatrix votes;
  Eigen::VectorXd betas;                       // static truth
  std::vector<Eigen::VectorXd> trajectories;   // dynamic truth
  std::vector<ItemParams> items;
};

// Monotone items place the second Nay position far outside the data range;
// ends-against-middle items keep both Nay positions close to the Aye one.
ItemParams simulate_item(bool nonmonotone, RngStream& rng);

SimulatedData simulate_scenario(const SimulateSpec& spec, RngStream& rng);

nlohmann::json truth_json(const SimulatedData& data);

}  // namespace unfold
