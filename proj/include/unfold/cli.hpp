#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

namespace unfold {

// Fully resolved command parameters: CLI flags override config-file values,
// which override the defaults below.  Serialized verbatim into manifests.
struct RunConfig {
  std::string command;  // fit-static | fit-dynamic | simulate | report
  std::string input;
  std::string out;
  std::uint64_t seed = 20240101;
  int chains = 4;
  int iterations = 1000;
  int burnin = 500;
  int thin = 1;
  double omega2 = 25.0;
  double kappa2 = 10.0;
  Eigen::Vector2d mu{-2.0, 10.0};
  std::string anchor;  // empty: first anchor-eligible legislator
  bool check_convergence = false;
  double rhat_threshold = 1.1;
  std::optional<double> pin_delta2;

  // fit-dynamic
  double eta = 0.9;
  double lambda = 0.04;
  double tau2 = 0.1;
  bool no_adapt = false;

  // simulate
  std::string scenario = "mixed";
  int legislators = 50;
  int votes = 200;
  int terms = 0;
  double missing_rate = 0.05;
  double nonmonotone_frac = 0.37;
  double rho_true = 0.9;

  // report
  std::string subcommand;
  std::string store;
  std::string store_b;
  std::string metric = "range";
  std::string group_a;
  std::string group_b;
  std::string vote_id;
  double grid_min = -4.0;
  double grid_max = 4.0;
  double grid_step = 0.1;

  nlohmann::json to_json() const;
};

// Exit codes: 0 success, 2 input/validation error, 3 convergence failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitConvergence = 3;

int cmd_fit_static(const RunConfig& config);
int cmd_fit_dynamic(const RunConfig& config);
int cmd_simulate(const RunConfig& config);
int cmd_report(const RunConfig& config);

// Dispatch on config.command with unfold errors mapped to exit code 2.
int run_command(const RunConfig& config);

}  // namespace unfold
