#pragma once

#include <Eigen/Core>
#include <array>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "unfold/model.hpp"

namespace unfold {

enum class ModelKind { Static, Dynamic };

// One stored Gibbs state.  For the dynamic model `beta` concatenates the
// per-legislator tenure trajectories in legislator order.
struct Draw {
  Eigen::VectorXd beta;
  std::vector<ItemParams> items;
  double rho = std::numeric_limits<double>::quiet_NaN();
};

struct PosteriorSamples {
  ModelKind kind = ModelKind::Static;
  std::vector<std::string> legislator_ids;
  std::vector<std::string> vote_ids;
  std::vector<int> vote_terms;                // dynamic only, 1..T per vote
  std::vector<std::array<int, 2>> tenure;     // dynamic only
  int num_terms = 1;
  std::string data_fingerprint;
  nlohmann::json config;                      // resolved run configuration
  double mh_acceptance_rate = std::numeric_limits<double>::quiet_NaN();
  std::vector<Draw> draws;

  int num_legislators() const { return static_cast<int>(legislator_ids.size()); }
  int num_votes() const { return static_cast<int>(vote_ids.size()); }

  // Offset of legislator i's trajectory inside Draw::beta.
  int traj_offset(int i) const;
  int tenure_length(int i) const { return tenure[i][1] - tenure[i][0] + 1; }

  // Ideal point of legislator i at global term t (1-based). Static draws
  // ignore t.  Throws not_found_error for terms outside the tenure window.
  double beta_at(const Draw& d, int i, int t = 1) const;

  // Anchoring/ranking statistic: beta itself (static) or the tenure mean.
  double beta_statistic(const Draw& d, int i) const;

  // Record length of one draw in the binary store.
  int record_length() const;

  void validate() const;
};

// Store layout: <dir>/manifest.json plus <dir>/draws.bin holding
// little-endian IEEE doubles, one fixed-width record per draw
// (betas, then alpha1 alpha2 delta1 delta2 z per vote, then rho if dynamic).
void write_store(const PosteriorSamples& samples, const std::string& dir);
PosteriorSamples read_store(const std::string& dir);

}  // namespace unfold
