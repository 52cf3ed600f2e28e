#include "unfold/cli.hpp"

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>
#include <vector>

#include "unfold/dynamic_chain.hpp"
#include "unfold/errors.hpp"
#include "unfold/inference.hpp"
#include "unfold/preprocess.hpp"
#include "unfold/samples.hpp"
#include "unfold/simulate.hpp"
#include "unfold/static_chain.hpp"

namespace unfold {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& content) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw validation_error("cannot write " + path);
  out << content;
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  write_text(path, j.dump(2) + "\n");
}

std::string resolve_anchor(const VoteMatrix& data, const std::string& requested) {
  if (!requested.empty()) {
    if (data.index_of_legislator(requested) < 0) {
      throw not_found_error("anchor legislator '" + requested + "' not in data");
    }
    return requested;
  }
  for (const auto& l : data.legislators) {
    if (l.anchor_eligible) return l.id;
  }
  throw validation_error("no anchor-eligible legislator in data");
}

PriorHyper hyper_from(const RunConfig& config) {
  PriorHyper h;
  h.mu = config.mu;
  h.omega2 = config.omega2;
  h.kappa2 = config.kappa2;
  h.validate();
  return h;
}

ChainConfig chain_config_from(const RunConfig& config, const std::string& anchor) {
  ChainConfig cc;
  cc.iterations = config.iterations;
  cc.burn_in = config.burnin;
  cc.thin = config.thin;
  cc.seed = config.seed;
  cc.anchor_legislator = anchor;
  cc.hyper = hyper_from(config);
  cc.pin_delta2 = config.pin_delta2;
  cc.validate();
  return cc;
}

// Max potential scale reduction over the per-legislator statistics (and rho
// for dynamic fits), printed one line per monitored scalar.
double report_rhat(const std::vector<PosteriorSamples>& chains, std::ostream& os) {
  const int S = static_cast<int>(chains.front().draws.size());
  const int I = chains.front().num_legislators();
  double max_rhat = 0.0;
  std::vector<Eigen::VectorXd> series(chains.size(), Eigen::VectorXd(S));
  for (int i = 0; i < I; ++i) {
    for (std::size_t c = 0; c < chains.size(); ++c) {
      for (int s = 0; s < S; ++s) {
        series[c](s) = chains[c].beta_statistic(chains[c].draws[s], i);
      }
    }
    const double rhat = gelman_rubin(series);
    max_rhat = std::max(max_rhat, rhat);
    os << "Rhat[" << chains.front().legislator_ids[i] << "] = " << fmt(rhat) << "\n";
  }
  if (chains.front().kind == ModelKind::Dynamic) {
    for (std::size_t c = 0; c < chains.size(); ++c) {
      for (int s = 0; s < S; ++s) series[c](s) = chains[c].draws[s].rho;
    }
    const double rhat = gelman_rubin(series);
    max_rhat = std::max(max_rhat, rhat);
    os << "Rhat[rho] = " << fmt(rhat) << "\n";
  }
  os << "max Rhat = " << fmt(max_rhat) << "\n";
  return max_rhat;
}

int run_fit(const RunConfig& config, bool dynamic) {
  if (config.input.empty() || config.out.empty()) {
    throw validation_error("fit: --input and --out are required");
  }
  if (config.chains < 1) throw validation_error("fit: need --chains >= 1");

  const VoteMatrix raw = load_vote_matrix(config.input);
  const VoteMatrix data = preprocess(raw);
  const std::string anchor = resolve_anchor(data, config.anchor);
  const ChainConfig cc = chain_config_from(config, anchor);

  DynamicVoteData dyn_data;
  DynamicHyper dyn_hyper;
  if (dynamic) {
    dyn_data = align_terms(data);
    dyn_hyper.eta = config.eta;
    dyn_hyper.lambda = config.lambda;
    dyn_hyper.tau2 = config.tau2;
    dyn_hyper.adapt = !config.no_adapt;
    dyn_hyper.validate();
  }

  std::vector<PosteriorSamples> chains(config.chains);
  std::vector<std::exception_ptr> failures(config.chains);
  std::vector<std::thread> workers;
  for (int c = 0; c < config.chains; ++c) {
    workers.emplace_back([&, c] {
      try {
        RngStream rng(config.seed, static_cast<std::uint64_t>(c));
        PosteriorSamples s = dynamic ? run_dynamic_chain(dyn_data, cc, dyn_hyper, rng)
                                     : run_static_chain(data, cc, rng);
        if (!s.draws.empty()) s = apply_sign_anchor(s, anchor);
        s.config["cli"] = config.to_json();
        s.config["chain_index"] = c;
        chains[c] = std::move(s);
      } catch (...) {
        failures[c] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  for (int c = 0; c < config.chains; ++c) {
    const std::string dir = config.out + "/chain-" + std::to_string(c);
    write_store(chains[c], dir);
    std::cout << "chain " << c << ": " << chains[c].draws.size() << " draws -> " << dir;
    if (dynamic && std::isfinite(chains[c].mh_acceptance_rate)) {
      std::cout << " (MH acceptance rate = " << fmt(chains[c].mh_acceptance_rate) << ")";
    }
    std::cout << "\n";
  }

  nlohmann::json manifest{{"config", config.to_json()},
                          {"anchor", anchor},
                          {"data_fingerprint", chains.front().data_fingerprint},
                          {"chains", config.chains}};
  write_json_file(config.out + "/manifest.json", manifest);

  const int S = static_cast<int>(chains.front().draws.size());
  if (config.chains >= 2 && S >= 10) {
    const double max_rhat = report_rhat(chains, std::cout);
    if (config.check_convergence && max_rhat > config.rhat_threshold) {
      std::cout << "convergence check FAILED (threshold " << fmt(config.rhat_threshold)
                << ")\n";
      return kExitConvergence;
    }
  } else if (config.check_convergence) {
    throw validation_error("--check-convergence needs >= 2 chains and >= 10 draws");
  }
  return kExitOk;
}

std::vector<int> resolve_group(const VoteMatrix& data, const std::string& spec) {
  std::vector<int> idx;
  if (spec.rfind("ids:", 0) == 0) {
    std::string rest = spec.substr(4);
    std::size_t start = 0;
    while (start <= rest.size()) {
      const std::size_t pos = rest.find(',', start);
      const std::string id = rest.substr(
          start, pos == std::string::npos ? std::string::npos : pos - start);
      const int i = data.index_of_legislator(id);
      if (i < 0) throw not_found_error("group member '" + id + "' not in data");
      idx.push_back(i);
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
  } else {
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
      if (data.legislators[i].party == spec) idx.push_back(static_cast<int>(i));
    }
  }
  if (idx.empty()) throw validation_error("group '" + spec + "' matched no legislators");
  return idx;
}

DispersionMetric metric_from(const std::string& name) {
  if (name == "range") return DispersionMetric::Range;
  if (name == "sd") return DispersionMetric::Sd;
  if (name == "iqr") return DispersionMetric::Iqr;
  throw invalid_parameter_error("unknown metric '" + name + "'");
}

PosteriorSamples load_checked_store(const std::string& dir, const VoteMatrix& data) {
  PosteriorSamples s = read_store(dir);
  if (s.data_fingerprint != fingerprint(data)) {
    throw fingerprint_mismatch_error("store " + dir +
                                     " was fit on different data than --input");
  }
  return s;
}

int report_waic(const RunConfig& config, const PosteriorSamples& samples,
                const VoteMatrix& data) {
  const WaicReport blocked = waic_blocked(samples, data);
  const std::vector<double> per_vote = waic_per_vote(samples, data);
  write_json_file(config.out + "/waic.json",
                  {{"total", blocked.total}, {"num_draws", samples.draws.size()}});
  std::string csv = "legislator,waic\n";
  for (int i = 0; i < samples.num_legislators(); ++i) {
    csv += samples.legislator_ids[i] + "," + fmt(blocked.per_unit[i]) + "\n";
  }
  write_text(config.out + "/waic_per_legislator.csv", csv);
  csv = "vote,waic\n";
  for (int j = 0; j < samples.num_votes(); ++j) {
    csv += samples.vote_ids[j] + "," + fmt(per_vote[j]) + "\n";
  }
  write_text(config.out + "/waic_per_vote.csv", csv);
  std::cout << "WAIC = " << fmt(blocked.total) << "\n";
  return kExitOk;
}

int report_ranks(const RunConfig& config, const PosteriorSamples& samples,
                 const VoteMatrix& data) {
  const RankSummary summary = rank_summary(samples);
  std::string csv = "legislator,party,median_rank\n";
  for (int i = 0; i < samples.num_legislators(); ++i) {
    csv += samples.legislator_ids[i] + "," + data.legislators[i].party + "," +
           fmt(summary.median_rank[i]) + "\n";
  }
  write_text(config.out + "/ranks.csv", csv);
  if (samples.kind == ModelKind::Dynamic) {
    std::string by_term = "term,legislator,median_rank\n";
    for (int t = 1; t <= samples.num_terms; ++t) {
      const Eigen::MatrixXd draws = rank_draws_for_term(samples, t);
      for (int i = 0; i < samples.num_legislators(); ++i) {
        if (std::isnan(draws(0, i))) continue;
        std::vector<double> col(draws.rows());
        for (Eigen::Index s = 0; s < draws.rows(); ++s) col[s] = draws(s, i);
        by_term += std::to_string(t) + "," + samples.legislator_ids[i] + "," +
                   fmt(quantile_interp(col, 0.5)) + "\n";
      }
    }
    write_text(config.out + "/ranks_by_term.csv", by_term);
  }
  std::cout << "wrote ranks for " << samples.num_legislators() << " legislators\n";
  return kExitOk;
}

int report_compare(const RunConfig& config, const PosteriorSamples& a,
                   const VoteMatrix& data) {
  if (config.store_b.empty()) throw validation_error("compare: --store-b is required");
  const PosteriorSamples b = load_checked_store(config.store_b, data);
  if (a.legislator_ids != b.legislator_ids) {
    throw validation_error("compare: stores cover different legislators");
  }
  const int S = static_cast<int>(std::min(a.draws.size(), b.draws.size()));
  if (S < 1) throw insufficient_samples_error("compare: empty store");
  const int I = a.num_legislators();
  Eigen::VectorXd sa(I), sb(I);
  std::vector<double> rho_draws(S);
  std::string csv = "draw,spearman\n";
  for (int s = 0; s < S; ++s) {
    for (int i = 0; i < I; ++i) {
      sa(i) = a.beta_statistic(a.draws[s], i);
      sb(i) = b.beta_statistic(b.draws[s], i);
    }
    rho_draws[s] = spearman(sa, sb);
    csv += std::to_string(s) + "," + fmt(rho_draws[s]) + "\n";
  }
  write_text(config.out + "/compare_draws.csv", csv);
  std::vector<double> copy = rho_draws;
  const double mean =
      std::accumulate(copy.begin(), copy.end(), 0.0) / static_cast<double>(S);
  nlohmann::json j{{"mean", mean},
                   {"q025", quantile_interp(copy, 0.025)},
                   {"q975", quantile_interp(std::move(copy), 0.975)},
                   {"draws", S}};
  write_json_file(config.out + "/compare.json", j);
  std::cout << "Spearman mean = " << fmt(mean) << "\n";

  if (a.kind == ModelKind::Dynamic && b.kind == ModelKind::Dynamic &&
      a.num_terms == b.num_terms) {
    std::string by_term = "term,mean,q025,q975\n";
    for (int t = 1; t <= a.num_terms; ++t) {
      const Eigen::MatrixXd ra = rank_draws_for_term(a, t);
      const Eigen::MatrixXd rb = rank_draws_for_term(b, t);
      std::vector<double> vals;
      for (int s = 0; s < S; ++s) {
        std::vector<double> xs, ys;
        for (int i = 0; i < I; ++i) {
          if (std::isnan(ra(s, i)) || std::isnan(rb(s, i))) continue;
          xs.push_back(ra(s, i));
          ys.push_back(rb(s, i));
        }
        if (xs.size() < 2) continue;
        Eigen::VectorXd ex = Eigen::Map<Eigen::VectorXd>(xs.data(), xs.size());
        Eigen::VectorXd ey = Eigen::Map<Eigen::VectorXd>(ys.data(), ys.size());
        vals.push_back(spearman(ex, ey));
      }
      if (vals.empty()) continue;
      std::vector<double> vc = vals;
      const double m =
          std::accumulate(vc.begin(), vc.end(), 0.0) / static_cast<double>(vc.size());
      by_term += std::to_string(t) + "," + fmt(m) + "," +
                 fmt(quantile_interp(vc, 0.025)) + "," +
                 fmt(quantile_interp(std::move(vc), 0.975)) + "\n";
    }
    write_text(config.out + "/compare_by_term.csv", by_term);
  }
  return kExitOk;
}

int report_dispersion(const RunConfig& config, const PosteriorSamples& samples,
                      const VoteMatrix& data) {
  if (config.group_a.empty() || config.group_b.empty()) {
    throw validation_error("dispersion: --group-a and --group-b are required");
  }
  const DispersionResult res =
      dispersion_ratio(samples, resolve_group(data, config.group_a),
                       resolve_group(data, config.group_b), metric_from(config.metric));
  std::string csv = "draw,ratio\n";
  for (std::size_t s = 0; s < res.ratio_draws.size(); ++s) {
    csv += std::to_string(s) + "," + fmt(res.ratio_draws[s]) + "\n";
  }
  write_text(config.out + "/dispersion_draws.csv", csv);
  write_json_file(config.out + "/dispersion.json",
                  {{"metric", config.metric},
                   {"posterior_mean", res.posterior_mean},
                   {"excluded_draws", res.excluded_draws},
                   {"draws", res.ratio_draws.size()}});
  std::cout << "dispersion ratio mean = " << fmt(res.posterior_mean) << "\n";
  return kExitOk;
}

int report_curves(const RunConfig& config, const PosteriorSamples& samples) {
  if (config.vote_id.empty()) throw validation_error("curves: --vote is required");
  if (!(config.grid_step > 0.0) || !(config.grid_max >= config.grid_min)) {
    throw invalid_parameter_error("curves: bad grid specification");
  }
  const int n = static_cast<int>(
                    std::floor((config.grid_max - config.grid_min) / config.grid_step)) +
                1;
  Eigen::VectorXd grid(n);
  for (int g = 0; g < n; ++g) grid(g) = config.grid_min + g * config.grid_step;
  const ResponseCurve curve = response_curve(samples, config.vote_id, grid);
  std::string csv = "beta,mean,q025,q975\n";
  for (int g = 0; g < n; ++g) {
    csv += fmt(curve.grid(g)) + "," + fmt(curve.mean(g)) + "," + fmt(curve.lower(g)) +
           "," + fmt(curve.upper(g)) + "\n";
  }
  write_text(config.out + "/curve_" + config.vote_id + ".csv", csv);
  std::cout << "wrote response curve for " << config.vote_id << "\n";
  return kExitOk;
}

}  // namespace

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j{{"command", command},
                   {"input", input},
                   {"out", out},
                   {"seed", seed},
                   {"chains", chains},
                   {"iterations", iterations},
                   {"burnin", burnin},
                   {"thin", thin},
                   {"omega2", omega2},
                   {"kappa2", kappa2},
                   {"mu", {mu(0), mu(1)}},
                   {"anchor", anchor},
                   {"check_convergence", check_convergence},
                   {"rhat_threshold", rhat_threshold},
                   {"eta", eta},
                   {"lambda", lambda},
                   {"tau2", tau2},
                   {"no_adapt", no_adapt},
                   {"scenario", scenario},
                   {"legislators", legislators},
                   {"votes", votes},
                   {"terms", terms},
                   {"missing_rate", missing_rate},
                   {"nonmonotone_frac", nonmonotone_frac},
                   {"rho_true", rho_true},
                   {"subcommand", subcommand},
                   {"store", store},
                   {"store_b", store_b},
                   {"metric", metric},
                   {"group_a", group_a},
                   {"group_b", group_b},
                   {"vote", vote_id},
                   {"grid_min", grid_min},
                   {"grid_max", grid_max},
                   {"grid_step", grid_step}};
  if (pin_delta2) j["pin_delta2"] = *pin_delta2;
  return j;
}

int cmd_fit_static(const RunConfig& config) { return run_fit(config, false); }

int cmd_fit_dynamic(const RunConfig& config) { return run_fit(config, true); }

int cmd_simulate(const RunConfig& config) {
  if (config.out.empty()) throw validation_error("simulate: --out is required");
  SimulateSpec spec;
  spec.scenario = scenario_from_string(config.scenario);
  spec.legislators = config.legislators;
  spec.votes = config.votes;
  spec.terms = config.terms;
  spec.missing_rate = config.missing_rate;
  spec.nonmonotone_frac = config.nonmonotone_frac;
  spec.rho = config.rho_true;

  RngStream rng(config.seed, 0);
  const SimulatedData data = simulate_scenario(spec, rng);
  save_vote_matrix(data.votes, config.out + "/votes.csv");
  write_json_file(config.out + "/truth.json", truth_json(data));
  write_json_file(config.out + "/manifest.json",
                  {{"config", config.to_json()},
                   {"data_fingerprint", fingerprint(data.votes)}});
  std::cout << "simulated " << data.votes.rows() << " x " << data.votes.cols()
            << " votes -> " << config.out << "\n";
  return kExitOk;
}

int cmd_report(const RunConfig& config) {
  if (config.input.empty() || config.out.empty() || config.store.empty()) {
    throw validation_error("report: --input, --store and --out are required");
  }
  const VoteMatrix data = preprocess(load_vote_matrix(config.input));
  const PosteriorSamples samples = load_checked_store(config.store, data);

  write_json_file(config.out + "/manifest.json",
                  {{"config", config.to_json()},
                   {"data_fingerprint", samples.data_fingerprint}});

  if (config.subcommand == "waic") return report_waic(config, samples, data);
  if (config.subcommand == "ranks") return report_ranks(config, samples, data);
  if (config.subcommand == "compare") return report_compare(config, samples, data);
  if (config.subcommand == "dispersion") {
    return report_dispersion(config, samples, data);
  }
  if (config.subcommand == "curves") return report_curves(config, samples);
  throw validation_error("report: unknown subcommand '" + config.subcommand + "'");
}

int run_command(const RunConfig& config) {
  try {
    if (config.command == "fit-static") return cmd_fit_static(config);
    if (config.command == "fit-dynamic") return cmd_fit_dynamic(config);
    if (config.command == "simulate") return cmd_simulate(config);
    if (config.command == "report") return cmd_report(config);
    std::cerr << "error: unknown command '" << config.command << "'\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace unfold
