#include "unfold/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "unfold/errors.hpp"

namespace unfold {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double clamped_theta(double theta) {
  return std::clamp(theta, 1e-300, 1.0 - 1e-15);
}

void check_fingerprint(const PosteriorSamples& samples, const VoteMatrix& data) {
  if (fingerprint(data) != samples.data_fingerprint) {
    throw fingerprint_mismatch_error(
        "samples were fit on different data (fingerprint mismatch)");
  }
  if (static_cast<int>(data.rows()) != samples.num_legislators() ||
      static_cast<int>(data.cols()) != samples.num_votes()) {
    throw fingerprint_mismatch_error("samples/data dimensions disagree");
  }
}

// Per-draw log likelihood of one block (a row or a column of the matrix).
double block_loglik(const PosteriorSamples& samples, const VoteMatrix& data,
                    const Draw& d, bool by_legislator, int block) {
  double ll = 0.0;
  const Eigen::Index I = data.rows();
  const Eigen::Index J = data.cols();
  const Eigen::Index lo_i = by_legislator ? block : 0;
  const Eigen::Index hi_i = by_legislator ? block + 1 : I;
  const Eigen::Index lo_j = by_legislator ? 0 : block;
  const Eigen::Index hi_j = by_legislator ? J : block + 1;
  for (Eigen::Index i = lo_i; i < hi_i; ++i) {
    for (Eigen::Index j = lo_j; j < hi_j; ++j) {
      if (!data.observed(i, j)) continue;
      const int term = samples.kind == ModelKind::Dynamic
                           ? samples.vote_terms[static_cast<std::size_t>(j)]
                           : 1;
      const double theta = clamped_theta(response_probability(
          samples.beta_at(d, static_cast<int>(i), term), d.items[j]));
      ll += data.at(i, j) == Vote::Yea ? std::log(theta) : std::log1p(-theta);
    }
  }
  return ll;
}

double blocked_score(const std::vector<double>& draws_ll) {
  const std::size_t S = draws_ll.size();
  const double max_ll = *std::max_element(draws_ll.begin(), draws_ll.end());
  double sum_exp = 0.0;
  for (const double ll : draws_ll) sum_exp += std::exp(ll - max_ll);
  const double lppd = max_ll + std::log(sum_exp) - std::log(static_cast<double>(S));
  double penalty = 0.0;
  if (S > 1) {
    const double mean =
        std::accumulate(draws_ll.begin(), draws_ll.end(), 0.0) / static_cast<double>(S);
    for (const double ll : draws_ll) penalty += (ll - mean) * (ll - mean);
    penalty /= static_cast<double>(S - 1);
  }
  return -2.0 * (lppd - penalty);
}

}  // namespace

PosteriorSamples apply_sign_anchor(const PosteriorSamples& samples,
                                   const std::string& anchor) {
  int idx = -1;
  for (int i = 0; i < samples.num_legislators(); ++i) {
    if (samples.legislator_ids[i] == anchor) idx = i;
  }
  if (idx < 0) throw not_found_error("apply_sign_anchor: unknown legislator '" + anchor + "'");

  PosteriorSamples out = samples;
  out.config["anchor"] = anchor;
  for (auto& d : out.draws) {
    if (out.beta_statistic(d, idx) >= 0.0) continue;
    d.beta = -d.beta;
    for (auto& item : d.items) item = negate(item);
  }
  return out;
}

WaicReport waic_blocked(const PosteriorSamples& samples, const VoteMatrix& data) {
  check_fingerprint(samples, data);
  if (samples.draws.empty()) {
    throw insufficient_samples_error("waic_blocked: no stored draws");
  }
  WaicReport report;
  report.per_unit.resize(data.rows());
  std::vector<double> draws_ll(samples.draws.size());
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    for (std::size_t s = 0; s < samples.draws.size(); ++s) {
      draws_ll[s] = block_loglik(samples, data, samples.draws[s], true,
                                 static_cast<int>(i));
    }
    report.per_unit[i] = blocked_score(draws_ll);
    report.total += report.per_unit[i];
  }
  return report;
}

std::vector<double> waic_per_vote(const PosteriorSamples& samples,
                                  const VoteMatrix& data) {
  check_fingerprint(samples, data);
  if (samples.draws.empty()) {
    throw insufficient_samples_error("waic_per_vote: no stored draws");
  }
  std::vector<double> scores(data.cols());
  std::vector<double> draws_ll(samples.draws.size());
  for (Eigen::Index j = 0; j < data.cols(); ++j) {
    for (std::size_t s = 0; s < samples.draws.size(); ++s) {
      draws_ll[s] = block_loglik(samples, data, samples.draws[s], false,
                                 static_cast<int>(j));
    }
    scores[j] = blocked_score(draws_ll);
  }
  return scores;
}

Eigen::VectorXd midranks(const Eigen::VectorXd& values) {
  const Eigen::Index n = values.size();
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return values(a) < values(b); });
  Eigen::VectorXd ranks(n);
  Eigen::Index pos = 0;
  while (pos < n) {
    Eigen::Index end = pos;
    while (end + 1 < n && values(order[end + 1]) == values(order[pos])) ++end;
    const double shared = 0.5 * static_cast<double>(pos + end) + 1.0;
    for (Eigen::Index k = pos; k <= end; ++k) ranks(order[k]) = shared;
    pos = end + 1;
  }
  return ranks;
}

double spearman(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw undefined_correlation_error("spearman: need two equal-length vectors, n >= 2");
  }
  const Eigen::VectorXd ra = midranks(a);
  const Eigen::VectorXd rb = midranks(b);
  const Eigen::VectorXd ca = ra.array() - ra.mean();
  const Eigen::VectorXd cb = rb.array() - rb.mean();
  const double denom = std::sqrt(ca.squaredNorm() * cb.squaredNorm());
  if (denom == 0.0) {
    throw undefined_correlation_error("spearman: constant ranking has no correlation");
  }
  return ca.dot(cb) / denom;
}

RankSummary rank_summary(const PosteriorSamples& samples) {
  const int I = samples.num_legislators();
  const int S = static_cast<int>(samples.draws.size());
  RankSummary out;
  out.rank_draws.resize(S, I);
  Eigen::VectorXd stat(I);
  for (int s = 0; s < S; ++s) {
    for (int i = 0; i < I; ++i) stat(i) = samples.beta_statistic(samples.draws[s], i);
    out.rank_draws.row(s) = midranks(stat).transpose();
  }
  out.median_rank.resize(I);
  std::vector<double> column(S);
  for (int i = 0; i < I; ++i) {
    for (int s = 0; s < S; ++s) column[s] = out.rank_draws(s, i);
    out.median_rank[i] = quantile_interp(column, 0.5);
  }
  return out;
}

Eigen::MatrixXd rank_draws_for_term(const PosteriorSamples& samples, int term) {
  const int I = samples.num_legislators();
  const int S = static_cast<int>(samples.draws.size());
  std::vector<int> members;
  for (int i = 0; i < I; ++i) {
    if (samples.kind == ModelKind::Static ||
        (samples.tenure[i][0] <= term && term <= samples.tenure[i][1])) {
      members.push_back(i);
    }
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Constant(S, I, kNaN);
  Eigen::VectorXd stat(static_cast<Eigen::Index>(members.size()));
  for (int s = 0; s < S; ++s) {
    for (std::size_t k = 0; k < members.size(); ++k) {
      stat(static_cast<Eigen::Index>(k)) =
          samples.beta_at(samples.draws[s], members[k], term);
    }
    const Eigen::VectorXd ranks = midranks(stat);
    for (std::size_t k = 0; k < members.size(); ++k) {
      out(s, members[k]) = ranks(static_cast<Eigen::Index>(k));
    }
  }
  return out;
}

namespace {

double spread(const std::vector<double>& v, DispersionMetric metric) {
  switch (metric) {
    case DispersionMetric::Range: {
      const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
      return *hi - *lo;
    }
    case DispersionMetric::Sd: {
      const double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
      double ss = 0.0;
      for (const double x : v) ss += (x - mean) * (x - mean);
      return std::sqrt(ss / (v.size() - 1));
    }
    case DispersionMetric::Iqr: {
      std::vector<double> copy = v;
      return quantile_interp(copy, 0.75) - quantile_interp(std::move(copy), 0.25);
    }
  }
  return kNaN;
}

}  // namespace

DispersionResult dispersion_ratio(const PosteriorSamples& samples,
                                  const std::vector<int>& group_a,
                                  const std::vector<int>& group_b,
                                  DispersionMetric metric) {
  if (group_a.size() < 2 || group_b.size() < 2) {
    throw invalid_parameter_error("dispersion_ratio: groups need >= 2 members");
  }
  DispersionResult out;
  std::vector<double> va(group_a.size()), vb(group_b.size());
  for (const auto& d : samples.draws) {
    for (std::size_t k = 0; k < group_a.size(); ++k) {
      va[k] = samples.beta_statistic(d, group_a[k]);
    }
    for (std::size_t k = 0; k < group_b.size(); ++k) {
      vb[k] = samples.beta_statistic(d, group_b[k]);
    }
    const double denom = spread(vb, metric);
    if (denom == 0.0) {
      ++out.excluded_draws;
      continue;
    }
    out.ratio_draws.push_back(spread(va, metric) / denom);
  }
  if (!out.ratio_draws.empty()) {
    out.posterior_mean =
        std::accumulate(out.ratio_draws.begin(), out.ratio_draws.end(), 0.0) /
        static_cast<double>(out.ratio_draws.size());
  }
  return out;
}

double gelman_rubin(const std::vector<Eigen::VectorXd>& chains) {
  if (chains.size() < 2) {
    throw insufficient_chains_error("gelman_rubin: need at least 2 chains");
  }
  const Eigen::Index n = chains.front().size();
  if (n < 10) throw insufficient_chains_error("gelman_rubin: chains shorter than 10");
  for (const auto& c : chains) {
    if (c.size() != n) {
      throw insufficient_chains_error("gelman_rubin: chains must have equal length");
    }
  }
  const double m = static_cast<double>(chains.size());
  double W = 0.0;
  Eigen::VectorXd means(chains.size());
  for (std::size_t k = 0; k < chains.size(); ++k) {
    means(static_cast<Eigen::Index>(k)) = chains[k].mean();
    W += (chains[k].array() - chains[k].mean()).square().sum() /
         static_cast<double>(n - 1);
  }
  W /= m;
  const double grand = means.mean();
  const double B =
      static_cast<double>(n) * (means.array() - grand).square().sum() / (m - 1.0);
  if (W == 0.0) return B == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  const double nn = static_cast<double>(n);
  return std::sqrt((W * (nn - 1.0) / nn + B / nn) / W);
}

ResponseCurve response_curve(const PosteriorSamples& samples, const std::string& vote,
                             const Eigen::VectorXd& grid) {
  int j = -1;
  for (int k = 0; k < samples.num_votes(); ++k) {
    if (samples.vote_ids[k] == vote) j = k;
  }
  if (j < 0) throw not_found_error("response_curve: unknown vote '" + vote + "'");
  for (Eigen::Index g = 1; g < grid.size(); ++g) {
    if (!(grid(g) >= grid(g - 1))) {
      throw invalid_parameter_error("response_curve: grid must be sorted ascending");
    }
  }
  if (samples.draws.empty()) {
    throw insufficient_samples_error("response_curve: no stored draws");
  }

  ResponseCurve out;
  out.grid = grid;
  out.mean.resize(grid.size());
  out.lower.resize(grid.size());
  out.upper.resize(grid.size());
  std::vector<double> theta(samples.draws.size());
  for (Eigen::Index g = 0; g < grid.size(); ++g) {
    double sum = 0.0;
    for (std::size_t s = 0; s < samples.draws.size(); ++s) {
      theta[s] = response_probability(grid(g), samples.draws[s].items[j]);
      sum += theta[s];
    }
    out.mean(g) = sum / static_cast<double>(theta.size());
    std::vector<double> copy = theta;
    out.lower(g) = quantile_interp(copy, 0.025);
    out.upper(g) = quantile_interp(std::move(copy), 0.975);
  }
  return out;
}

double quantile_interp(std::vector<double> values, double q) {
  if (values.empty()) throw invalid_parameter_error("quantile_interp: empty sample");
  std::sort(values.begin(), values.end());
  const double h = q * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= values.size()) return values.back();
  const double w = h - static_cast<double>(lo);
  return values[lo] * (1.0 - w) + values[lo + 1] * w;
}

}  // namespace unfold
