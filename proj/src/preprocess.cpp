#include "unfold/preprocess.hpp"

#include <algorithm>
#include <map>

#include "unfold/errors.hpp"

namespace unfold {

namespace {

VoteMatrix take(const VoteMatrix& m, const std::vector<Eigen::Index>& rows,
                const std::vector<Eigen::Index>& cols) {
  VoteMatrix out;
  out.legislators.reserve(rows.size());
  out.votes.reserve(cols.size());
  for (const auto i : rows) out.legislators.push_back(m.legislators[i]);
  for (const auto j : cols) out.votes.push_back(m.votes[j]);
  out.cells.resize(static_cast<Eigen::Index>(rows.size()),
                   static_cast<Eigen::Index>(cols.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      out.cells(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          m.cells(rows[r], cols[c]);
    }
  }
  return out;
}

}  // namespace

VoteMatrix preprocess(const VoteMatrix& m, double absence_threshold,
                      bool drop_unanimous) {
  if (!(absence_threshold >= 0.0 && absence_threshold <= 1.0)) {
    throw invalid_parameter_error("preprocess: absence_threshold must be in [0,1]");
  }
  m.validate();
  VoteMatrix cur = m;
  for (;;) {
    // Absence fractions are taken over the columns present at the start of
    // the pass, before any unanimity dropping.
    std::vector<Eigen::Index> keep_rows;
    for (Eigen::Index i = 0; i < cur.rows(); ++i) {
      Eigen::Index missing = 0;
      for (Eigen::Index j = 0; j < cur.cols(); ++j) {
        if (!cur.observed(i, j)) ++missing;
      }
      const double frac =
          cur.cols() == 0 ? 1.0 : static_cast<double>(missing) / cur.cols();
      const bool all_missing = missing == cur.cols();
      if (frac <= absence_threshold && !all_missing) keep_rows.push_back(i);
    }

    std::vector<Eigen::Index> all_cols(cur.cols());
    for (Eigen::Index j = 0; j < cur.cols(); ++j) all_cols[j] = j;
    VoteMatrix rows_filtered = take(cur, keep_rows, all_cols);

    std::vector<Eigen::Index> keep_cols;
    for (Eigen::Index j = 0; j < rows_filtered.cols(); ++j) {
      Eigen::Index yeas = 0, nays = 0;
      for (Eigen::Index i = 0; i < rows_filtered.rows(); ++i) {
        if (rows_filtered.at(i, j) == Vote::Yea) ++yeas;
        if (rows_filtered.at(i, j) == Vote::Nay) ++nays;
      }
      const bool unanimous = yeas == 0 || nays == 0;
      if (!(drop_unanimous && unanimous)) keep_cols.push_back(j);
    }
    std::vector<Eigen::Index> all_rows(rows_filtered.rows());
    for (Eigen::Index i = 0; i < rows_filtered.rows(); ++i) all_rows[i] = i;
    VoteMatrix next = take(rows_filtered, all_rows, keep_cols);

    if (next.rows() == 0 || next.cols() == 0) {
      throw empty_data_error("preprocess: no legislators or votes survive filtering");
    }
    const bool stable = next.rows() == cur.rows() && next.cols() == cur.cols();
    cur = std::move(next);
    if (stable) return cur;
  }
}

DynamicVoteData align_terms(const VoteMatrix& m) {
  m.validate();
  if (!m.has_terms()) {
    throw validation_error("align_terms: every vote needs a term label");
  }

  std::map<int, int> reindex;  // original label -> 1..T, in label order
  for (const auto& v : m.votes) reindex[*v.term] = 0;
  int next = 1;
  for (auto& [label, idx] : reindex) idx = next++;

  DynamicVoteData out;
  out.base = m;
  out.num_terms = static_cast<int>(reindex.size());
  for (auto& v : out.base.votes) v.term = reindex.at(*v.term);

  out.tenure.resize(m.legislators.size());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    int lo = 0, hi = 0;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (!m.observed(i, j)) continue;
      const int t = *out.base.votes[j].term;
      if (lo == 0 || t < lo) lo = t;
      if (hi == 0 || t > hi) hi = t;
    }
    if (lo == 0) {
      throw validation_error("align_terms: legislator '" + m.legislators[i].id +
                             "' has no observed votes; preprocess first");
    }
    out.tenure[i] = {lo, hi};
  }
  return out;
}

}  // namespace unfold
