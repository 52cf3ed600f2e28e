#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace unfold {

enum class Vote : std::int8_t { Nay = 0, Yea = 1, Missing = -1 };

struct Legislator {
  std::string id;
  std::string party;
  bool anchor_eligible = true;
};

struct VoteInfo {
  std::string id;
  std::optional<int> term;
};

// Observed roll-call matrix: rows are legislators, columns are votes.
struct VoteMatrix {
  std::vector<Legislator> legislators;
  std::vector<VoteInfo> votes;
  Eigen::Matrix<std::int8_t, Eigen::Dynamic, Eigen::Dynamic> cells;

  Eigen::Index rows() const { return cells.rows(); }
  Eigen::Index cols() const { return cells.cols(); }

  Vote at(Eigen::Index i, Eigen::Index j) const { return static_cast<Vote>(cells(i, j)); }
  void set(Eigen::Index i, Eigen::Index j, Vote v) {
    cells(i, j) = static_cast<std::int8_t>(v);
  }
  bool observed(Eigen::Index i, Eigen::Index j) const {
    return cells(i, j) != static_cast<std::int8_t>(Vote::Missing);
  }
  bool has_terms() const;

  // Throws validation_error when ids repeat or dimensions disagree.
  void validate() const;

  int index_of_legislator(const std::string& id) const;  // -1 when absent
  int index_of_vote(const std::string& id) const;
};

// CSV grammar: header `legislator,party,<vote ids...>`, optional second row
// `term,,<t_1>,...,<t_J>`, body cells in {1, 0, NA}, no quoting.
VoteMatrix load_vote_matrix(const std::string& path);
VoteMatrix parse_vote_matrix_csv(const std::string& text);

std::string to_csv(const VoteMatrix& m);
void save_vote_matrix(const VoteMatrix& m, const std::string& path);

// FNV-1a over the canonical CSV serialization; ties sample stores to the
// exact matrix they were fit on.
std::string fingerprint(const VoteMatrix& m);

}  // namespace unfold
