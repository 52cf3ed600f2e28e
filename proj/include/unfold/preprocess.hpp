#pragma once

#include <array>
#include <vector>

#include "unfold/vote_matrix.hpp"

namespace unfold {

// Filtering rules applied before fitting: drop legislators absent for more
// than `absence_threshold` of the votes, then drop unanimous votes.  The two
// passes repeat until stable so the result is a fixed point.
VoteMatrix preprocess(const VoteMatrix& m, double absence_threshold = 0.4,
                      bool drop_unanimous = true);

// Per-term organization for the dynamic model.
struct DynamicVoteData {
  VoteMatrix base;                            // terms reindexed 1..T
  std::vector<std::array<int, 2>> tenure;     // per legislator [t_first, t_last]
  int num_terms = 0;

  int tenure_length(std::size_t i) const { return tenure[i][1] - tenure[i][0] + 1; }
  int term_of_vote(std::size_t j) const { return *base.votes[j].term; }
};

// Reindexes term labels to 1..T and derives each legislator's tenure as the
// smallest contiguous window covering their observed cells.  Fully absent
// terms inside the window stay in it; the AR(1) prior bridges the gap.
DynamicVoteData align_terms(const VoteMatrix& m);

}  // namespace unfold
