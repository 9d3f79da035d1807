#pragma once

#include <span>
#include <utility>
#include <vector>

#include "semshift/cooccur.hpp"

namespace semshift {

struct MergeEvent {
  std::size_t left = 0;  // group index at the time of the merge; right = left + 1
  std::size_t right = 0;
  double similarity = 0.0;
  std::size_t iteration = 0;
};

struct MergePlan {
  double tau = 0.95;
  // Inclusive [first, last] original slice ranges, contiguous and ordered.
  std::vector<std::pair<std::size_t, std::size_t>> groups;
  std::vector<MergeEvent> trace;
};

struct MergeResult {
  MergePlan plan;
  std::vector<SliceCooc> merged;  // one per group, slice_id = group index
};

// Best-first adaptive merging: each pass merges the adjacent pair of groups
// with the highest similarity >= tau (earlier pair on ties) until no adjacent
// pair reaches tau.
MergeResult adaptive_merge(std::span<const SliceCooc> slices, double tau, double alpha);

}  // namespace semshift
