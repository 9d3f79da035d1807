#include "semshift/merge.hpp"

#include "semshift/errors.hpp"

namespace semshift {

MergeResult adaptive_merge(std::span<const SliceCooc> slices, double tau, double alpha) {
  if (slices.empty()) throw DataError("adaptive_merge needs at least one slice");
  if (!(tau > 0.0 && tau < 1.0)) throw ConfigError("merge threshold tau must lie in (0, 1)");

  MergeResult out;
  out.plan.tau = tau;
  std::vector<SliceCooc> groups(slices.begin(), slices.end());
  std::vector<NormalizedCooc> norm;
  norm.reserve(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    groups[g].first_slice = groups[g].last_slice = g;
    norm.push_back(smooth_and_normalize(groups[g], alpha));
  }
  // sims[g] = similarity between group g and g + 1.
  std::vector<double> sims;
  for (std::size_t g = 0; g + 1 < groups.size(); ++g) {
    sims.push_back(matrix_similarity(norm[g], norm[g + 1]));
  }

  for (std::size_t iteration = 0;; ++iteration) {
    std::size_t best = sims.size();
    for (std::size_t g = 0; g < sims.size(); ++g) {
      if (sims[g] >= tau && (best == sims.size() || sims[g] > sims[best])) best = g;
    }
    if (best == sims.size()) break;

    out.plan.trace.push_back({best, best + 1, sims[best], iteration});
    groups[best] = add_counts(groups[best], groups[best + 1]);
    groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(best) + 1);
    norm[best] = smooth_and_normalize(groups[best], alpha);
    norm.erase(norm.begin() + static_cast<std::ptrdiff_t>(best) + 1);
    sims.erase(sims.begin() + static_cast<std::ptrdiff_t>(best));
    if (best > 0) sims[best - 1] = matrix_similarity(norm[best - 1], norm[best]);
    if (best < sims.size()) sims[best] = matrix_similarity(norm[best], norm[best + 1]);
  }

  for (std::size_t g = 0; g < groups.size(); ++g) {
    groups[g].slice_id = g;
    out.plan.groups.emplace_back(groups[g].first_slice, groups[g].last_slice);
  }
  out.merged = std::move(groups);
  return out;
}

}  // namespace semshift
