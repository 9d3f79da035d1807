#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "semshift/corpus.hpp"
#include "semshift/sym_matrix.hpp"

namespace semshift {

struct CountEntry {
  std::uint32_t i = 0;
  std::uint32_t j = 0;  // i <= j
  std::uint64_t count = 0;

  bool operator==(const CountEntry&) const = default;
};

// Raw symmetric co-occurrence counts of one (possibly merged) slice, upper
// triangle only, sorted by (i, j), zero counts implicit.
struct SliceCooc {
  std::size_t slice_id = 0;
  std::size_t dim = 0;
  std::size_t window = 0;
  std::vector<CountEntry> entries;
  std::uint64_t total_tokens = 0;
  // Original slice indices covered, inclusive.
  std::size_t first_slice = 0;
  std::size_t last_slice = 0;

  std::uint64_t count(std::size_t i, std::size_t j) const;
  std::uint64_t total_pairs() const;
};

// Every pair of token positions at distance <= window in the same document
// whose tokens are both in the vocabulary adds 1 to the unordered pair count.
// Out-of-vocabulary tokens still occupy positions.
SliceCooc count_cooccurrences(std::span<const Tokens> docs, const Vocabulary& vocab,
                              std::size_t window, std::size_t slice_id = 0);

// Elementwise sum of raw counts; windows never cross documents, so this equals
// counting over the union of the member slices.
SliceCooc add_counts(const SliceCooc& a, const SliceCooc& b);

// Dense semantics log(1 + X_ij + alpha); unobserved pairs share the
// background log(1 + alpha).
struct NormalizedCooc {
  std::size_t slice_id = 0;
  double alpha = 1.0;
  SymBackgroundMatrix matrix;

  std::size_t dim() const { return matrix.dim(); }
  double at(std::size_t i, std::size_t j) const { return matrix.at(i, j); }
};

NormalizedCooc smooth_and_normalize(const SliceCooc& raw, double alpha);

// Cosine similarity of the vectorized matrices, in (0, 1].
double matrix_similarity(const NormalizedCooc& a, const NormalizedCooc& b);

}  // namespace semshift
