#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "semshift/corpus.hpp"

namespace semshift {

// splitmix64; portable so generated corpora are identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  // Uniform in [0, n) without modulo bias.
  std::uint64_t index(std::uint64_t n);
  // Uniform in [0, 1).
  double uniform();

 private:
  std::uint64_t state_;
};

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

enum class ScenarioKind { pivot, gradual_drift, association_strengthen, stable_only };

std::string to_string(ScenarioKind kind);
ScenarioKind parse_scenario_kind(std::string_view name);

struct PivotSpec {
  std::string word;
  std::size_t before = 0;  // context cluster early on
  std::size_t after = 1;   // context cluster later on
};

struct DriftScenario {
  ScenarioKind kind = ScenarioKind::pivot;
  std::size_t vocab_size = 80;
  std::size_t slices = 6;
  std::size_t docs_per_slice = 3000;
  std::size_t doc_len = 10;
  std::size_t clusters = 8;
  // Filled with `pivot_count` defaults (pivotK moving from cluster K to K+1)
  // when empty and the kind uses pivots.
  std::vector<PivotSpec> pivots;
  std::size_t pivot_count = 1;
  // Probability that a document of the pivot's current cluster contains it.
  double pivot_rate = 0.3;
  // Joint-draw probability of the designated pair, linear from start to end.
  double assoc_start = 0.02;
  double assoc_end = 0.3;
  Timestamp start = 0;
  Timestamp slice_width = 86400;
  std::uint64_t seed = 0;
};

struct GroundTruth {
  ScenarioKind kind = ScenarioKind::pivot;
  std::size_t slices = 0;
  std::vector<std::vector<std::string>> clusters;
  std::vector<PivotSpec> pivots;
  std::optional<std::pair<std::string, std::string>> pair;
  std::string trend;  // "shift", "drift", "strengthen", "stable"
};

struct SynthCorpus {
  std::vector<Document> docs;
  std::vector<SliceSpec> slices;
  GroundTruth truth;
};

// Throws InvalidScenario on contradictory parameters.
void validate(const DriftScenario& scenario);

// Bag-of-words documents, each drawn from one context cluster. Seeded and
// fully deterministic; slice t uses the stream derive_seed(seed, t).
SynthCorpus generate(const DriftScenario& scenario);

// `n_docs` documents of `doc_len` tokens drawn uniformly from `words`.
std::vector<Tokens> sample_documents(std::span<const std::string> words, std::size_t n_docs,
                                     std::size_t doc_len, Rng& rng);

}  // namespace semshift
