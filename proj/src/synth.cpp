#include "semshift/synth.hpp"

#include <cstdio>
#include <set>

#include "semshift/errors.hpp"

namespace semshift {

std::uint64_t Rng::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t Rng::index(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::index: empty range");
  const std::uint64_t limit = (~std::uint64_t{0}) - (~std::uint64_t{0}) % n;
  for (;;) {
    std::uint64_t x = next();
    if (x < limit) return x % n;
  }
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  Rng mix(seed ^ (0xd1b54a32d192ed03ULL * (stream + 1)));
  return mix.next();
}

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::pivot: return "pivot";
    case ScenarioKind::gradual_drift: return "gradual-drift";
    case ScenarioKind::association_strengthen: return "association-strengthen";
    case ScenarioKind::stable_only: return "stable-only";
  }
  return "unknown";
}

ScenarioKind parse_scenario_kind(std::string_view name) {
  for (auto k : {ScenarioKind::pivot, ScenarioKind::gradual_drift,
                 ScenarioKind::association_strengthen, ScenarioKind::stable_only}) {
    if (to_string(k) == name) return k;
  }
  throw InvalidScenario("unknown scenario kind: " + std::string(name));
}

namespace {

bool uses_pivots(ScenarioKind kind) {
  return kind == ScenarioKind::pivot || kind == ScenarioKind::gradual_drift;
}

std::vector<PivotSpec> resolved_pivots(const DriftScenario& s) {
  if (!uses_pivots(s.kind)) return {};
  if (!s.pivots.empty()) return s.pivots;
  std::vector<PivotSpec> out;
  for (std::size_t p = 0; p < s.pivot_count; ++p) {
    out.push_back({"pivot" + std::to_string(p), p % s.clusters, (p + 1) % s.clusters});
  }
  return out;
}

std::string cluster_word(std::size_t cluster, std::size_t member) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "c%zuw%02zu", cluster, member);
  return buf;
}

}  // namespace

void validate(const DriftScenario& s) {
  if (s.vocab_size == 0 || s.slices == 0 || s.docs_per_slice == 0) {
    throw InvalidScenario("vocabulary size, slice count and docs per slice must be positive");
  }
  if (s.doc_len < 2) throw InvalidScenario("documents need at least two tokens");
  if (s.clusters < 2) throw InvalidScenario("need at least two context clusters");
  if (s.slice_width <= 0) throw InvalidScenario("slice width must be positive");
  if (!(s.pivot_rate > 0.0 && s.pivot_rate <= 1.0)) {
    throw InvalidScenario("pivot_rate must lie in (0, 1]");
  }
  auto pivots = resolved_pivots(s);
  if (uses_pivots(s.kind) && pivots.empty()) throw InvalidScenario("pivot scenarios need a pivot");
  if (s.vocab_size < pivots.size() + 2 * s.clusters) {
    throw InvalidScenario("vocabulary too small for the requested clusters and pivots");
  }
  std::set<std::string> names;
  for (const auto& p : pivots) {
    if (p.before >= s.clusters || p.after >= s.clusters) {
      throw InvalidScenario("pivot " + p.word + " refers to a missing cluster");
    }
    if (p.before == p.after) {
      throw InvalidScenario("pivot " + p.word + " has overlapping before/after clusters");
    }
    if (p.word.empty() || !names.insert(p.word).second || p.word.find(' ') != std::string::npos) {
      throw InvalidScenario("pivot words must be unique single tokens");
    }
    if (p.word.size() > 1 && p.word[0] == 'c' && p.word.find('w') != std::string::npos) {
      for (std::size_t k = 0; k < s.clusters; ++k) {
        for (std::size_t m = 0; m < s.vocab_size; ++m) {
          if (p.word == cluster_word(k, m)) {
            throw InvalidScenario("pivot word " + p.word + " collides with a cluster word");
          }
        }
      }
    }
  }
  if (s.kind == ScenarioKind::association_strengthen) {
    if (!(s.assoc_start >= 0.0 && s.assoc_end <= 1.0 && s.assoc_start < s.assoc_end)) {
      throw InvalidScenario("association probabilities need 0 <= start < end <= 1");
    }
  }
}

std::vector<Tokens> sample_documents(std::span<const std::string> words, std::size_t n_docs,
                                     std::size_t doc_len, Rng& rng) {
  std::vector<Tokens> out(n_docs);
  for (auto& doc : out) {
    doc.reserve(doc_len);
    for (std::size_t p = 0; p < doc_len; ++p) doc.push_back(words[rng.index(words.size())]);
  }
  return out;
}

SynthCorpus generate(const DriftScenario& s) {
  validate(s);
  SynthCorpus out;
  GroundTruth& truth = out.truth;
  truth.kind = s.kind;
  truth.slices = s.slices;
  truth.pivots = resolved_pivots(s);

  const std::size_t regular = s.vocab_size - truth.pivots.size();
  truth.clusters.resize(s.clusters);
  for (std::size_t m = 0; m < regular; ++m) {
    const std::size_t k = m % s.clusters;
    truth.clusters[k].push_back(cluster_word(k, truth.clusters[k].size()));
  }
  switch (s.kind) {
    case ScenarioKind::pivot: truth.trend = "shift"; break;
    case ScenarioKind::gradual_drift: truth.trend = "drift"; break;
    case ScenarioKind::association_strengthen:
      truth.trend = "strengthen";
      truth.pair.emplace(truth.clusters[0][0], truth.clusters[1][0]);
      break;
    case ScenarioKind::stable_only: truth.trend = "stable"; break;
  }

  for (std::size_t t = 0; t < s.slices; ++t) {
    const Timestamp lo = s.start + static_cast<Timestamp>(t) * s.slice_width;
    out.slices.push_back({lo, lo + s.slice_width, t});
    Rng rng(derive_seed(s.seed, t));
    // Fraction of the way through the corpus, in [0, 1].
    const double progress =
        s.slices > 1 ? static_cast<double>(t) / static_cast<double>(s.slices - 1) : 0.0;
    const bool second_half = 2 * t >= s.slices;

    for (std::size_t n = 0; n < s.docs_per_slice; ++n) {
      const std::size_t topic = rng.index(s.clusters);
      const auto& words = truth.clusters[topic];
      Tokens doc;
      doc.reserve(s.doc_len);
      for (std::size_t p = 0; p < s.doc_len; ++p) doc.push_back(words[rng.index(words.size())]);

      for (const auto& pivot : truth.pivots) {
        double rate = 0.0;
        if (s.kind == ScenarioKind::pivot) {
          if (topic == (second_half ? pivot.after : pivot.before)) rate = s.pivot_rate;
        } else if (topic == pivot.before) {
          rate = s.pivot_rate * (1.0 - progress);
        } else if (topic == pivot.after) {
          rate = s.pivot_rate * progress;
        }
        if (rate > 0.0 && rng.uniform() < rate) doc[rng.index(doc.size())] = pivot.word;
      }

      if (truth.pair) {
        const double joint = s.assoc_start + (s.assoc_end - s.assoc_start) * progress;
        if (rng.uniform() < joint) {
          std::size_t a = rng.index(doc.size());
          std::size_t b = rng.index(doc.size() - 1);
          if (b >= a) ++b;
          doc[a] = truth.pair->first;
          doc[b] = truth.pair->second;
        }
      }

      std::string text;
      for (const auto& tok : doc) {
        if (!text.empty()) text += ' ';
        text += tok;
      }
      const Timestamp ts = lo + static_cast<Timestamp>(
                                    (static_cast<__int128>(n) * s.slice_width) /
                                    static_cast<__int128>(s.docs_per_slice));
      out.docs.push_back({ts, std::move(text)});
    }
  }
  return out;
}

}  // namespace semshift
