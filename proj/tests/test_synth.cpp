#include <doctest.h>

#include <map>
#include <set>

#include "fixtures.hpp"
#include "semshift/errors.hpp"
#include "semshift/io.hpp"

using namespace semshift;

namespace {

struct Counted {
  Vocabulary vocab;
  std::vector<SliceCooc> counts;
};

Counted count(const SynthCorpus& c, std::size_t window = 5) {
  auto tokens = tokenize_corpus(slice_corpus(c.docs, c.slices));
  Counted out{build_vocabulary(tokens, 1), {}};
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    out.counts.push_back(count_cooccurrences(tokens[t], out.vocab, window, t));
  }
  return out;
}

// Context distribution of word `w` in one slice: its co-occurrence row,
// normalized to sum 1.
std::vector<double> context(const SliceCooc& c, std::size_t w) {
  std::vector<double> row(c.dim);
  double sum = 0.0;
  for (std::size_t j = 0; j < c.dim; ++j) sum += row[j] = static_cast<double>(c.count(w, j));
  for (double& x : row) x /= sum;
  return row;
}

}  // namespace

TEST_CASE("rng is deterministic and index is in range") {
  Rng a(42), b(42);
  for (int k = 0; k < 100; ++k) CHECK(a.next() == b.next());
  Rng r(7);
  std::vector<int> hist(7);
  for (int k = 0; k < 70000; ++k) {
    auto i = r.index(7);
    REQUIRE(i < 7);
    ++hist[i];
  }
  for (int h : hist) CHECK(std::abs(h - 10000) < 500);
  for (int k = 0; k < 1000; ++k) {
    double u = r.uniform();
    CHECK((u >= 0.0 && u < 1.0));
  }
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}

TEST_CASE("scenario kinds round-trip through their names") {
  for (auto k : {ScenarioKind::pivot, ScenarioKind::gradual_drift, ScenarioKind::association_strengthen,
                 ScenarioKind::stable_only}) {
    CHECK(parse_scenario_kind(to_string(k)) == k);
  }
  CHECK_THROWS_AS(parse_scenario_kind("chaos"), InvalidScenario);
}

TEST_CASE("contradictory scenarios are rejected") {
  DriftScenario s;
  auto bad = [&](auto edit) {
    DriftScenario c = s;
    edit(c);
    CHECK_THROWS_AS(generate(c), InvalidScenario);
  };
  bad([](DriftScenario& c) { c.slices = 0; });
  bad([](DriftScenario& c) { c.docs_per_slice = 0; });
  bad([](DriftScenario& c) { c.vocab_size = 0; });
  bad([](DriftScenario& c) { c.doc_len = 1; });
  bad([](DriftScenario& c) { c.clusters = 1; });
  bad([](DriftScenario& c) { c.vocab_size = 8; });
  bad([](DriftScenario& c) { c.pivot_rate = 0.0; });
  bad([](DriftScenario& c) { c.pivots = {{"pivot0", 2, 2}}; });
  bad([](DriftScenario& c) { c.pivots = {{"pivot0", 0, 99}}; });
  bad([](DriftScenario& c) { c.pivots = {{"c0w00", 0, 1}}; });
  bad([](DriftScenario& c) { c.pivots = {{"two words", 0, 1}}; });
  bad([](DriftScenario& c) { c.pivots = {{"p", 0, 1}, {"p", 1, 2}}; });
  bad([](DriftScenario& c) {
    c.kind = ScenarioKind::association_strengthen;
    c.assoc_start = 0.5;
    c.assoc_end = 0.2;
  });
  CHECK_NOTHROW(validate(s));
}

TEST_CASE("generation is deterministic and seed dependent") {
  DriftScenario s;
  s.docs_per_slice = 200;
  s.seed = 17;
  auto a = generate(s), b = generate(s);
  std::ostringstream ja, jb;
  io::write_ndjson(ja, a.docs);
  io::write_ndjson(jb, b.docs);
  CHECK(ja.str() == jb.str());
  CHECK(io::ground_truth_json(a.truth) == io::ground_truth_json(b.truth));
  s.seed = 18;
  std::ostringstream jc;
  io::write_ndjson(jc, generate(s).docs);
  CHECK(jc.str() != ja.str());
}

TEST_CASE("corpus shape follows the scenario") {
  DriftScenario s;
  s.slices = 4;
  s.docs_per_slice = 250;
  s.start = 1000;
  s.slice_width = 60;
  auto c = generate(s);
  CHECK(c.docs.size() == 1000);
  REQUIRE(c.slices.size() == 4);
  CHECK(c.slices[3].start == 1180);
  CHECK(c.slices[3].end == 1240);
  auto sliced = slice_corpus(c.docs, c.slices);
  CHECK(sliced.counts() == std::vector<std::size_t>{250, 250, 250, 250});

  std::set<std::string> words;
  for (const auto& cluster : c.truth.clusters) {
    for (const auto& w : cluster) CHECK(words.insert(w).second);
  }
  CHECK(words.size() + c.truth.pivots.size() == s.vocab_size);
  for (const auto& d : c.docs) CHECK(tokenize(d.text).size() == s.doc_len);
}

TEST_CASE("stable-only context distributions match across slices") {
  DriftScenario s;
  s.kind = ScenarioKind::stable_only;
  s.slices = 2;
  s.docs_per_slice = 10000;
  s.seed = 3;
  auto c = count(generate(s));
  for (std::size_t w = 0; w < c.vocab.size(); ++w) {
    auto p = context(c.counts[0], w), q = context(c.counts[1], w);
    double tv = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) tv += std::abs(p[j] - q[j]);
    CHECK(0.5 * tv < 0.1);
  }
}

TEST_CASE("a pivot never meets its old cluster in the second half") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    DriftScenario s;
    s.docs_per_slice = 1000;
    s.seed = seed;
    auto g = generate(s);
    auto c = count(g);
    const auto& pivot = g.truth.pivots[0];
    std::size_t p = c.vocab.id(pivot.word);
    for (std::size_t t = 0; t < s.slices; ++t) {
      bool second_half = 2 * t >= s.slices;
      const auto& absent = g.truth.clusters[second_half ? pivot.before : pivot.after];
      const auto& present = g.truth.clusters[second_half ? pivot.after : pivot.before];
      std::uint64_t away = 0, home = 0;
      for (const auto& w : absent) away += c.counts[t].count(p, c.vocab.id(w));
      for (const auto& w : present) home += c.counts[t].count(p, c.vocab.id(w));
      CHECK(away == 0);
      CHECK(home > 0);
    }
  }
}

TEST_CASE("gradual drift moves the pivot's contexts steadily") {
  DriftScenario s;
  s.kind = ScenarioKind::gradual_drift;
  s.docs_per_slice = 2000;
  s.seed = 8;
  auto g = generate(s);
  auto c = count(g);
  const auto& pivot = g.truth.pivots[0];
  std::size_t p = c.vocab.id(pivot.word);
  std::vector<double> share, index;
  for (std::size_t t = 0; t < s.slices; ++t) {
    double before = 0.0, after = 0.0;
    for (const auto& w : g.truth.clusters[pivot.before]) before += c.counts[t].count(p, c.vocab.id(w));
    for (const auto& w : g.truth.clusters[pivot.after]) after += c.counts[t].count(p, c.vocab.id(w));
    share.push_back(after / (before + after));
    index.push_back(static_cast<double>(t));
  }
  CHECK(share.front() == 0.0);
  CHECK(share.back() == 1.0);
  CHECK(oracle::spearman(share, index) == doctest::Approx(1.0));
}

TEST_CASE("association pair counts rise slice over slice") {
  std::size_t increasing = 0;
  const std::size_t seeds = 20;
  for (std::uint64_t seed = 0; seed < seeds; ++seed) {
    DriftScenario s;
    s.kind = ScenarioKind::association_strengthen;
    s.docs_per_slice = 1000;
    s.seed = seed;
    auto g = generate(s);
    auto c = count(g);
    std::size_t a = c.vocab.id(g.truth.pair->first), b = c.vocab.id(g.truth.pair->second);
    bool strict = true;
    for (std::size_t t = 1; t < s.slices; ++t) strict = strict && c.counts[t].count(a, b) > c.counts[t - 1].count(a, b);
    increasing += strict;
  }
  CHECK(increasing * 10 >= seeds * 9);
}

TEST_CASE("ground truth names clusters, pivots and trend") {
  DriftScenario s;
  s.pivot_count = 2;
  s.docs_per_slice = 10;
  auto g = generate(s);
  REQUIRE(g.truth.pivots.size() == 2);
  CHECK(g.truth.pivots[1].word == "pivot1");
  CHECK(g.truth.pivots[1].before == 1);
  CHECK(g.truth.pivots[1].after == 2);
  auto json = io::ground_truth_json(g.truth);
  CHECK(json.find("\"shift\"") != std::string::npos);
  CHECK(json.find("pivot1") != std::string::npos);
}
