#include "semshift/shift.hpp"

#include <algorithm>
#include <cmath>

#include "semshift/errors.hpp"

namespace semshift {

double cosine(const Eigen::Ref<const Eigen::RowVectorXd>& a,
              const Eigen::Ref<const Eigen::RowVectorXd>& b) {
  // Plain loops: identical rows give exactly 1, negated rows exactly -1.
  double dot = 0.0, aa = 0.0, bb = 0.0;
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    dot += a[k] * b[k];
    aa += a[k] * a[k];
    bb += b[k] * b[k];
  }
  if (aa == 0.0 || bb == 0.0) return 0.0;
  return std::clamp(dot / std::sqrt(aa * bb), -1.0, 1.0);
}

namespace {

void check_embeddings(const Vocabulary& vocab, std::span<const EmbeddingMatrix> aligned) {
  if (aligned.empty()) throw DataError("no embeddings given");
  for (const auto& e : aligned) {
    if (e.rows() != vocab.size()) {
      throw DimensionMismatch("embedding rows do not match the vocabulary size");
    }
  }
}

WordShift trajectory_of(std::size_t id, const Vocabulary& vocab,
                        std::span<const EmbeddingMatrix> aligned) {
  const auto row = static_cast<Eigen::Index>(id);
  WordShift out;
  out.word = vocab.word(id);
  for (std::size_t t = 0; t + 1 < aligned.size(); ++t) {
    out.displacements.push_back(1.0 - cosine(aligned[t].w.row(row), aligned[t + 1].w.row(row)));
  }
  out.total_shift = 1.0 - cosine(aligned.front().w.row(row), aligned.back().w.row(row));
  return out;
}

}  // namespace

WordShift word_trajectory(std::string_view word, const Vocabulary& vocab,
                          std::span<const EmbeddingMatrix> aligned) {
  check_embeddings(vocab, aligned);
  return trajectory_of(vocab.id(word), vocab, aligned);
}

ShiftReport shift_report(const Vocabulary& vocab, std::span<const EmbeddingMatrix> aligned,
                         std::vector<std::string> slice_labels) {
  check_embeddings(vocab, aligned);
  ShiftReport out;
  out.slice_labels = std::move(slice_labels);
  out.records.reserve(vocab.size());
  for (std::size_t i = 0; i < vocab.size(); ++i) out.records.push_back(trajectory_of(i, vocab, aligned));
  return out;
}

PairSeries pair_series(std::string_view a, std::string_view b, const Vocabulary& vocab,
                       std::span<const EmbeddingMatrix> aligned) {
  check_embeddings(vocab, aligned);
  std::vector<std::string> missing;
  for (auto w : {a, b}) {
    if (!vocab.contains(w)) missing.emplace_back(w);
  }
  if (!missing.empty()) throw UnknownWord(std::move(missing));
  const auto ia = static_cast<Eigen::Index>(vocab.id(a));
  const auto ib = static_cast<Eigen::Index>(vocab.id(b));
  PairSeries out{std::string(a), std::string(b), {}};
  for (const auto& e : aligned) {
    out.cosines.push_back(ia == ib && e.w.row(ia).norm() > 0.0 ? 1.0
                                                               : cosine(e.w.row(ia), e.w.row(ib)));
  }
  return out;
}

AssociationNetwork association_network(std::span<const std::string> nodes, const Vocabulary& vocab,
                                       std::span<const EmbeddingMatrix> aligned) {
  check_embeddings(vocab, aligned);
  std::vector<std::string> missing;
  std::vector<Eigen::Index> ids;
  for (const auto& n : nodes) {
    auto id = vocab.find(n);
    if (id == Vocabulary::npos) {
      missing.push_back(n);
    } else {
      ids.push_back(static_cast<Eigen::Index>(id));
    }
  }
  if (!missing.empty()) throw UnknownWord(std::move(missing));

  AssociationNetwork out;
  out.nodes.assign(nodes.begin(), nodes.end());
  const auto m = static_cast<Eigen::Index>(ids.size());
  for (const auto& e : aligned) {
    Eigen::MatrixXd weights = Eigen::MatrixXd::Identity(m, m);
    for (Eigen::Index p = 0; p < m; ++p) {
      for (Eigen::Index q = p + 1; q < m; ++q) {
        weights(p, q) = weights(q, p) = cosine(e.w.row(ids[p]), e.w.row(ids[q]));
      }
    }
    out.weights.push_back(std::move(weights));
  }
  return out;
}

namespace {

void rank(std::vector<ScoredWord>& words, std::size_t k) {
  std::sort(words.begin(), words.end(), [](const ScoredWord& a, const ScoredWord& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.word < b.word;
  });
  if (words.size() > k) words.resize(k);
}

}  // namespace

std::vector<ScoredWord> top_shifted(const Vocabulary& vocab, std::span<const EmbeddingMatrix> aligned,
                                    std::size_t k, std::uint64_t min_freq) {
  if (k < 1) throw ConfigError("top_shifted: k must be at least 1");
  check_embeddings(vocab, aligned);
  std::vector<ScoredWord> scored;
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    if (vocab.count(i) < min_freq) continue;
    scored.push_back({vocab.word(i), trajectory_of(i, vocab, aligned).total_shift});
  }
  rank(scored, k);
  return scored;
}

std::vector<ScoredWord> neighbors(std::string_view word, std::size_t slice, const Vocabulary& vocab,
                                  std::span<const EmbeddingMatrix> aligned, std::size_t k) {
  check_embeddings(vocab, aligned);
  const std::size_t query = vocab.id(word);
  if (slice >= aligned.size()) throw DataError("slice index out of range");
  if (k == 0) return {};
  const auto& w = aligned[slice].w;
  std::vector<ScoredWord> scored;
  scored.reserve(vocab.size());
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    if (i == query) continue;
    scored.push_back({vocab.word(i), cosine(w.row(static_cast<Eigen::Index>(query)),
                                            w.row(static_cast<Eigen::Index>(i)))});
  }
  rank(scored, k);
  return scored;
}

}  // namespace semshift
