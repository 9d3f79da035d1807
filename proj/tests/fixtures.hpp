#pragma once

// Synthetic inputs shared by the unit and acceptance suites.

#include <string>
#include <vector>

#include "oracles.hpp"
#include "semshift/align.hpp"
#include "semshift/cooccur.hpp"
#include "semshift/corpus.hpp"
#include "semshift/embed.hpp"
#include "semshift/synth.hpp"

namespace fixtures {

// Three slices: 0 and 1 drawn from topic words P, slice 2 from the disjoint
// topic words Q. |V| = 2 * half.
struct TopicSplit {
  semshift::Vocabulary vocab;
  std::vector<semshift::TokenizedSlice> docs;
  std::vector<semshift::SliceCooc> counts;
};

inline TopicSplit topic_split(std::uint64_t seed, std::size_t docs_per_slice, std::size_t half = 30,
                              std::size_t window = 5) {
  using namespace semshift;
  std::vector<std::string> p, q;
  for (std::size_t k = 0; k < half; ++k) {
    p.push_back("p" + std::to_string(k));
    q.push_back("q" + std::to_string(k));
  }
  TopicSplit out;
  Rng rng(seed);
  out.docs.push_back(sample_documents(p, docs_per_slice, 10, rng));
  out.docs.push_back(sample_documents(p, docs_per_slice, 10, rng));
  out.docs.push_back(sample_documents(q, docs_per_slice, 10, rng));
  out.vocab = build_vocabulary(out.docs, 1);
  for (std::size_t t = 0; t < 3; ++t) {
    out.counts.push_back(count_cooccurrences(out.docs[t], out.vocab, window, t));
  }
  return out;
}

// Dense normalized matrix straight from raw counts.
inline Eigen::MatrixXd dense_normalized(const semshift::SliceCooc& c, double alpha) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(c.dim), static_cast<Eigen::Index>(c.dim));
  for (const auto& e : c.entries) m(e.i, e.j) = m(e.j, e.i) = static_cast<double>(e.count);
  return oracle::dense_normalize(m, alpha);
}

// Background+sparse matrix holding an arbitrary dense symmetric matrix
// (background 0, every entry explicit).
inline semshift::SymBackgroundMatrix explicit_matrix(const Eigen::MatrixXd& dense) {
  std::vector<semshift::SymEntry> entries;
  for (Eigen::Index i = 0; i < dense.rows(); ++i) {
    for (Eigen::Index j = i; j < dense.cols(); ++j) {
      if (dense(i, j) != 0.0) {
        entries.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), dense(i, j)});
      }
    }
  }
  return semshift::SymBackgroundMatrix(static_cast<std::size_t>(dense.rows()), 0.0, std::move(entries));
}

// Same dense values, but stored relative to the given background.
inline semshift::SymBackgroundMatrix with_background(const Eigen::MatrixXd& dense, double background) {
  std::vector<semshift::SymEntry> entries;
  for (Eigen::Index i = 0; i < dense.rows(); ++i) {
    for (Eigen::Index j = i; j < dense.cols(); ++j) {
      if (dense(i, j) != background) {
        entries.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), dense(i, j)});
      }
    }
  }
  return semshift::SymBackgroundMatrix(static_cast<std::size_t>(dense.rows()), background,
                                       std::move(entries));
}

// Generated corpus pushed through counting, training and alignment with every
// slice kept separate (no merging).
struct SynthRun {
  semshift::SynthCorpus corpus;
  semshift::Vocabulary vocab;
  std::vector<semshift::SliceCooc> counts;
  std::vector<semshift::TrainResult> trained;
  std::vector<semshift::EmbeddingMatrix> aligned;
};

inline SynthRun synth_run(const semshift::DriftScenario& scenario, const semshift::TrainConfig& cfg,
                          std::size_t window = 5, double alpha = 1.0) {
  using namespace semshift;
  SynthRun run;
  run.corpus = generate(scenario);
  auto tokens = tokenize_corpus(slice_corpus(run.corpus.docs, run.corpus.slices));
  run.vocab = build_vocabulary(tokens, 1);
  std::vector<NormalizedCooc> coocs;
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    run.counts.push_back(count_cooccurrences(tokens[t], run.vocab, window, t));
    coocs.push_back(smooth_and_normalize(run.counts.back(), alpha));
  }
  run.trained = train_sequence(coocs, cfg);
  std::vector<EmbeddingMatrix> raw;
  for (const auto& r : run.trained) raw.push_back(r.embedding);
  run.aligned = align_sequence(raw).embeddings;
  return run;
}

}  // namespace fixtures
