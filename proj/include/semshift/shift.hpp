#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "semshift/corpus.hpp"
#include "semshift/embed.hpp"

namespace semshift {

// Cosine of two rows; 0 when either row is the zero vector. Clamped to [-1, 1].
double cosine(const Eigen::Ref<const Eigen::RowVectorXd>& a,
              const Eigen::Ref<const Eigen::RowVectorXd>& b);

struct WordShift {
  std::string word;
  std::vector<double> displacements;  // 1 - cos between slice t and t + 1
  double total_shift = 0.0;           // 1 - cos between first and last slice
};

struct ShiftReport {
  std::vector<std::string> slice_labels;
  std::vector<WordShift> records;  // vocabulary order
};

WordShift word_trajectory(std::string_view word, const Vocabulary& vocab,
                          std::span<const EmbeddingMatrix> aligned);

ShiftReport shift_report(const Vocabulary& vocab, std::span<const EmbeddingMatrix> aligned,
                         std::vector<std::string> slice_labels);

struct PairSeries {
  std::string first;
  std::string second;
  std::vector<double> cosines;  // one per slice
};

PairSeries pair_series(std::string_view a, std::string_view b, const Vocabulary& vocab,
                       std::span<const EmbeddingMatrix> aligned);

struct AssociationNetwork {
  std::vector<std::string> nodes;
  std::vector<Eigen::MatrixXd> weights;  // per slice, symmetric, unit diagonal
};

// Throws UnknownWord naming every missing node.
AssociationNetwork association_network(std::span<const std::string> nodes, const Vocabulary& vocab,
                                       std::span<const EmbeddingMatrix> aligned);

struct ScoredWord {
  std::string word;
  double score = 0.0;
};

// Words with corpus frequency >= min_freq by total shift, descending, ties
// lexicographic; at most k.
std::vector<ScoredWord> top_shifted(const Vocabulary& vocab, std::span<const EmbeddingMatrix> aligned,
                                    std::size_t k, std::uint64_t min_freq);

// The k nearest words to `word` by cosine within one slice, query excluded.
std::vector<ScoredWord> neighbors(std::string_view word, std::size_t slice, const Vocabulary& vocab,
                                  std::span<const EmbeddingMatrix> aligned, std::size_t k);

}  // namespace semshift
