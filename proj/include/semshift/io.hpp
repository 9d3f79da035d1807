#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "semshift/align.hpp"
#include "semshift/cooccur.hpp"
#include "semshift/corpus.hpp"
#include "semshift/embed.hpp"
#include "semshift/merge.hpp"
#include "semshift/shift.hpp"
#include "semshift/synth.hpp"

namespace semshift::io {

// Shortest text that round-trips the double ("%.17g").
std::string format_double(double x);

// Newline-delimited JSON, one {"ts": int, "text": string} per line. Blank
// lines are ignored; documents whose text is blank after trimming are skipped.
std::vector<Document> read_ndjson(std::istream& in);
std::vector<Document> read_ndjson(const std::filesystem::path& path);
void write_ndjson(std::ostream& out, std::span<const Document> docs);

// Timestamp-free corpus: <dir>/<index>.txt, one document per line. Returns
// one document list per slice index 0..max.
std::vector<std::vector<Document>> read_slice_directory(const std::filesystem::path& dir);

// "COOC v1 <|V|> <alpha> <nnz>" then "i j count" in ascending (i, j).
void write_cooc(std::ostream& out, const SliceCooc& cooc, double alpha);
struct CoocFile {
  SliceCooc cooc;
  double alpha = 1.0;
};
CoocFile read_cooc(std::istream& in);

// "VOCAB v1 <size> <min_count>" then "word count" per line in id order.
void write_vocabulary(std::ostream& out, const Vocabulary& vocab);
Vocabulary read_vocabulary(std::istream& in);

// "<|V|> <d>" then "word v_1 ... v_d" per row.
void write_embedding(std::ostream& out, std::span<const std::string> words, const Eigen::MatrixXd& w);
struct EmbeddingFile {
  std::vector<std::string> words;
  Eigen::MatrixXd w;
};
EmbeddingFile read_embedding(std::istream& in);
// Rows reordered to `vocab`; every vocabulary word must be present.
EmbeddingMatrix import_embedding(std::istream& in, const Vocabulary& vocab, std::size_t slice_id);

// Same layout as embeddings with the row index as label: "<d> <d>".
void write_transform(std::ostream& out, const AlignmentTransform& t);
Eigen::MatrixXd read_transform(std::istream& in);

std::string merge_plan_json(const MergePlan& plan);
MergePlan parse_merge_plan(const std::string& json);

void write_shift_csv(std::ostream& out, const ShiftReport& report);
void write_pair_csv(std::ostream& out, const PairSeries& series,
                    std::span<const std::string> slice_labels);
void write_network_csv(std::ostream& out, std::span<const std::string> nodes,
                       const Eigen::MatrixXd& weights);
void write_ranking_csv(std::ostream& out, std::span<const ScoredWord> words);

std::string ground_truth_json(const GroundTruth& truth);

}  // namespace semshift::io
