#include "semshift/align.hpp"

#include <string>

#include "semshift/errors.hpp"

namespace semshift {

AlignmentTransform procrustes(const EmbeddingMatrix& a, const EmbeddingMatrix& b) {
  if (a.w.rows() != b.w.rows() || a.w.cols() != b.w.cols()) {
    throw DimensionMismatch("procrustes: embedding shapes differ");
  }
  const Eigen::MatrixXd m = a.w.transpose() * b.w;
  if (m.cwiseAbs().maxCoeff() == 0.0) {
    throw DegenerateInput("procrustes: A^T B is zero, alignment undefined");
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {a.slice_id, b.slice_id, svd.matrixU() * svd.matrixV().transpose()};
}

AlignedSequence align_sequence(std::span<const EmbeddingMatrix> embeddings) {
  if (embeddings.empty()) throw DataError("align_sequence needs at least one embedding");
  AlignedSequence out;
  const EmbeddingMatrix& reference = embeddings.back();
  for (std::size_t t = 0; t + 1 < embeddings.size(); ++t) {
    AlignmentTransform tr;
    try {
      tr = procrustes(embeddings[t], reference);
    } catch (const DegenerateInput& e) {
      throw DegenerateInput("slice " + std::to_string(t) + ": " + e.what());
    }
    EmbeddingMatrix aligned = embeddings[t];
    aligned.w = embeddings[t].w * tr.r;
    aligned.provenance = Provenance::aligned;
    out.embeddings.push_back(std::move(aligned));
    out.transforms.push_back(std::move(tr));
  }
  EmbeddingMatrix last = reference;
  last.provenance = Provenance::aligned;
  out.embeddings.push_back(std::move(last));
  return out;
}

}  // namespace semshift
