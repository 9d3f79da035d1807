#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "semshift/embed.hpp"

namespace semshift {

struct AlignmentTransform {
  std::size_t source = 0;
  std::size_t target = 0;
  Eigen::MatrixXd r;  // d x d orthogonal
};

// Orthogonal R minimizing |A R - B|_F: R = U V^T from the SVD U S V^T = A^T B.
AlignmentTransform procrustes(const EmbeddingMatrix& a, const EmbeddingMatrix& b);

struct AlignedSequence {
  std::vector<EmbeddingMatrix> embeddings;
  std::vector<AlignmentTransform> transforms;  // one per earlier slice
};

// Rotates every earlier slice directly onto the last one; the last slice is
// the reference and stays unchanged.
AlignedSequence align_sequence(std::span<const EmbeddingMatrix> embeddings);

}  // namespace semshift
