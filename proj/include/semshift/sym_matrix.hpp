#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace semshift {

struct SymEntry {
  std::uint32_t i = 0;
  std::uint32_t j = 0;  // i <= j
  double value = 0.0;
};

// Dense symmetric n x n matrix stored as a constant background plus an
// upper-triangular list of explicit entries. Entry (i, j) is the stored value
// when present, the background otherwise. All operations honor those dense
// semantics without materializing n^2 values.
class SymBackgroundMatrix {
 public:
  SymBackgroundMatrix() = default;
  // Entries are sorted by (i, j); (j, i) pairs with j > i are flipped.
  // Duplicate coordinates are rejected.
  SymBackgroundMatrix(std::size_t dim, double background, std::vector<SymEntry> entries);

  std::size_t dim() const { return dim_; }
  double background() const { return background_; }
  std::span<const SymEntry> entries() const { return entries_; }
  std::size_t nnz() const { return entries_.size(); }

  double at(std::size_t i, std::size_t j) const;

  // A * w for an n x k block.
  Eigen::MatrixXd multiply(const Eigen::MatrixXd& w) const;
  Eigen::VectorXd multiply(const Eigen::VectorXd& v) const;

  double frobenius_sq() const;
  // Sum over all n^2 positions of (A_ij - background).
  double deviation_sum() const;
  // <A, B> over all n^2 positions.
  double inner(const SymBackgroundMatrix& other) const;
  // <A, W W^T> over all n^2 positions.
  double inner_gram(const Eigen::MatrixXd& w) const;

  Eigen::MatrixXd to_dense() const;

 private:
  std::size_t dim_ = 0;
  double background_ = 0.0;
  std::vector<SymEntry> entries_;
};

}  // namespace semshift
