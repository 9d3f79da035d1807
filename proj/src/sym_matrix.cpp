#include "semshift/sym_matrix.hpp"

#include <algorithm>
#include <string>

#include "semshift/errors.hpp"

namespace semshift {

namespace {

bool coord_less(const SymEntry& a, const SymEntry& b) {
  return a.i != b.i ? a.i < b.i : a.j < b.j;
}

// Off-diagonal entries stand for two dense positions.
double multiplicity(const SymEntry& e) { return e.i == e.j ? 1.0 : 2.0; }

}  // namespace

SymBackgroundMatrix::SymBackgroundMatrix(std::size_t dim, double background,
                                         std::vector<SymEntry> entries)
    : dim_(dim), background_(background), entries_(std::move(entries)) {
  for (auto& e : entries_) {
    if (e.i > e.j) std::swap(e.i, e.j);
    if (e.j >= dim_) {
      throw DimensionMismatch("entry (" + std::to_string(e.i) + ", " + std::to_string(e.j) +
                              ") outside a " + std::to_string(dim_) + "-dimensional matrix");
    }
  }
  if (!std::is_sorted(entries_.begin(), entries_.end(), coord_less)) {
    std::sort(entries_.begin(), entries_.end(), coord_less);
  }
  for (std::size_t k = 1; k < entries_.size(); ++k) {
    if (!coord_less(entries_[k - 1], entries_[k])) {
      throw DataError("duplicate matrix entry");
    }
  }
}

double SymBackgroundMatrix::at(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  SymEntry key{static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), 0.0};
  auto it = std::lower_bound(entries_.begin(), entries_.end(), key, coord_less);
  if (it != entries_.end() && it->i == i && it->j == j) return it->value;
  return background_;
}

Eigen::MatrixXd SymBackgroundMatrix::multiply(const Eigen::MatrixXd& w) const {
  if (static_cast<std::size_t>(w.rows()) != dim_) {
    throw DimensionMismatch("multiply: row count does not match matrix dimension");
  }
  // background * 1 1^T W, then the symmetric sparse deviation.
  Eigen::RowVectorXd colsum = w.colwise().sum();
  Eigen::MatrixXd out = (background_ * Eigen::VectorXd::Ones(w.rows())) * colsum;
  for (const auto& e : entries_) {
    double dev = e.value - background_;
    out.row(e.i).noalias() += dev * w.row(e.j);
    if (e.i != e.j) out.row(e.j).noalias() += dev * w.row(e.i);
  }
  return out;
}

Eigen::VectorXd SymBackgroundMatrix::multiply(const Eigen::VectorXd& v) const {
  if (static_cast<std::size_t>(v.size()) != dim_) {
    throw DimensionMismatch("multiply: vector length does not match matrix dimension");
  }
  Eigen::VectorXd out = Eigen::VectorXd::Constant(v.size(), background_ * v.sum());
  for (const auto& e : entries_) {
    double dev = e.value - background_;
    out[e.i] += dev * v[e.j];
    if (e.i != e.j) out[e.j] += dev * v[e.i];
  }
  return out;
}

double SymBackgroundMatrix::frobenius_sq() const {
  double n = static_cast<double>(dim_);
  double total = background_ * background_ * n * n;
  for (const auto& e : entries_) {
    total += multiplicity(e) * (e.value * e.value - background_ * background_);
  }
  return total;
}

double SymBackgroundMatrix::deviation_sum() const {
  double total = 0.0;
  for (const auto& e : entries_) total += multiplicity(e) * (e.value - background_);
  return total;
}

double SymBackgroundMatrix::inner(const SymBackgroundMatrix& other) const {
  if (other.dim_ != dim_) throw DimensionMismatch("inner: matrix dimensions differ");
  // A = a 1 1^T + Da, B = b 1 1^T + Db:
  // <A,B> = a b n^2 + a sum(Db) + b sum(Da) + <Da, Db>
  double n = static_cast<double>(dim_);
  double a = background_, b = other.background_;
  double cross = 0.0;
  auto ia = entries_.begin();
  auto ib = other.entries_.begin();
  while (ia != entries_.end() && ib != other.entries_.end()) {
    if (coord_less(*ia, *ib)) {
      ++ia;
    } else if (coord_less(*ib, *ia)) {
      ++ib;
    } else {
      cross += multiplicity(*ia) * (ia->value - a) * (ib->value - b);
      ++ia;
      ++ib;
    }
  }
  return a * b * n * n + a * other.deviation_sum() + b * deviation_sum() + cross;
}

double SymBackgroundMatrix::inner_gram(const Eigen::MatrixXd& w) const {
  if (static_cast<std::size_t>(w.rows()) != dim_) {
    throw DimensionMismatch("inner_gram: row count does not match matrix dimension");
  }
  double total = background_ * w.colwise().sum().squaredNorm();
  for (const auto& e : entries_) {
    total += multiplicity(e) * (e.value - background_) * w.row(e.i).dot(w.row(e.j));
  }
  return total;
}

Eigen::MatrixXd SymBackgroundMatrix::to_dense() const {
  auto n = static_cast<Eigen::Index>(dim_);
  Eigen::MatrixXd out = Eigen::MatrixXd::Constant(n, n, background_);
  for (const auto& e : entries_) {
    out(e.i, e.j) = e.value;
    out(e.j, e.i) = e.value;
  }
  return out;
}

}  // namespace semshift
