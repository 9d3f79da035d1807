#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "semshift/sym_matrix.hpp"

namespace semshift {

struct EigenResult {
  Eigen::VectorXd values;   // descending
  Eigen::MatrixXd vectors;  // columns, unit norm
  std::size_t steps = 0;    // Lanczos steps taken
};

struct LanczosOptions {
  // Relative residual target |A u - l u| <= tol * |A|_F.
  double tol = 1e-12;
  // Krylov dimension budget; 0 means the matrix dimension (always enough).
  std::size_t max_steps = 0;
  std::uint64_t seed = 0;
};

// Algebraically largest `count` eigenpairs of a symmetric background+sparse
// matrix by Lanczos with full reorthogonalization. Invariant subspaces are
// continued from fresh random vectors. Each eigenvector's largest-magnitude
// entry is made positive. Throws ConvergenceFailure when the step budget runs
// out first.
EigenResult top_eigenpairs(const SymBackgroundMatrix& a, std::size_t count,
                           const LanczosOptions& options = {});

}  // namespace semshift
