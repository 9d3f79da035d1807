#include "semshift/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "semshift/errors.hpp"

namespace semshift {

namespace {

Eigen::VectorXd random_unit(std::mt19937_64& rng, Eigen::Index n) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v[i] = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
  }
  return v / v.norm();
}

// Two passes of classical Gram-Schmidt against the first `k` basis columns.
void orthogonalize(Eigen::VectorXd& w, const Eigen::MatrixXd& basis, Eigen::Index k) {
  if (k == 0) return;
  for (int pass = 0; pass < 2; ++pass) {
    auto q = basis.leftCols(k);
    w.noalias() -= q * (q.transpose() * w);
  }
}

void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index arg = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
  }
  if (v[arg] < 0) v = -v;
}

}  // namespace

EigenResult top_eigenpairs(const SymBackgroundMatrix& a, std::size_t count,
                           const LanczosOptions& options) {
  const auto n = static_cast<Eigen::Index>(a.dim());
  if (count == 0 || static_cast<Eigen::Index>(count) > n) {
    throw DimensionMismatch("requested " + std::to_string(count) + " eigenpairs of a " +
                            std::to_string(n) + "-dimensional matrix");
  }
  const auto want = static_cast<Eigen::Index>(count);
  const Eigen::Index budget =
      options.max_steps == 0 ? n : std::min<Eigen::Index>(n, static_cast<Eigen::Index>(options.max_steps));
  const double scale = std::max(std::sqrt(std::max(a.frobenius_sq(), 0.0)), 1e-300);
  const double breakdown = 1e-13 * scale;

  std::mt19937_64 rng(options.seed);
  Eigen::MatrixXd basis(n, budget);
  std::vector<double> diag, offdiag;  // offdiag[k] couples k and k + 1
  Eigen::Index block_start = 0;

  basis.col(0) = random_unit(rng, n);
  for (Eigen::Index k = 0; k < budget; ++k) {
    Eigen::VectorXd w = a.multiply(Eigen::VectorXd(basis.col(k)));
    double alpha = basis.col(k).dot(w);
    diag.push_back(alpha);
    w -= alpha * basis.col(k);
    if (k > block_start) w -= offdiag[k - 1] * basis.col(k - 1);
    orthogonalize(w, basis, k + 1);
    double beta = w.norm();
    const Eigen::Index steps = k + 1;
    const bool exhausted = steps == n;

    const bool invariant = beta <= breakdown;
    const bool check = steps >= want && (exhausted || steps == budget || steps % 4 == 0 ||
                                         (invariant && block_start > 0));
    if (check) {
      // Ritz pairs of the tridiagonal projection; the residual of each pair
      // is beta times the last component of its Ritz vector.
      Eigen::MatrixXd t = Eigen::MatrixXd::Zero(steps, steps);
      for (Eigen::Index i = 0; i < steps; ++i) {
        t(i, i) = diag[i];
        if (i + 1 < steps) t(i, i + 1) = t(i + 1, i) = offdiag[i];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(t);
      const double res_beta = (invariant || exhausted) ? 0.0 : beta;
      const double limit = options.tol * scale;
      bool converged = true;
      for (Eigen::Index r = 0; r < want; ++r) {
        Eigen::Index c = steps - 1 - r;
        if (res_beta * std::abs(ritz.eigenvectors()(steps - 1, c)) > limit) converged = false;
      }
      // An invariant block holds every distinct eigenvalue of the space it
      // started in, but repeated eigenvalues may remain in the complement.
      // Block 0 therefore always restarts; a later invariant block ends the
      // iteration once its top value cannot displace the current top set.
      if (invariant && !exhausted) {
        if (block_start == 0) {
          converged = false;
        } else if (converged) {
          Eigen::Index len = steps - block_start;
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> last(
              t.block(block_start, block_start, len, len), Eigen::EigenvaluesOnly);
          if (last.eigenvalues()[len - 1] > ritz.eigenvalues()[steps - want] + limit) {
            converged = false;
          }
        }
      }
      if (converged) {
        EigenResult out;
        out.steps = static_cast<std::size_t>(steps);
        out.values.resize(want);
        out.vectors.resize(n, want);
        for (Eigen::Index r = 0; r < want; ++r) {
          Eigen::Index c = steps - 1 - r;
          out.values[r] = ritz.eigenvalues()[c];
          Eigen::VectorXd v = basis.leftCols(steps) * ritz.eigenvectors().col(c);
          v /= v.norm();
          fix_sign(v);
          out.vectors.col(r) = v;
        }
        return out;
      }
    }
    if (steps == budget) break;

    if (invariant) {
      // Restart in the orthogonal complement of the current basis.
      Eigen::VectorXd fresh;
      for (int attempt = 0; attempt < 8; ++attempt) {
        fresh = random_unit(rng, n);
        orthogonalize(fresh, basis, k + 1);
        if (fresh.norm() > 1e-8) break;
      }
      offdiag.push_back(0.0);
      basis.col(k + 1) = fresh / fresh.norm();
      block_start = k + 1;
    } else {
      offdiag.push_back(beta);
      basis.col(k + 1) = w / beta;
    }
  }
  throw ConvergenceFailure("eigensolver did not converge within " + std::to_string(budget) +
                           " Lanczos steps");
}

}  // namespace semshift
