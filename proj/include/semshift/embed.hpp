#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "semshift/cooccur.hpp"
#include "semshift/sym_matrix.hpp"

namespace semshift {

enum class Provenance { static_init, dynamic_update, aligned, imported };

std::string to_string(Provenance p);

struct EmbeddingMatrix {
  std::size_t slice_id = 0;
  Eigen::MatrixXd w;  // |V| x d
  Provenance provenance = Provenance::static_init;

  std::size_t rows() const { return static_cast<std::size_t>(w.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(w.cols()); }
};

struct TrainConfig {
  std::size_t d = 100;
  double lambda1 = 0.1;   // temporal anchor
  double lambda2 = 0.01;  // global stability
  double gamma = 0.9;     // forgetting factor in (0, 1]
  double learning_rate = 1e-3;
  std::size_t max_iters = 500;
  double grad_tol = 1e-5;
  std::uint64_t seed = 0;

  // Throws ConfigError on out-of-range fields.
  void validate() const;
};

// Elementwise mean of normalized matrices, same background+sparse layout.
struct MeanCooc {
  SymBackgroundMatrix matrix;
  std::size_t slices = 0;
};

MeanCooc mean_cooc(std::span<const NormalizedCooc> coocs);

// Rank-d symmetric factorization seed: columns u_k * sqrt(max(l_k, 0)) for
// the d algebraically largest eigenpairs.
EmbeddingMatrix static_init(const SymBackgroundMatrix& target, std::size_t d, std::uint64_t seed,
                            std::size_t slice_id = 0);
EmbeddingMatrix static_init(const NormalizedCooc& cooc, std::size_t d, std::uint64_t seed);

// Decayed previous embedding gamma * W_prev, the anchor of the temporal term.
Eigen::MatrixXd decayed_anchor(const Eigen::MatrixXd& prev, double gamma);

struct ObjectiveTerms {
  double reconstruction = 0.0;  // |X - W W^T|_F^2
  double anchor = 0.0;          // |W - gamma W_prev|_F^2, unweighted
  double global = 0.0;          // |W W^T - Xbar|_F^2, unweighted
  double total = 0.0;
};

// Objective pieces evaluated without forming any n x n matrix. `prev` absent
// drops the anchor term.
ObjectiveTerms objective_terms(const Eigen::MatrixXd& w, const SymBackgroundMatrix& target,
                               const Eigen::MatrixXd* prev, const SymBackgroundMatrix& mean,
                               const TrainConfig& cfg);

double objective(const Eigen::MatrixXd& w, const NormalizedCooc& cooc,
                 const EmbeddingMatrix* prev, const MeanCooc& mean, const TrainConfig& cfg);

// -4 (X - W W^T) W + 2 l1 (W - gamma W_prev) + 4 l2 (W W^T - Xbar) W
Eigen::MatrixXd gradient(const Eigen::MatrixXd& w, const SymBackgroundMatrix& target,
                         const Eigen::MatrixXd* prev, const SymBackgroundMatrix& mean,
                         const TrainConfig& cfg);

Eigen::MatrixXd gradient(const Eigen::MatrixXd& w, const NormalizedCooc& cooc,
                         const EmbeddingMatrix* prev, const MeanCooc& mean, const TrainConfig& cfg);

enum class StopReason { gradient_tol, max_iters, stalled };

struct TrainResult {
  EmbeddingMatrix embedding;
  std::vector<double> objective_trace;  // initial value, then one per accepted step
  std::size_t iterations = 0;
  StopReason stop = StopReason::max_iters;
};

// Full-batch gradient descent from `init`. Each iteration starts at the base
// learning rate and halves it until the objective does not increase.
TrainResult train_slice(const SymBackgroundMatrix& target, const EmbeddingMatrix* prev,
                        const SymBackgroundMatrix& mean, const EmbeddingMatrix& init,
                        const TrainConfig& cfg);
TrainResult train_slice(const NormalizedCooc& cooc, const EmbeddingMatrix* prev,
                        const MeanCooc& mean, const EmbeddingMatrix& init, const TrainConfig& cfg);

// Forward recurrence over merged slices: slice 0 starts from static_init with
// no anchor, slice t starts from and is anchored to slice t - 1.
std::vector<TrainResult> train_sequence(std::span<const NormalizedCooc> coocs,
                                        const TrainConfig& cfg);

}  // namespace semshift
