#include "semshift/embed.hpp"

#include <cmath>

#include "semshift/eigensolver.hpp"
#include "semshift/errors.hpp"

namespace semshift {

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::static_init: return "static-init";
    case Provenance::dynamic_update: return "dynamic-update";
    case Provenance::aligned: return "aligned";
    case Provenance::imported: return "imported";
  }
  return "unknown";
}

void TrainConfig::validate() const {
  if (d < 1) throw ConfigError("embedding dimension d must be at least 1");
  if (!(lambda1 >= 0.0) || !(lambda2 >= 0.0)) throw ConfigError("lambda1 and lambda2 must be >= 0");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("forgetting factor gamma must lie in (0, 1]");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
  if (!(grad_tol >= 0.0)) throw ConfigError("grad_tol must be >= 0");
}

MeanCooc mean_cooc(std::span<const NormalizedCooc> coocs) {
  if (coocs.empty()) throw DataError("mean_cooc needs at least one matrix");
  const std::size_t n = coocs.front().dim();
  for (const auto& c : coocs) {
    if (c.dim() != n) throw DimensionMismatch("mean_cooc: dimensions differ");
    if (c.alpha != coocs.front().alpha) throw DimensionMismatch("mean_cooc: smoothing constants differ");
  }
  const double count = static_cast<double>(coocs.size());

  double background = 0.0;
  for (const auto& c : coocs) background += c.matrix.background();
  background /= count;

  // k-way merge over the sorted entry lists; a position stored anywhere is
  // stored in the mean, with absent members contributing their background.
  std::vector<std::size_t> cursor(coocs.size(), 0);
  std::vector<SymEntry> entries;
  for (;;) {
    bool any = false;
    std::uint32_t bi = 0, bj = 0;
    for (std::size_t s = 0; s < coocs.size(); ++s) {
      auto e = coocs[s].matrix.entries();
      if (cursor[s] >= e.size()) continue;
      const auto& x = e[cursor[s]];
      if (!any || x.i < bi || (x.i == bi && x.j < bj)) {
        bi = x.i;
        bj = x.j;
        any = true;
      }
    }
    if (!any) break;
    double sum = 0.0;
    for (std::size_t s = 0; s < coocs.size(); ++s) {
      auto e = coocs[s].matrix.entries();
      if (cursor[s] < e.size() && e[cursor[s]].i == bi && e[cursor[s]].j == bj) {
        sum += e[cursor[s]].value;
        ++cursor[s];
      } else {
        sum += coocs[s].matrix.background();
      }
    }
    entries.push_back({bi, bj, sum / count});
  }
  return {SymBackgroundMatrix(n, background, std::move(entries)), coocs.size()};
}

EmbeddingMatrix static_init(const SymBackgroundMatrix& target, std::size_t d, std::uint64_t seed,
                            std::size_t slice_id) {
  if (d < 1 || d > target.dim()) {
    throw DimensionMismatch("static_init: embedding dimension must lie in [1, |V|]");
  }
  LanczosOptions opts;
  opts.seed = seed;
  EigenResult eig = top_eigenpairs(target, d, opts);
  EmbeddingMatrix out;
  out.slice_id = slice_id;
  out.provenance = Provenance::static_init;
  out.w.resize(static_cast<Eigen::Index>(target.dim()), static_cast<Eigen::Index>(d));
  for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(d); ++k) {
    out.w.col(k) = eig.vectors.col(k) * std::sqrt(std::max(eig.values[k], 0.0));
  }
  return out;
}

EmbeddingMatrix static_init(const NormalizedCooc& cooc, std::size_t d, std::uint64_t seed) {
  return static_init(cooc.matrix, d, seed, cooc.slice_id);
}

Eigen::MatrixXd decayed_anchor(const Eigen::MatrixXd& prev, double gamma) {
  if (gamma == 1.0) return prev;
  return gamma * prev;
}

namespace {

void check_shapes(const Eigen::MatrixXd& w, const SymBackgroundMatrix& target,
                  const Eigen::MatrixXd* prev, const SymBackgroundMatrix& mean) {
  if (static_cast<std::size_t>(w.rows()) != target.dim() || mean.dim() != target.dim()) {
    throw DimensionMismatch("embedding rows do not match the vocabulary size");
  }
  if (prev && (prev->rows() != w.rows() || prev->cols() != w.cols())) {
    throw DimensionMismatch("previous embedding shape differs from the current one");
  }
}

}  // namespace

ObjectiveTerms objective_terms(const Eigen::MatrixXd& w, const SymBackgroundMatrix& target,
                               const Eigen::MatrixXd* prev, const SymBackgroundMatrix& mean,
                               const TrainConfig& cfg) {
  check_shapes(w, target, prev, mean);
  // |W W^T|_F^2 = |W^T W|_F^2
  const double gram_sq = (w.transpose() * w).squaredNorm();
  ObjectiveTerms out;
  out.reconstruction = target.frobenius_sq() - 2.0 * target.inner_gram(w) + gram_sq;
  if (prev) out.anchor = (w - decayed_anchor(*prev, cfg.gamma)).squaredNorm();
  if (cfg.lambda2 != 0.0) out.global = mean.frobenius_sq() - 2.0 * mean.inner_gram(w) + gram_sq;
  out.total = out.reconstruction;
  if (prev) out.total += cfg.lambda1 * out.anchor;
  if (cfg.lambda2 != 0.0) out.total += cfg.lambda2 * out.global;
  return out;
}

double objective(const Eigen::MatrixXd& w, const NormalizedCooc& cooc,
                 const EmbeddingMatrix* prev, const MeanCooc& mean, const TrainConfig& cfg) {
  return objective_terms(w, cooc.matrix, prev ? &prev->w : nullptr, mean.matrix, cfg).total;
}

Eigen::MatrixXd gradient(const Eigen::MatrixXd& w, const SymBackgroundMatrix& target,
                         const Eigen::MatrixXd* prev, const SymBackgroundMatrix& mean,
                         const TrainConfig& cfg) {
  check_shapes(w, target, prev, mean);
  // (W W^T) W = W (W^T W)
  const Eigen::MatrixXd wg = w * (w.transpose() * w);
  Eigen::MatrixXd g = 4.0 * (wg - target.multiply(w));
  if (prev) g += 2.0 * cfg.lambda1 * (w - decayed_anchor(*prev, cfg.gamma));
  if (cfg.lambda2 != 0.0) g += 4.0 * cfg.lambda2 * (wg - mean.multiply(w));
  return g;
}

Eigen::MatrixXd gradient(const Eigen::MatrixXd& w, const NormalizedCooc& cooc,
                         const EmbeddingMatrix* prev, const MeanCooc& mean, const TrainConfig& cfg) {
  return gradient(w, cooc.matrix, prev ? &prev->w : nullptr, mean.matrix, cfg);
}

TrainResult train_slice(const SymBackgroundMatrix& target, const EmbeddingMatrix* prev,
                        const SymBackgroundMatrix& mean, const EmbeddingMatrix& init,
                        const TrainConfig& cfg) {
  cfg.validate();
  const Eigen::MatrixXd* anchor = prev ? &prev->w : nullptr;
  TrainResult out;
  Eigen::MatrixXd w = init.w;
  double f = objective_terms(w, target, anchor, mean, cfg).total;
  if (!std::isfinite(f)) throw ConvergenceFailure("objective is not finite at the initial point");
  out.objective_trace.push_back(f);

  for (std::size_t it = 0; it < cfg.max_iters; ++it) {
    Eigen::MatrixXd g = gradient(w, target, anchor, mean, cfg);
    if (g.norm() < cfg.grad_tol) {
      out.stop = StopReason::gradient_tol;
      break;
    }
    double step = cfg.learning_rate;
    bool accepted = false;
    Eigen::MatrixXd candidate;
    double fc = f;
    for (int halvings = 0; halvings < 256 && step > 0.0; ++halvings, step *= 0.5) {
      candidate = w - step * g;
      fc = objective_terms(candidate, target, anchor, mean, cfg).total;
      if (std::isfinite(fc) && fc <= f) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      throw ConvergenceFailure("line search found no non-increasing step at iteration " +
                               std::to_string(it));
    }
    if (candidate == w) {
      // The step no longer changes any entry: machine-precision stationary.
      out.stop = StopReason::stalled;
      break;
    }
    w = std::move(candidate);
    f = fc;
    out.objective_trace.push_back(f);
    ++out.iterations;
  }
  out.embedding.slice_id = init.slice_id;
  out.embedding.w = std::move(w);
  out.embedding.provenance = Provenance::dynamic_update;
  return out;
}

TrainResult train_slice(const NormalizedCooc& cooc, const EmbeddingMatrix* prev,
                        const MeanCooc& mean, const EmbeddingMatrix& init, const TrainConfig& cfg) {
  TrainResult out = train_slice(cooc.matrix, prev, mean.matrix, init, cfg);
  out.embedding.slice_id = cooc.slice_id;
  return out;
}

std::vector<TrainResult> train_sequence(std::span<const NormalizedCooc> coocs,
                                        const TrainConfig& cfg) {
  if (coocs.empty()) throw DataError("train_sequence needs at least one slice");
  cfg.validate();
  const MeanCooc mean = mean_cooc(coocs);
  std::vector<TrainResult> out;
  out.reserve(coocs.size());
  for (std::size_t t = 0; t < coocs.size(); ++t) {
    try {
      if (t == 0) {
        EmbeddingMatrix init = static_init(coocs[0], cfg.d, cfg.seed);
        out.push_back(train_slice(coocs[0], nullptr, mean, init, cfg));
      } else {
        const EmbeddingMatrix& prev = out.back().embedding;
        out.push_back(train_slice(coocs[t], &prev, mean, prev, cfg));
      }
    } catch (const ConvergenceFailure& e) {
      throw ConvergenceFailure("slice " + std::to_string(t) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace semshift
