// Acceptance run: one PASS/FAIL line per criterion; nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "fixtures.hpp"
#include "semshift/align.hpp"
#include "semshift/merge.hpp"
#include "semshift/pipeline.hpp"
#include "semshift/shift.hpp"

using namespace semshift;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Every objective trace produced anywhere in this run, for the descent check.
std::vector<std::vector<double>> g_traces;

void record(const std::vector<TrainResult>& results) {
  for (const auto& r : results) g_traces.push_back(r.objective_trace);
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

SliceCooc random_counts(std::mt19937_64& rng, std::uint32_t dim) {
  SliceCooc c;
  c.dim = dim;
  for (std::uint32_t i = 0; i < dim; ++i) {
    for (std::uint32_t j = i; j < dim; ++j) {
      if (rng() % 3 == 0) c.entries.push_back({i, j, 1 + rng() % 5000});
    }
  }
  return c;
}

Outcome formula_exactness() {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> alpha_dist(0.01, 5.0);
  double worst_entry = 0.0, worst_sim = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const double alpha = alpha_dist(rng);
    auto a = random_counts(rng, 30), b = random_counts(rng, 30);
    auto na = smooth_and_normalize(a, alpha), nb = smooth_and_normalize(b, alpha);
    Eigen::MatrixXd da = fixtures::dense_normalized(a, alpha), db = fixtures::dense_normalized(b, alpha);
    for (std::size_t i = 0; i < 30; ++i) {
      for (std::size_t j = 0; j < 30; ++j) {
        worst_entry = std::max(worst_entry, std::abs(na.at(i, j) - da(static_cast<Eigen::Index>(i),
                                                                      static_cast<Eigen::Index>(j))));
      }
    }
    worst_sim = std::max(worst_sim, std::abs(matrix_similarity(na, nb) - oracle::dense_cosine(da, db)));
  }
  return {worst_entry <= 1e-12 && worst_sim <= 1e-10,
          "max entry error " + fmt("%.2e", worst_entry) + ", max similarity error " + fmt("%.2e", worst_sim)};
}

Outcome gradient_correctness() {
  std::mt19937_64 rng(202);
  double worst = 0.0;
  int configs = 0;
  for (double l1 : {0.0, 0.1, 1.0}) {
    for (double l2 : {0.0, 0.1, 1.0}) {
      for (double gamma : {0.5, 1.0}) {
        ++configs;
        auto x = random_counts(rng, 10), m = random_counts(rng, 10);
        Eigen::MatrixXd xd = fixtures::dense_normalized(x, 1.0), md = fixtures::dense_normalized(m, 1.0);
        auto xs = smooth_and_normalize(x, 1.0).matrix, ms = smooth_and_normalize(m, 1.0).matrix;
        Eigen::MatrixXd w = oracle::random_matrix(10, 2, rng), prev = oracle::random_matrix(10, 2, rng);
        TrainConfig cfg;
        cfg.lambda1 = l1;
        cfg.lambda2 = l2;
        cfg.gamma = gamma;
        Eigen::MatrixXd g = gradient(w, xs, &prev, ms, cfg);
        Eigen::MatrixXd fd = oracle::central_differences(w, 1e-5, [&](const Eigen::MatrixXd& p) {
          return oracle::dense_objective(p, xd, &prev, md, l1, l2, gamma);
        });
        for (Eigen::Index k = 0; k < g.size(); ++k) {
          double denom = std::max({std::abs(g(k)), std::abs(fd(k)), 1e-6});
          worst = std::max(worst, std::abs(g(k) - fd(k)) / denom);
        }
      }
    }
  }
  // The grid has 18 points; the criterion asks for at least 12.
  return {worst < 1e-4 && configs >= 12,
          std::to_string(configs) + " configurations, max relative error " + fmt("%.2e", worst)};
}

Outcome factorization_optimality() {
  std::mt19937_64 rng(404);
  double worst_ratio = 0.0;
  int runs = 0;
  for (int d : {1, 3, 5}) {
    for (int trial = 0; trial < 3; ++trial) {
      Eigen::MatrixXd x = oracle::random_psd(15, rng);
      auto xs = fixtures::explicit_matrix(x);
      TrainConfig cfg;
      cfg.d = static_cast<std::size_t>(d);
      cfg.lambda1 = cfg.lambda2 = 0.0;
      cfg.learning_rate = 0.02;
      cfg.max_iters = 20000;
      cfg.grad_tol = 1e-8;
      EmbeddingMatrix init;
      init.w = 0.1 * oracle::random_matrix(15, d, rng);
      auto r = train_slice(xs, nullptr, xs, init, cfg);
      g_traces.push_back(r.objective_trace);
      double residual = (x - r.embedding.w * r.embedding.w.transpose()).norm();
      worst_ratio = std::max(worst_ratio, residual / oracle::optimal_rank_residual(x, d));
      ++runs;
    }
  }
  return {worst_ratio <= 1.05,
          std::to_string(runs) + " targets, worst residual / optimal = " + fmt("%.6f", worst_ratio)};
}

Outcome procrustes_recovery() {
  std::mt19937_64 rng(505);
  double worst_r = 0.0, worst_orth = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    EmbeddingMatrix a, b;
    a.w = oracle::random_matrix(40, 8, rng);
    Eigen::MatrixXd q = oracle::random_orthogonal(8, rng);
    b.w = a.w * q;
    auto t = procrustes(a, b);
    worst_r = std::max(worst_r, (t.r - q).norm());
    worst_orth = std::max(worst_orth, (t.r.transpose() * t.r - Eigen::MatrixXd::Identity(8, 8)).norm());
  }
  return {worst_r < 1e-8 && worst_orth < 1e-8,
          "max |R - Q| " + fmt("%.2e", worst_r) + ", max |R^T R - I| " + fmt("%.2e", worst_orth)};
}

Outcome alignment_isometry() {
  std::mt19937_64 rng(606);
  double worst = 0.0;
  for (int set = 0; set < 5; ++set) {
    std::vector<EmbeddingMatrix> seq(5);
    for (std::size_t t = 0; t < 5; ++t) {
      seq[t].slice_id = t;
      seq[t].w = oracle::random_matrix(100, 10, rng);
    }
    auto out = align_sequence(seq);
    for (std::size_t t = 0; t < 5; ++t) {
      const auto& before = seq[t].w;
      const auto& after = out.embeddings[t].w;
      for (Eigen::Index i = 0; i < 100; ++i) {
        for (Eigen::Index j = i + 1; j < 100; ++j) {
          worst = std::max(worst, std::abs(cosine(before.row(i), before.row(j)) -
                                           cosine(after.row(i), after.row(j))));
        }
      }
    }
  }
  return {worst <= 1e-10, "5 sets x 5 slices, max cosine change " + fmt("%.2e", worst)};
}

Outcome merge_soundness() {
  auto split = fixtures::topic_split(707, 2000);
  auto result = adaptive_merge(split.counts, 0.9, 1.0);
  const auto& groups = result.plan.groups;
  bool shape = groups.size() == 2 && groups[0] == std::pair<std::size_t, std::size_t>{0, 1} &&
               groups[1] == std::pair<std::size_t, std::size_t>{2, 2};
  double max_adjacent = -1.0;
  for (std::size_t g = 0; g + 1 < result.merged.size(); ++g) {
    max_adjacent = std::max(max_adjacent, matrix_similarity(smooth_and_normalize(result.merged[g], 1.0),
                                                            smooth_and_normalize(result.merged[g + 1], 1.0)));
  }
  bool sums = shape;
  if (shape) {
    for (std::size_t i = 0; i < split.vocab.size() && sums; ++i) {
      for (std::size_t j = i; j < split.vocab.size(); ++j) {
        if (result.merged[0].count(i, j) != split.counts[0].count(i, j) + split.counts[1].count(i, j) ||
            result.merged[1].count(i, j) != split.counts[2].count(i, j)) {
          sums = false;
          break;
        }
      }
    }
  }
  std::ostringstream detail;
  detail << "|V| = " << split.vocab.size() << ", " << groups.size() << " groups, max adjacent similarity "
         << fmt("%.4f", max_adjacent) << ", counts additive: " << (sums ? "yes" : "no");
  return {shape && max_adjacent < 0.9 && sums, detail.str()};
}

Outcome pivot_detection() {
  int top_hits = 0, ratio_hits = 0;
  const int runs = 100;
  for (int seed = 0; seed < runs; ++seed) {
    DriftScenario s;  // 6 slices, |V| = 80, 3000 docs per slice
    s.seed = static_cast<std::uint64_t>(seed);
    TrainConfig cfg;
    cfg.d = 20;
    auto run = fixtures::synth_run(s, cfg);
    record(run.trained);
    const std::string& pivot = run.corpus.truth.pivots[0].word;
    auto top = top_shifted(run.vocab, run.aligned, 1, 20);
    top_hits += !top.empty() && top[0].word == pivot;
    double pivot_shift = 0.0;
    std::vector<double> stable;
    for (const auto& rec : shift_report(run.vocab, run.aligned, {}).records) {
      if (rec.word == pivot) pivot_shift = rec.total_shift;
      else stable.push_back(rec.total_shift);
    }
    ratio_hits += pivot_shift >= 2.0 * oracle::median(stable);
  }
  return {top_hits >= 95 && ratio_hits >= 95,
          "pivot ranked first in " + std::to_string(top_hits) + "/100, shift >= 2x median in " +
              std::to_string(ratio_hits) + "/100"};
}

Outcome association_trend() {
  int hits = 0;
  double worst = 1.0;
  for (int seed = 0; seed < 20; ++seed) {
    DriftScenario s;
    s.kind = ScenarioKind::association_strengthen;
    s.seed = static_cast<std::uint64_t>(seed);
    TrainConfig cfg;
    cfg.d = 20;
    auto run = fixtures::synth_run(s, cfg);
    record(run.trained);
    const auto& [a, b] = *run.corpus.truth.pair;
    auto series = pair_series(a, b, run.vocab, run.aligned);
    std::vector<double> index;
    for (std::size_t t = 0; t < series.cosines.size(); ++t) index.push_back(static_cast<double>(t));
    double rho = oracle::spearman(series.cosines, index);
    worst = std::min(worst, rho);
    hits += rho > 0.8;
  }
  return {hits >= 18, "Spearman > 0.8 in " + std::to_string(hits) + "/20, lowest " + fmt("%.3f", worst)};
}

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    out[fs::relative(e.path(), root).string()] = {std::istreambuf_iterator<char>(in),
                                                  std::istreambuf_iterator<char>()};
  }
  return out;
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "semshift");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (code != 0) std::fprintf(stderr, "%s", err.str().c_str());
  return code;
}

Outcome determinism() {
  fs::path root = fs::temp_directory_path() / "semshift_acceptance_determinism";
  fs::remove_all(root);
  if (cli({"synth", "--out", (root / "corpus").string(), "--seed", "9", "--docs", "1000"}) != 0) {
    return {false, "synth failed"};
  }
  std::ofstream(root / "entities.txt") << "c0w00\nc1w00\npivot0\n";
  std::ofstream(root / "run.conf") << "corpus = " << (root / "corpus" / "corpus.ndjson").string()
                                   << "\nmin_count = 1\nd = 20\nmax_iters = 200\npairs = c0w00:c1w00\n"
                                   << "entities = " << (root / "entities.txt").string() << "\n";
  for (const char* out : {"a", "b"}) {
    if (cli({"run", "--config", (root / "run.conf").string(), "--seed", "4", "--out", (root / out).string()}) != 0) {
      return {false, std::string("run into ") + out + " failed"};
    }
  }
  auto a = tree(root / "a"), b = tree(root / "b");
  bool same = a == b && !a.empty();
  fs::remove_all(root);
  return {same, std::to_string(a.size()) + " files, trees " + (same ? "identical" : "differ")};
}

Outcome forgetting_identity() {
  std::mt19937_64 rng(1111);
  Eigen::MatrixXd prev = oracle::random_matrix(30, 6, rng), w = oracle::random_matrix(30, 6, rng);
  auto x = fixtures::explicit_matrix(oracle::random_psd(30, rng));
  bool exact = true;
  for (double gamma : {0.3, 0.7, 1.0}) {
    Eigen::MatrixXd anchor = decayed_anchor(prev, gamma);
    for (Eigen::Index k = 0; k < prev.size(); ++k) exact = exact && anchor(k) == gamma * prev(k);
    TrainConfig cfg;
    cfg.gamma = gamma;
    Eigen::MatrixXd expected(prev.rows(), prev.cols());
    for (Eigen::Index k = 0; k < prev.size(); ++k) expected(k) = w(k) - gamma * prev(k);
    exact = exact && objective_terms(w, x, &prev, x, cfg).anchor == expected.squaredNorm();
  }
  exact = exact && decayed_anchor(prev, 1.0) == prev;
  return {exact, "gamma in {0.3, 0.7, 1.0} exact, gamma = 1 bitwise undecayed"};
}

Outcome descent_invariant() {
  // A short sequence with every anchor and global term active, on top of the
  // runs already collected above.
  DriftScenario s;
  s.kind = ScenarioKind::gradual_drift;
  s.docs_per_slice = 1000;
  s.seed = 1;
  TrainConfig cfg;
  cfg.d = 20;
  record(fixtures::synth_run(s, cfg).trained);
  std::size_t steps = 0, violations = 0;
  for (const auto& trace : g_traces) {
    for (std::size_t k = 1; k < trace.size(); ++k, ++steps) violations += trace[k] > trace[k - 1];
  }
  return {violations == 0 && !g_traces.empty(),
          std::to_string(g_traces.size()) + " training runs, " + std::to_string(steps) + " accepted steps, " +
              std::to_string(violations) + " increases"};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;  // 0 means no runtime bound
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  // Criterion 3 reads the traces gathered by the others, so it runs last.
  std::vector<Criterion> criteria = {
      {1, "formula exactness", 1.0, formula_exactness},
      {2, "gradient correctness", 5.0, gradient_correctness},
      {4, "factorization optimality", 10.0, factorization_optimality},
      {5, "procrustes recovery", 2.0, procrustes_recovery},
      {6, "alignment isometry", 0.0, alignment_isometry},
      {7, "merge soundness", 30.0, merge_soundness},
      {8, "planted-pivot detection", 900.0, pivot_detection},
      {9, "association-strengthening trend", 300.0, association_trend},
      {10, "determinism", 0.0, determinism},
      {11, "forgetting-factor identity", 0.0, forgetting_identity},
      {3, "descent invariant", 0.0, descent_invariant},
  };
  std::map<int, std::string> lines;
  bool all = true;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = c.budget_s == 0.0 || secs < c.budget_s;
    bool pass = o.pass && in_time;
    all = all && pass;
    std::string time = fmt("%.2f s", secs);
    if (c.budget_s > 0.0) time += " (limit " + fmt("%g s", c.budget_s) + ")";
    lines[c.id] = std::string(pass ? "PASS" : "FAIL") + " criterion " + std::to_string(c.id) + " [" + c.name +
                  "]: " + o.detail + "; " + time;
  }
  for (const auto& [id, line] : lines) std::printf("%s\n", line.c_str());
  std::printf("%s\n", all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
  return all ? 0 : 1;
}
