#include "semshift/pipeline.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "semshift/align.hpp"
#include "semshift/cooccur.hpp"
#include "semshift/errors.hpp"
#include "semshift/io.hpp"
#include "semshift/merge.hpp"
#include "semshift/shift.hpp"
#include "semshift/synth.hpp"

namespace semshift {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(s);
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T v{};
  if constexpr (std::is_floating_point_v<T>) {
    char* end = nullptr;
    v = std::strtod(value.c_str(), &end);
    if (value.empty() || *end != '\0') throw ConfigError("bad number for " + key + ": " + value);
  } else {
    auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || p != value.data() + value.size()) {
      throw ConfigError("bad integer for " + key + ": " + value);
    }
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ConfigError("bad boolean for " + key + ": " + value);
}

std::string indexed(const std::string& stem, std::size_t k, const std::string& ext) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "_%03zu", k);
  return stem + buf + ext;
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << content;
  if (!out) throw DataError("failed writing " + path.string());
}

template <typename Fn>
void write_with(const fs::path& path, Fn&& fn) {
  std::ostringstream ss;
  fn(ss);
  write_file(path, ss.str());
}

std::ifstream open_input(const fs::path& path, const std::string& stage) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("missing " + path.string() + " (run the " + stage + " stage first)");
  return in;
}

json load_json(const fs::path& path, const std::string& stage) {
  auto in = open_input(path, stage);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DataError("malformed " + path.string() + ": " + e.what());
  }
}

Vocabulary load_vocabulary(const PipelineConfig& cfg) {
  auto in = open_input(cfg.out / "vocab.txt", "slices");
  return io::read_vocabulary(in);
}

std::vector<std::string> group_labels(const PipelineConfig& cfg) {
  json plan = load_json(cfg.out / "merge" / "plan.json", "merge");
  std::vector<std::string> labels;
  for (const auto& g : plan.at("groups")) {
    labels.push_back(std::to_string(g.at(0).get<std::size_t>()) + "-" +
                     std::to_string(g.at(1).get<std::size_t>()));
  }
  return labels;
}

std::vector<EmbeddingMatrix> load_embeddings(const fs::path& dir, std::size_t groups,
                                             const Vocabulary& vocab, const std::string& stage) {
  std::vector<EmbeddingMatrix> out;
  for (std::size_t g = 0; g < groups; ++g) {
    auto in = open_input(dir / indexed("group", g, ".emb"), stage);
    EmbeddingMatrix e = io::import_embedding(in, vocab, g);
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace

void PipelineConfig::set(const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  if (key == "corpus") corpus = value;
  else if (key == "corpus_format") {
    if (value != "auto" && value != "ndjson" && value != "dir") {
      throw ConfigError("corpus_format must be auto, ndjson or dir");
    }
    corpus_format = value;
  }
  else if (key == "start") start = parse_number<Timestamp>(key, value);
  else if (key == "end") end = parse_number<Timestamp>(key, value);
  else if (key == "slice_width") slice_width = parse_number<Timestamp>(key, value);
  else if (key == "slice_bounds") {
    slice_bounds.clear();
    for (const auto& b : split(value, ',')) slice_bounds.push_back(parse_number<Timestamp>(key, b));
  }
  else if (key == "lowercase") tokenizer.lowercase = parse_bool(key, value);
  else if (key == "keep_hyphens") tokenizer.keep_hyphens = parse_bool(key, value);
  else if (key == "use_stop_words") tokenizer.use_stop_words = parse_bool(key, value);
  else if (key == "stop_words") {
    for (const auto& w : split(value, ',')) tokenizer.stop_words.insert(w);
  }
  else if (key == "stop_words_file") stop_words_file = value;
  else if (key == "min_count") min_count = parse_number<std::uint64_t>(key, value);
  else if (key == "max_vocab") max_vocab = parse_number<std::size_t>(key, value);
  else if (key == "window") window = parse_number<std::size_t>(key, value);
  else if (key == "alpha") alpha = parse_number<double>(key, value);
  else if (key == "merge") merge = parse_bool(key, value);
  else if (key == "tau") tau = parse_number<double>(key, value);
  else if (key == "d") train.d = parse_number<std::size_t>(key, value);
  else if (key == "lambda1") train.lambda1 = parse_number<double>(key, value);
  else if (key == "lambda2") train.lambda2 = parse_number<double>(key, value);
  else if (key == "gamma") train.gamma = parse_number<double>(key, value);
  else if (key == "learning_rate") train.learning_rate = parse_number<double>(key, value);
  else if (key == "max_iters") train.max_iters = parse_number<std::size_t>(key, value);
  else if (key == "grad_tol") train.grad_tol = parse_number<double>(key, value);
  else if (key == "seed") train.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "entities") entities = value;
  else if (key == "pairs") {
    pairs.clear();
    for (const auto& p : split(value, ',')) {
      auto colon = p.find(':');
      if (colon == std::string::npos || colon == 0 || colon + 1 == p.size()) {
        throw ConfigError("pairs must look like a:b,c:d");
      }
      pairs.emplace_back(trim(p.substr(0, colon)), trim(p.substr(colon + 1)));
    }
  }
  else if (key == "top_k") top_k = parse_number<std::size_t>(key, value);
  else if (key == "min_freq") min_freq = parse_number<std::uint64_t>(key, value);
  else if (key == "out") out = value;
  else if (key == "verbose") verbose = parse_bool(key, value);
  else throw ConfigError("unknown config key: " + key);
}

PipelineConfig PipelineConfig::parse(std::istream& in) {
  PipelineConfig cfg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    cfg.set(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return cfg;
}

PipelineConfig PipelineConfig::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  return parse(in);
}

void PipelineConfig::validate() const {
  if (window < 1) throw ConfigError("window must be at least 1");
  if (!(alpha > 0.0)) throw InvalidAlpha(alpha);
  if (!(tau > 0.0 && tau < 1.0)) throw ConfigError("tau must lie in (0, 1)");
  if (min_count < 1) throw ConfigError("min_count must be at least 1");
  if (top_k < 1) throw ConfigError("top_k must be at least 1");
  if (slice_width <= 0) throw ConfigError("slice_width must be positive");
  train.validate();
}

OutputLock::OutputLock(const fs::path& dir) : path_(dir / ".semshift.lock") {
  fs::create_directories(dir);
  int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
  if (fd < 0) {
    throw ConfigError("output directory " + dir.string() + " is locked by another run (" +
                      path_.string() + ")");
  }
  ::close(fd);
}

OutputLock::~OutputLock() {
  std::error_code ec;
  fs::remove(path_, ec);
}

void run_slices(const PipelineConfig& cfg, std::ostream& log) {
  cfg.validate();
  TokenizerConfig tok = cfg.tokenizer;
  if (!cfg.stop_words_file.empty()) {
    std::ifstream in(cfg.stop_words_file);
    if (!in) throw ConfigError("cannot open stop word list " + cfg.stop_words_file.string());
    std::string w;
    while (in >> w) tok.stop_words.insert(w);
  }

  SlicedCorpus corpus;
  const bool dir_mode = cfg.corpus_format == "dir" ||
                        (cfg.corpus_format == "auto" && fs::is_directory(cfg.corpus));
  if (dir_mode) {
    auto per_slice = io::read_slice_directory(cfg.corpus);
    for (std::size_t t = 0; t < per_slice.size(); ++t) {
      corpus.slices.push_back({static_cast<Timestamp>(t), static_cast<Timestamp>(t + 1), t});
    }
    corpus.docs = std::move(per_slice);
  } else {
    if (cfg.corpus.empty()) throw ConfigError("no corpus configured");
    auto docs = io::read_ndjson(cfg.corpus);
    std::vector<SliceSpec> spec;
    if (!cfg.slice_bounds.empty()) {
      spec = slices_from_bounds(cfg.slice_bounds);
    } else if (!docs.empty() || (cfg.start && cfg.end)) {
      Timestamp lo = std::numeric_limits<Timestamp>::max(), hi = std::numeric_limits<Timestamp>::min();
      for (const auto& d : docs) {
        lo = std::min(lo, d.timestamp);
        hi = std::max(hi, d.timestamp + 1);
      }
      spec = make_slices(cfg.start.value_or(lo), cfg.end.value_or(hi), cfg.slice_width);
    }
    corpus = slice_corpus(docs, spec);
  }

  auto tokenized = tokenize_corpus(corpus, tok);
  Vocabulary vocab = build_vocabulary(tokenized, cfg.min_count, cfg.max_vocab);
  if (cfg.verbose) log << "vocabulary: " << vocab.size() << " words\n";

  write_with(cfg.out / "vocab.txt", [&](std::ostream& o) { io::write_vocabulary(o, vocab); });
  json slices = json::array();
  for (std::size_t t = 0; t < corpus.slices.size(); ++t) {
    SliceCooc cooc = count_cooccurrences(tokenized[t], vocab, cfg.window, t);
    const std::string file = indexed("slice", t, ".cooc");
    write_with(cfg.out / "slices" / file, [&](std::ostream& o) { io::write_cooc(o, cooc, cfg.alpha); });
    slices.push_back({{"index", t},
                      {"start", corpus.slices[t].start},
                      {"end", corpus.slices[t].end},
                      {"docs", corpus.docs[t].size()},
                      {"tokens", cooc.total_tokens},
                      {"nnz", cooc.entries.size()},
                      {"file", file}});
    if (cfg.verbose) {
      log << "slice " << t << ": " << corpus.docs[t].size() << " docs, " << cooc.entries.size()
          << " pairs\n";
    }
  }
  json manifest = {{"vocab_size", vocab.size()},
                   {"window", cfg.window},
                   {"alpha", cfg.alpha},
                   {"documents", corpus.total()},
                   {"slices", slices}};
  write_file(cfg.out / "slices" / "manifest.json", manifest.dump(2) + "\n");
}

void run_merge(const PipelineConfig& cfg, std::ostream& log) {
  cfg.validate();
  json manifest = load_json(cfg.out / "slices" / "manifest.json", "slices");
  std::vector<SliceCooc> slices;
  for (const auto& s : manifest.at("slices")) {
    auto in = open_input(cfg.out / "slices" / s.at("file").get<std::string>(), "slices");
    io::CoocFile f = io::read_cooc(in);
    f.cooc.slice_id = s.at("index").get<std::size_t>();
    f.cooc.window = manifest.at("window").get<std::size_t>();
    f.cooc.total_tokens = s.at("tokens").get<std::uint64_t>();
    f.cooc.first_slice = f.cooc.last_slice = f.cooc.slice_id;
    slices.push_back(std::move(f.cooc));
  }
  if (slices.empty()) throw DataError("no slices to merge");

  MergeResult result;
  if (cfg.merge) {
    result = adaptive_merge(slices, cfg.tau, cfg.alpha);
  } else {
    result.plan.tau = cfg.tau;
    for (std::size_t t = 0; t < slices.size(); ++t) {
      result.plan.groups.emplace_back(t, t);
      slices[t].slice_id = t;
    }
    result.merged = std::move(slices);
  }
  if (cfg.verbose) {
    log << "merge: " << manifest.at("slices").size() << " slices -> " << result.plan.groups.size()
        << " groups\n";
  }
  write_file(cfg.out / "merge" / "plan.json", io::merge_plan_json(result.plan));
  for (std::size_t g = 0; g < result.merged.size(); ++g) {
    write_with(cfg.out / "merge" / indexed("group", g, ".cooc"),
               [&](std::ostream& o) { io::write_cooc(o, result.merged[g], cfg.alpha); });
  }
}

void run_train(const PipelineConfig& cfg, std::ostream& log) {
  cfg.validate();
  Vocabulary vocab = load_vocabulary(cfg);
  if (cfg.train.d > vocab.size()) {
    throw ConfigError("embedding dimension d = " + std::to_string(cfg.train.d) +
                      " exceeds the vocabulary size " + std::to_string(vocab.size()));
  }
  const std::size_t groups = group_labels(cfg).size();
  std::vector<NormalizedCooc> coocs;
  for (std::size_t g = 0; g < groups; ++g) {
    auto in = open_input(cfg.out / "merge" / indexed("group", g, ".cooc"), "merge");
    io::CoocFile f = io::read_cooc(in);
    if (f.cooc.dim != vocab.size()) throw DimensionMismatch("merged matrix does not match vocabulary");
    f.cooc.slice_id = g;
    coocs.push_back(smooth_and_normalize(f.cooc, f.alpha));
  }
  auto results = train_sequence(coocs, cfg.train);
  json summary = json::array();
  for (std::size_t g = 0; g < results.size(); ++g) {
    const auto& r = results[g];
    write_with(cfg.out / "embed" / indexed("group", g, ".emb"),
               [&](std::ostream& o) { io::write_embedding(o, vocab.words(), r.embedding.w); });
    const char* stop = r.stop == StopReason::gradient_tol ? "gradient_tol"
                       : r.stop == StopReason::stalled    ? "stalled"
                                                          : "max_iters";
    summary.push_back({{"group", g},
                       {"iterations", r.iterations},
                       {"initial_objective", r.objective_trace.front()},
                       {"final_objective", r.objective_trace.back()},
                       {"stop", stop}});
    if (cfg.verbose) {
      log << "group " << g << ": " << r.iterations << " iterations, objective "
          << r.objective_trace.front() << " -> " << r.objective_trace.back() << "\n";
    }
  }
  write_file(cfg.out / "embed" / "train.json", summary.dump(2) + "\n");
}

void run_align(const PipelineConfig& cfg, std::ostream& log) {
  cfg.validate();
  Vocabulary vocab = load_vocabulary(cfg);
  const std::size_t groups = group_labels(cfg).size();
  auto embeddings = load_embeddings(cfg.out / "embed", groups, vocab, "train");
  AlignedSequence aligned = align_sequence(embeddings);
  for (std::size_t g = 0; g < aligned.embeddings.size(); ++g) {
    write_with(cfg.out / "align" / indexed("group", g, ".emb"), [&](std::ostream& o) {
      io::write_embedding(o, vocab.words(), aligned.embeddings[g].w);
    });
  }
  for (std::size_t g = 0; g < aligned.transforms.size(); ++g) {
    write_with(cfg.out / "align" / indexed("transform", g, ".txt"),
               [&](std::ostream& o) { io::write_transform(o, aligned.transforms[g]); });
  }
  if (cfg.verbose) log << "aligned " << groups << " embeddings to group " << groups - 1 << "\n";
}

void run_report(const PipelineConfig& cfg, std::ostream& log) {
  cfg.validate();
  Vocabulary vocab = load_vocabulary(cfg);
  const auto labels = group_labels(cfg);
  auto aligned = load_embeddings(cfg.out / "align", labels.size(), vocab, "align");
  const fs::path dir = cfg.out / "report";

  ShiftReport report = shift_report(vocab, aligned, labels);
  write_with(dir / "shift.csv", [&](std::ostream& o) { io::write_shift_csv(o, report); });
  auto top = top_shifted(vocab, aligned, cfg.top_k, cfg.min_freq);
  write_with(dir / "top_shifted.csv", [&](std::ostream& o) { io::write_ranking_csv(o, top); });
  if (cfg.verbose) {
    for (const auto& s : top) log << "shift " << s.word << " " << s.score << "\n";
  }

  for (const auto& [a, b] : cfg.pairs) {
    PairSeries series = pair_series(a, b, vocab, aligned);
    write_with(dir / "pairs" / (a + "__" + b + ".csv"),
               [&](std::ostream& o) { io::write_pair_csv(o, series, labels); });
  }

  if (!cfg.entities.empty()) {
    std::ifstream in(cfg.entities);
    if (!in) throw ConfigError("cannot open entity list " + cfg.entities.string());
    std::vector<std::string> nodes;
    std::string line;
    while (std::getline(in, line)) {
      line = trim(line);
      if (!line.empty()) nodes.push_back(line);
    }
    AssociationNetwork net = association_network(nodes, vocab, aligned);
    json slices = json::array();
    for (std::size_t g = 0; g < net.weights.size(); ++g) {
      const std::string file = indexed("slice", g, ".csv");
      write_with(dir / "network" / file,
                 [&](std::ostream& o) { io::write_network_csv(o, net.nodes, net.weights[g]); });
      slices.push_back({{"index", g}, {"label", labels[g]}, {"file", file}});
    }
    json manifest = {{"nodes", net.nodes}, {"slices", slices}};
    write_file(dir / "network" / "manifest.json", manifest.dump(2) + "\n");
  }
}

void run_all(const PipelineConfig& cfg, std::ostream& log) {
  run_slices(cfg, log);
  run_merge(cfg, log);
  run_train(cfg, log);
  run_align(cfg, log);
  run_report(cfg, log);
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"semshift: dynamic word embeddings and semantic shift detection over time-sliced corpora"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
  bool verbose = false;
  app.add_option("--config", config_path, "key = value config file");
  app.add_option("--seed", seed, "top-level random seed");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--set", overrides, "override a config key (key=value), repeatable");
  app.add_flag("--verbose,-v", verbose, "progress on stderr");

  std::vector<std::pair<CLI::App*, void (*)(const PipelineConfig&, std::ostream&)>> stages = {
      {app.add_subcommand("slices", "tokenize, slice and count co-occurrences"), &run_slices},
      {app.add_subcommand("merge", "adaptively merge similar adjacent slices"), &run_merge},
      {app.add_subcommand("train", "train dynamic embeddings per merged slice"), &run_train},
      {app.add_subcommand("align", "Procrustes-align embeddings to the last slice"), &run_align},
      {app.add_subcommand("report", "shift scores, pair series, association networks"), &run_report},
      {app.add_subcommand("run", "all stages in order"), &run_all},
  };

  DriftScenario scenario;
  std::string kind = "pivot";
  auto* synth = app.add_subcommand("synth", "generate a synthetic corpus with planted shifts");
  synth->add_option("--kind", kind, "pivot | gradual-drift | association-strengthen | stable-only");
  synth->add_option("--vocab-size", scenario.vocab_size);
  synth->add_option("--slices", scenario.slices);
  synth->add_option("--docs", scenario.docs_per_slice, "documents per slice");
  synth->add_option("--doc-len", scenario.doc_len);
  synth->add_option("--clusters", scenario.clusters);
  synth->add_option("--pivots", scenario.pivot_count);
  synth->add_option("--pivot-rate", scenario.pivot_rate);
  synth->add_option("--assoc-start", scenario.assoc_start);
  synth->add_option("--assoc-end", scenario.assoc_end);
  synth->add_option("--start", scenario.start);
  synth->add_option("--slice-width", scenario.slice_width);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "semshift: " << e.what() << "\n";
    return 2;
  }

  try {
    PipelineConfig cfg;
    if (!config_path.empty()) cfg = PipelineConfig::load(config_path);
    for (const auto& o : overrides) {
      auto eq = o.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got " + o);
      cfg.set(trim(o.substr(0, eq)), o.substr(eq + 1));
    }
    if (seed) cfg.train.seed = *seed;
    if (!out_dir.empty()) cfg.out = out_dir;
    if (verbose) cfg.verbose = true;

    if (synth->parsed()) {
      scenario.kind = parse_scenario_kind(kind);
      scenario.seed = cfg.train.seed;
      OutputLock lock(cfg.out);
      SynthCorpus corpus = generate(scenario);
      write_with(cfg.out / "corpus.ndjson", [&](std::ostream& o) { io::write_ndjson(o, corpus.docs); });
      write_file(cfg.out / "truth.json", io::ground_truth_json(corpus.truth));
      if (cfg.verbose) err << "wrote " << corpus.docs.size() << " documents\n";
      return 0;
    }
    for (const auto& [sub, fn] : stages) {
      if (!sub->parsed()) continue;
      OutputLock lock(cfg.out);
      fn(cfg, err);
    }
    return 0;
  } catch (const ConvergenceFailure& e) {
    err << "semshift: convergence failure: " << e.what() << "\n";
    return 4;
  } catch (const ConfigError& e) {
    err << "semshift: config error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    err << "semshift: data error: " << e.what() << "\n";
    return 3;
  } catch (const fs::filesystem_error& e) {
    err << "semshift: data error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace semshift
