#include "semshift/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "semshift/errors.hpp"

namespace semshift::io {

using nlohmann::json;

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

bool blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

std::string next_line(std::istream& in, const char* what) {
  std::string line;
  if (!std::getline(in, line)) throw DataError(std::string("unexpected end of ") + what);
  return line;
}

double parse_double(const std::string& s, const char* what) {
  // strtod accepts everything %.17g emits, including inf/nan spellings.
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw DataError(std::string("bad number in ") + what + ": " + s);
  return v;
}

template <typename Int>
Int parse_int(const std::string& s, const char* what) {
  Int v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw DataError(std::string("bad integer in ") + what + ": " + s);
  }
  return v;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

}  // namespace

std::vector<Document> read_ndjson(std::istream& in) {
  std::vector<Document> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::exception& e) {
      throw DataError("corpus line " + std::to_string(lineno) + ": " + e.what());
    }
    if (!obj.is_object() || !obj.contains("ts") || !obj.contains("text") ||
        !obj["ts"].is_number_integer() || !obj["text"].is_string()) {
      throw DataError("corpus line " + std::to_string(lineno) +
                      ": expected {\"ts\": integer, \"text\": string}");
    }
    Document doc{obj["ts"].get<Timestamp>(), obj["text"].get<std::string>()};
    if (blank(doc.text)) continue;
    out.push_back(std::move(doc));
  }
  return out;
}

std::vector<Document> read_ndjson(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus " + path.string());
  return read_ndjson(in);
}

void write_ndjson(std::ostream& out, std::span<const Document> docs) {
  for (const auto& d : docs) {
    json obj = {{"ts", d.timestamp}, {"text", d.text}};
    out << obj.dump() << '\n';
  }
}

std::vector<std::vector<Document>> read_slice_directory(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw DataError("not a directory: " + dir.string());
  std::map<std::size_t, fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".txt") continue;
    const std::string stem = entry.path().stem().string();
    std::size_t index = 0;
    auto [p, ec] = std::from_chars(stem.data(), stem.data() + stem.size(), index);
    if (ec != std::errc() || p != stem.data() + stem.size()) continue;
    files[index] = entry.path();
  }
  if (files.empty()) throw DataError("no <index>.txt slice files in " + dir.string());
  std::vector<std::vector<Document>> out(files.rbegin()->first + 1);
  for (const auto& [index, path] : files) {
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
      if (blank(line)) continue;
      out[index].push_back({static_cast<Timestamp>(index), line});
    }
  }
  return out;
}

void write_cooc(std::ostream& out, const SliceCooc& cooc, double alpha) {
  out << "COOC v1 " << cooc.dim << ' ' << format_double(alpha) << ' ' << cooc.entries.size() << '\n';
  for (const auto& e : cooc.entries) out << e.i << ' ' << e.j << ' ' << e.count << '\n';
}

CoocFile read_cooc(std::istream& in) {
  auto header = split_ws(next_line(in, "cooc file"));
  if (header.size() != 5 || header[0] != "COOC" || header[1] != "v1") {
    throw DataError("not a COOC v1 file");
  }
  CoocFile out;
  out.cooc.dim = parse_int<std::size_t>(header[2], "cooc header");
  out.alpha = parse_double(header[3], "cooc header");
  const auto nnz = parse_int<std::size_t>(header[4], "cooc header");
  out.cooc.entries.reserve(nnz);
  for (std::size_t k = 0; k < nnz; ++k) {
    auto f = split_ws(next_line(in, "cooc file"));
    if (f.size() != 3) throw DataError("malformed cooc entry line");
    CountEntry e{parse_int<std::uint32_t>(f[0], "cooc entry"), parse_int<std::uint32_t>(f[1], "cooc entry"),
                 parse_int<std::uint64_t>(f[2], "cooc entry")};
    if (e.i > e.j || e.j >= out.cooc.dim || e.count == 0) throw DataError("invalid cooc entry");
    if (!out.cooc.entries.empty()) {
      const auto& p = out.cooc.entries.back();
      if (p.i > e.i || (p.i == e.i && p.j >= e.j)) throw DataError("cooc entries not in ascending order");
    }
    out.cooc.entries.push_back(e);
  }
  return out;
}

void write_vocabulary(std::ostream& out, const Vocabulary& vocab) {
  out << "VOCAB v1 " << vocab.size() << ' ' << vocab.min_count() << '\n';
  for (std::size_t i = 0; i < vocab.size(); ++i) out << vocab.word(i) << ' ' << vocab.count(i) << '\n';
}

Vocabulary read_vocabulary(std::istream& in) {
  auto header = split_ws(next_line(in, "vocabulary file"));
  if (header.size() != 4 || header[0] != "VOCAB" || header[1] != "v1") {
    throw DataError("not a VOCAB v1 file");
  }
  const auto n = parse_int<std::size_t>(header[2], "vocabulary header");
  const auto min_count = parse_int<std::uint64_t>(header[3], "vocabulary header");
  std::vector<std::string> words;
  std::vector<std::uint64_t> counts;
  for (std::size_t k = 0; k < n; ++k) {
    auto f = split_ws(next_line(in, "vocabulary file"));
    if (f.size() != 2) throw DataError("malformed vocabulary line");
    words.push_back(f[0]);
    counts.push_back(parse_int<std::uint64_t>(f[1], "vocabulary"));
  }
  return Vocabulary(std::move(words), std::move(counts), min_count);
}

void write_embedding(std::ostream& out, std::span<const std::string> words, const Eigen::MatrixXd& w) {
  if (static_cast<Eigen::Index>(words.size()) != w.rows()) {
    throw DimensionMismatch("embedding rows do not match the word list");
  }
  out << w.rows() << ' ' << w.cols() << '\n';
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    out << words[static_cast<std::size_t>(i)];
    for (Eigen::Index k = 0; k < w.cols(); ++k) out << ' ' << format_double(w(i, k));
    out << '\n';
  }
}

EmbeddingFile read_embedding(std::istream& in) {
  auto header = split_ws(next_line(in, "embedding file"));
  if (header.size() != 2) throw DataError("embedding header must be \"<rows> <d>\"");
  const auto rows = parse_int<Eigen::Index>(header[0], "embedding header");
  const auto d = parse_int<Eigen::Index>(header[1], "embedding header");
  EmbeddingFile out;
  out.w.resize(rows, d);
  for (Eigen::Index i = 0; i < rows; ++i) {
    auto f = split_ws(next_line(in, "embedding file"));
    if (static_cast<Eigen::Index>(f.size()) != d + 1) throw DataError("embedding row has wrong width");
    out.words.push_back(f[0]);
    for (Eigen::Index k = 0; k < d; ++k) {
      double v = parse_double(f[static_cast<std::size_t>(k) + 1], "embedding row");
      if (!std::isfinite(v)) throw DataError("non-finite embedding value for " + f[0]);
      out.w(i, k) = v;
    }
  }
  return out;
}

EmbeddingMatrix import_embedding(std::istream& in, const Vocabulary& vocab, std::size_t slice_id) {
  EmbeddingFile file = read_embedding(in);
  std::map<std::string, Eigen::Index> rows;
  for (std::size_t i = 0; i < file.words.size(); ++i) rows[file.words[i]] = static_cast<Eigen::Index>(i);
  EmbeddingMatrix out;
  out.slice_id = slice_id;
  out.provenance = Provenance::imported;
  out.w.resize(static_cast<Eigen::Index>(vocab.size()), file.w.cols());
  std::vector<std::string> missing;
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    auto it = rows.find(vocab.word(i));
    if (it == rows.end()) {
      missing.push_back(vocab.word(i));
      continue;
    }
    out.w.row(static_cast<Eigen::Index>(i)) = file.w.row(it->second);
  }
  if (!missing.empty()) throw UnknownWord(std::move(missing));
  return out;
}

void write_transform(std::ostream& out, const AlignmentTransform& t) {
  std::vector<std::string> labels;
  for (Eigen::Index i = 0; i < t.r.rows(); ++i) labels.push_back(std::to_string(i));
  write_embedding(out, labels, t.r);
}

Eigen::MatrixXd read_transform(std::istream& in) {
  EmbeddingFile f = read_embedding(in);
  if (f.w.rows() != f.w.cols()) throw DataError("transform must be square");
  return f.w;
}

std::string merge_plan_json(const MergePlan& plan) {
  json groups = json::array();
  for (const auto& [lo, hi] : plan.groups) groups.push_back({lo, hi});
  json trace = json::array();
  for (const auto& e : plan.trace) {
    trace.push_back({{"left", e.left}, {"right", e.right}, {"sim", e.similarity}, {"iter", e.iteration}});
  }
  json doc = {{"tau", plan.tau}, {"groups", groups}, {"trace", trace}};
  return doc.dump(2) + "\n";
}

MergePlan parse_merge_plan(const std::string& text) {
  MergePlan plan;
  try {
    json doc = json::parse(text);
    plan.tau = doc.at("tau").get<double>();
    for (const auto& g : doc.at("groups")) {
      plan.groups.emplace_back(g.at(0).get<std::size_t>(), g.at(1).get<std::size_t>());
    }
    for (const auto& e : doc.at("trace")) {
      plan.trace.push_back({e.at("left").get<std::size_t>(), e.at("right").get<std::size_t>(),
                            e.at("sim").get<double>(), e.at("iter").get<std::size_t>()});
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed merge plan: ") + e.what());
  }
  return plan;
}

void write_shift_csv(std::ostream& out, const ShiftReport& report) {
  out << "word,total_shift";
  for (std::size_t t = 0; t + 1 < report.slice_labels.size(); ++t) {
    out << ",disp_" << csv_field(report.slice_labels[t]) << "_" << csv_field(report.slice_labels[t + 1]);
  }
  out << '\n';
  for (const auto& r : report.records) {
    out << csv_field(r.word) << ',' << format_double(r.total_shift);
    for (double d : r.displacements) out << ',' << format_double(d);
    out << '\n';
  }
}

void write_pair_csv(std::ostream& out, const PairSeries& series,
                    std::span<const std::string> slice_labels) {
  out << "slice,label,cosine\n";
  for (std::size_t t = 0; t < series.cosines.size(); ++t) {
    out << t << ',' << csv_field(t < slice_labels.size() ? slice_labels[t] : std::to_string(t)) << ','
        << format_double(series.cosines[t]) << '\n';
  }
}

void write_network_csv(std::ostream& out, std::span<const std::string> nodes,
                       const Eigen::MatrixXd& weights) {
  out << "node";
  for (const auto& n : nodes) out << ',' << csv_field(n);
  out << '\n';
  for (Eigen::Index p = 0; p < weights.rows(); ++p) {
    out << csv_field(nodes[static_cast<std::size_t>(p)]);
    for (Eigen::Index q = 0; q < weights.cols(); ++q) out << ',' << format_double(weights(p, q));
    out << '\n';
  }
}

void write_ranking_csv(std::ostream& out, std::span<const ScoredWord> words) {
  out << "rank,word,score\n";
  for (std::size_t k = 0; k < words.size(); ++k) {
    out << k + 1 << ',' << csv_field(words[k].word) << ',' << format_double(words[k].score) << '\n';
  }
}

std::string ground_truth_json(const GroundTruth& truth) {
  json pivots = json::array();
  for (const auto& p : truth.pivots) {
    pivots.push_back({{"word", p.word},
                      {"before_cluster", p.before},
                      {"after_cluster", p.after},
                      {"before_context", truth.clusters.at(p.before)},
                      {"after_context", truth.clusters.at(p.after)}});
  }
  json doc = {{"kind", to_string(truth.kind)},
              {"slices", truth.slices},
              {"clusters", truth.clusters},
              {"pivots", pivots},
              {"trend", truth.trend}};
  if (truth.pair) {
    doc["pair"] = {truth.pair->first, truth.pair->second};
  } else {
    doc["pair"] = nullptr;
  }
  return doc.dump(2) + "\n";
}

}  // namespace semshift::io
