#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "semshift/corpus.hpp"
#include "semshift/embed.hpp"

namespace semshift {

// Flat "key = value" configuration shared by every pipeline stage.
struct PipelineConfig {
  std::filesystem::path corpus;
  std::string corpus_format = "auto";  // auto | ndjson | dir
  std::optional<Timestamp> start;      // default: earliest document
  std::optional<Timestamp> end;        // default: latest document + 1
  Timestamp slice_width = 86400;
  std::vector<Timestamp> slice_bounds;  // overrides start/end/width when set

  TokenizerConfig tokenizer;
  std::filesystem::path stop_words_file;

  std::uint64_t min_count = 5;
  std::size_t max_vocab = 0;
  std::size_t window = 5;
  double alpha = 1.0;
  bool merge = true;
  double tau = 0.95;
  TrainConfig train;

  std::filesystem::path entities;  // one word per line
  std::vector<std::pair<std::string, std::string>> pairs;
  std::size_t top_k = 20;
  std::uint64_t min_freq = 20;

  std::filesystem::path out = "semshift_out";
  bool verbose = false;

  // Throws ConfigError for unknown keys or malformed values.
  void set(const std::string& key, const std::string& value);
  static PipelineConfig parse(std::istream& in);
  static PipelineConfig load(const std::filesystem::path& path);
  void validate() const;
};

enum class Stage { slices, merge, train, align, report };

// Stages read their inputs from, and write their outputs to, config.out.
void run_slices(const PipelineConfig& cfg, std::ostream& log);
void run_merge(const PipelineConfig& cfg, std::ostream& log);
void run_train(const PipelineConfig& cfg, std::ostream& log);
void run_align(const PipelineConfig& cfg, std::ostream& log);
void run_report(const PipelineConfig& cfg, std::ostream& log);
void run_all(const PipelineConfig& cfg, std::ostream& log);

// Exclusive lock on an output directory for the lifetime of the object.
class OutputLock {
 public:
  explicit OutputLock(const std::filesystem::path& dir);
  ~OutputLock();
  OutputLock(const OutputLock&) = delete;
  OutputLock& operator=(const OutputLock&) = delete;

 private:
  std::filesystem::path path_;
};

// Entry point of the command-line tool; returns the process exit code
// (0 success, 2 config error, 3 data error, 4 convergence failure).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace semshift
