#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace semshift {

using Timestamp = std::int64_t;
using Tokens = std::vector<std::string>;

struct Document {
  Timestamp timestamp = 0;
  std::string text;
};

// Half-open interval [start, end) of one time slice.
struct SliceSpec {
  Timestamp start = 0;
  Timestamp end = 0;
  std::size_t index = 0;

  bool contains(Timestamp t) const { return t >= start && t < end; }
};

// Contiguous slices of `width` seconds covering [start, end). The last slice
// is truncated at `end`.
std::vector<SliceSpec> make_slices(Timestamp start, Timestamp end, Timestamp width);

// Slices between consecutive boundaries; boundaries must be strictly increasing.
std::vector<SliceSpec> slices_from_bounds(std::span<const Timestamp> bounds);

struct TokenizerConfig {
  bool lowercase = true;
  bool keep_hyphens = true;  // "covid-19" stays one token
  bool use_stop_words = false;
  std::unordered_set<std::string> stop_words;
};

// Lowercases, splits on whitespace, strips leading/trailing ASCII punctuation.
// Bytes >= 0x80 are treated as word characters.
Tokens tokenize(std::string_view text, const TokenizerConfig& config = {});

struct SlicedCorpus {
  std::vector<SliceSpec> slices;
  std::vector<std::vector<Document>> docs;  // docs[t] belongs to slices[t]

  std::vector<std::size_t> counts() const;
  std::size_t total() const;
};

// Assigns each document to the slice whose half-open interval contains its
// timestamp. Throws OutOfSpan for documents no slice covers.
SlicedCorpus slice_corpus(std::span<const Document> docs, std::span<const SliceSpec> spec);

// One tokenized slice: a list of token sequences, one per document.
using TokenizedSlice = std::vector<Tokens>;

std::vector<TokenizedSlice> tokenize_corpus(const SlicedCorpus& corpus,
                                            const TokenizerConfig& config = {});

class Vocabulary {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  Vocabulary() = default;
  // `words` must be unique; counts parallel to words.
  Vocabulary(std::vector<std::string> words, std::vector<std::uint64_t> counts,
             std::uint64_t min_count);

  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }
  const std::vector<std::string>& words() const { return words_; }
  const std::string& word(std::size_t id) const { return words_.at(id); }
  std::uint64_t count(std::size_t id) const { return counts_.at(id); }
  const std::vector<std::uint64_t>& counts() const { return counts_; }
  std::uint64_t min_count() const { return min_count_; }

  // npos when absent.
  std::size_t find(std::string_view word) const;
  bool contains(std::string_view word) const { return find(word) != npos; }
  // Throws UnknownWord when absent.
  std::size_t id(std::string_view word) const;

  bool operator==(const Vocabulary& other) const {
    return words_ == other.words_ && counts_ == other.counts_ && min_count_ == other.min_count_;
  }

 private:
  std::vector<std::string> words_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t min_count_ = 1;
  std::unordered_map<std::string, std::size_t> index_;
};

// Union vocabulary over all slices: tokens with total frequency >= min_count,
// ordered by descending frequency then lexicographically, truncated to
// max_size (0 = unlimited). Throws EmptyVocabulary when nothing qualifies.
Vocabulary build_vocabulary(std::span<const TokenizedSlice> slices, std::uint64_t min_count,
                            std::size_t max_size = 0);

}  // namespace semshift
