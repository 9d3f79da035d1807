#include "semshift/corpus.hpp"

#include <algorithm>

#include "semshift/errors.hpp"

namespace semshift {

std::vector<SliceSpec> make_slices(Timestamp start, Timestamp end, Timestamp width) {
  if (width <= 0) throw ConfigError("slice width must be positive");
  if (end <= start) throw ConfigError("corpus end must be after corpus start");
  std::vector<SliceSpec> out;
  for (Timestamp lo = start; lo < end; lo += width) {
    out.push_back({lo, std::min(end, lo + width), out.size()});
  }
  return out;
}

std::vector<SliceSpec> slices_from_bounds(std::span<const Timestamp> bounds) {
  if (bounds.size() < 2) throw ConfigError("need at least two slice boundaries");
  std::vector<SliceSpec> out;
  for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
    if (bounds[k + 1] <= bounds[k]) {
      throw ConfigError("slice boundaries must be strictly increasing");
    }
    out.push_back({bounds[k], bounds[k + 1], k});
  }
  return out;
}

namespace {

bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_punct(unsigned char c) {
  return c < 0x80 && ((c >= 0x21 && c <= 0x2f) || (c >= 0x3a && c <= 0x40) ||
                      (c >= 0x5b && c <= 0x60) || (c >= 0x7b && c <= 0x7e));
}

void emit(std::string_view raw, const TokenizerConfig& config, Tokens& out) {
  std::size_t lo = 0, hi = raw.size();
  while (lo < hi && is_punct(static_cast<unsigned char>(raw[lo]))) ++lo;
  while (hi > lo && is_punct(static_cast<unsigned char>(raw[hi - 1]))) --hi;
  if (lo == hi) return;
  std::string token(raw.substr(lo, hi - lo));
  if (config.lowercase) {
    for (auto& c : token) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
  }
  if (config.use_stop_words && config.stop_words.count(token)) return;
  out.push_back(std::move(token));
}

}  // namespace

Tokens tokenize(std::string_view text, const TokenizerConfig& config) {
  Tokens out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && is_space(static_cast<unsigned char>(text[pos]))) ++pos;
    std::size_t start = pos;
    while (pos < text.size() && !is_space(static_cast<unsigned char>(text[pos]))) ++pos;
    if (start == pos) continue;
    std::string_view word = text.substr(start, pos - start);
    if (config.keep_hyphens) {
      emit(word, config, out);
    } else {
      std::size_t a = 0;
      while (a <= word.size()) {
        std::size_t b = word.find('-', a);
        if (b == std::string_view::npos) b = word.size();
        if (b > a) emit(word.substr(a, b - a), config, out);
        a = b + 1;
      }
    }
  }
  return out;
}

std::vector<std::size_t> SlicedCorpus::counts() const {
  std::vector<std::size_t> out;
  out.reserve(docs.size());
  for (const auto& d : docs) out.push_back(d.size());
  return out;
}

std::size_t SlicedCorpus::total() const {
  std::size_t n = 0;
  for (const auto& d : docs) n += d.size();
  return n;
}

SlicedCorpus slice_corpus(std::span<const Document> docs, std::span<const SliceSpec> spec) {
  SlicedCorpus out;
  out.slices.assign(spec.begin(), spec.end());
  std::sort(out.slices.begin(), out.slices.end(),
            [](const SliceSpec& a, const SliceSpec& b) { return a.start < b.start; });
  for (std::size_t k = 0; k < out.slices.size(); ++k) {
    if (out.slices[k].start >= out.slices[k].end) throw ConfigError("empty slice interval");
    if (k > 0 && out.slices[k].start < out.slices[k - 1].end) {
      throw ConfigError("slices overlap");
    }
  }
  out.docs.resize(out.slices.size());
  for (const auto& doc : docs) {
    auto it = std::upper_bound(out.slices.begin(), out.slices.end(), doc.timestamp,
                               [](Timestamp t, const SliceSpec& s) { return t < s.start; });
    if (it == out.slices.begin()) throw OutOfSpan(doc.timestamp);
    --it;
    if (!it->contains(doc.timestamp)) throw OutOfSpan(doc.timestamp);
    out.docs[static_cast<std::size_t>(it - out.slices.begin())].push_back(doc);
  }
  return out;
}

std::vector<TokenizedSlice> tokenize_corpus(const SlicedCorpus& corpus,
                                            const TokenizerConfig& config) {
  std::vector<TokenizedSlice> out(corpus.docs.size());
  for (std::size_t t = 0; t < corpus.docs.size(); ++t) {
    out[t].reserve(corpus.docs[t].size());
    for (const auto& doc : corpus.docs[t]) out[t].push_back(tokenize(doc.text, config));
  }
  return out;
}

Vocabulary::Vocabulary(std::vector<std::string> words, std::vector<std::uint64_t> counts,
                       std::uint64_t min_count)
    : words_(std::move(words)), counts_(std::move(counts)), min_count_(min_count) {
  if (counts_.size() != words_.size()) {
    throw DimensionMismatch("vocabulary words and counts differ in length");
  }
  index_.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (!index_.emplace(words_[i], i).second) {
      throw DataError("duplicate vocabulary word: " + words_[i]);
    }
  }
}

std::size_t Vocabulary::find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  return it == index_.end() ? npos : it->second;
}

std::size_t Vocabulary::id(std::string_view word) const {
  auto i = find(word);
  if (i == npos) throw UnknownWord({std::string(word)});
  return i;
}

Vocabulary build_vocabulary(std::span<const TokenizedSlice> slices, std::uint64_t min_count,
                            std::size_t max_size) {
  if (min_count < 1) throw ConfigError("min_count must be at least 1");
  std::unordered_map<std::string, std::uint64_t> freq;
  for (const auto& slice : slices) {
    for (const auto& doc : slice) {
      for (const auto& tok : doc) ++freq[tok];
    }
  }
  std::vector<std::pair<std::string, std::uint64_t>> kept;
  for (auto& [word, n] : freq) {
    if (n >= min_count) kept.emplace_back(word, n);
  }
  if (kept.empty()) throw EmptyVocabulary();
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (max_size > 0 && kept.size() > max_size) kept.resize(max_size);
  std::vector<std::string> words;
  std::vector<std::uint64_t> counts;
  words.reserve(kept.size());
  counts.reserve(kept.size());
  for (auto& [w, n] : kept) {
    words.push_back(std::move(w));
    counts.push_back(n);
  }
  return Vocabulary(std::move(words), std::move(counts), min_count);
}

}  // namespace semshift
