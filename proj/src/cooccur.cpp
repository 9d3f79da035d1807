#include "semshift/cooccur.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "semshift/errors.hpp"

namespace semshift {

std::uint64_t SliceCooc::count(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  auto it = std::lower_bound(entries.begin(), entries.end(), std::pair{i, j},
                             [](const CountEntry& e, const std::pair<std::size_t, std::size_t>& k) {
                               return e.i != k.first ? e.i < k.first : e.j < k.second;
                             });
  if (it != entries.end() && it->i == i && it->j == j) return it->count;
  return 0;
}

std::uint64_t SliceCooc::total_pairs() const {
  std::uint64_t n = 0;
  for (const auto& e : entries) n += e.count;
  return n;
}

SliceCooc count_cooccurrences(std::span<const Tokens> docs, const Vocabulary& vocab,
                              std::size_t window, std::size_t slice_id) {
  if (window < 1) throw ConfigError("co-occurrence window must be at least 1");
  SliceCooc out;
  out.slice_id = slice_id;
  out.dim = vocab.size();
  out.window = window;
  out.first_slice = out.last_slice = slice_id;

  std::unordered_map<std::uint64_t, std::uint64_t> acc;
  std::vector<std::size_t> ids;
  for (const auto& doc : docs) {
    ids.resize(doc.size());
    for (std::size_t p = 0; p < doc.size(); ++p) {
      ids[p] = vocab.find(doc[p]);
      if (ids[p] != Vocabulary::npos) ++out.total_tokens;
    }
    for (std::size_t p = 0; p < doc.size(); ++p) {
      if (ids[p] == Vocabulary::npos) continue;
      std::size_t stop = std::min(doc.size(), p + window + 1);
      for (std::size_t q = p + 1; q < stop; ++q) {
        if (ids[q] == Vocabulary::npos) continue;
        std::uint64_t i = std::min(ids[p], ids[q]);
        std::uint64_t j = std::max(ids[p], ids[q]);
        ++acc[(i << 32) | j];
      }
    }
  }
  out.entries.reserve(acc.size());
  for (const auto& [key, n] : acc) {
    out.entries.push_back({static_cast<std::uint32_t>(key >> 32),
                           static_cast<std::uint32_t>(key & 0xffffffffu), n});
  }
  std::sort(out.entries.begin(), out.entries.end(), [](const CountEntry& a, const CountEntry& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  return out;
}

SliceCooc add_counts(const SliceCooc& a, const SliceCooc& b) {
  if (a.dim != b.dim) throw DimensionMismatch("cannot add co-occurrence matrices of different size");
  SliceCooc out;
  out.slice_id = std::min(a.slice_id, b.slice_id);
  out.dim = a.dim;
  out.window = a.window;
  out.total_tokens = a.total_tokens + b.total_tokens;
  out.first_slice = std::min(a.first_slice, b.first_slice);
  out.last_slice = std::max(a.last_slice, b.last_slice);
  out.entries.reserve(a.entries.size() + b.entries.size());
  auto less = [](const CountEntry& x, const CountEntry& y) {
    return x.i != y.i ? x.i < y.i : x.j < y.j;
  };
  auto ia = a.entries.begin();
  auto ib = b.entries.begin();
  while (ia != a.entries.end() || ib != b.entries.end()) {
    if (ib == b.entries.end() || (ia != a.entries.end() && less(*ia, *ib))) {
      out.entries.push_back(*ia++);
    } else if (ia == a.entries.end() || less(*ib, *ia)) {
      out.entries.push_back(*ib++);
    } else {
      out.entries.push_back({ia->i, ia->j, ia->count + ib->count});
      ++ia;
      ++ib;
    }
  }
  return out;
}

NormalizedCooc smooth_and_normalize(const SliceCooc& raw, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidAlpha(alpha);
  std::vector<SymEntry> entries;
  entries.reserve(raw.entries.size());
  for (const auto& e : raw.entries) {
    if (e.count == 0) continue;
    entries.push_back({e.i, e.j, std::log(1.0 + static_cast<double>(e.count) + alpha)});
  }
  return {raw.slice_id, alpha,
          SymBackgroundMatrix(raw.dim, std::log(1.0 + alpha), std::move(entries))};
}

double matrix_similarity(const NormalizedCooc& a, const NormalizedCooc& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("matrix_similarity: dimensions differ");
  if (a.alpha != b.alpha) throw DimensionMismatch("matrix_similarity: smoothing constants differ");
  double ab = a.matrix.inner(b.matrix);
  double aa = a.matrix.frobenius_sq();
  double bb = b.matrix.frobenius_sq();
  return std::clamp(ab / std::sqrt(aa * bb), -1.0, 1.0);
}

}  // namespace semshift
