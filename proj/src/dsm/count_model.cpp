#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "doppelkit/dsm/count_model.hpp"
#include "doppelkit/error.hpp"

namespace doppelkit {

namespace {

constexpr std::uint32_t kNone = UINT32_MAX;

// Per-shard tallies. Merging is plain addition, so the shard layout never
// changes the result.
struct Tally {
  std::map<std::string, std::map<std::uint32_t, std::uint64_t>> rows;
  std::vector<std::uint64_t> column_sums;
  std::map<std::string, std::uint64_t> occurrences;

  void merge(const Tally& other) {
    for (const auto& [t, row] : other.rows) {
      auto& mine = rows[t];
      for (const auto& [c, n] : row) mine[c] += n;
    }
    for (std::size_t c = 0; c < column_sums.size(); ++c) column_sums[c] += other.column_sums[c];
    for (const auto& [t, n] : other.occurrences) occurrences[t] += n;
  }
};

Tally count_range(const TaggedDocument& doc, const std::vector<SentenceRange>& sentences, std::size_t first,
                  std::size_t last, const std::vector<std::uint32_t>& column_of,
                  const std::vector<bool>& is_target, std::size_t n_columns, std::size_t window) {
  Tally tally;
  tally.column_sums.assign(n_columns, 0);
  for (std::size_t s = first; s < last; ++s) {
    const SentenceRange r = sentences[s];
    for (std::size_t i = r.begin; i < r.end; ++i) {
      const std::size_t lo = i - std::min(window, i - r.begin);
      const std::size_t hi = std::min(r.end, i + window + 1);
      // Column marginal: this token is the context of every other token in
      // its window.
      if (column_of[i] != kNone) tally.column_sums[column_of[i]] += (hi - lo - 1);
      if (!is_target[i]) continue;
      const std::string& t = doc.tokens[i].surface;
      ++tally.occurrences[t];
      auto& row = tally.rows[t];
      for (std::size_t j = lo; j < hi; ++j) {
        if (j != i && column_of[j] != kNone) ++row[column_of[j]];
      }
    }
  }
  return tally;
}

}  // namespace

EmbeddingSpace build_count_space(const TaggedDocument& doc, const std::set<std::string>& targets,
                                 const CountModelConfig& cfg, PartId part) {
  if (cfg.window == 0) throw ConfigError("count model window must be at least 1");
  EmbeddingSpace space;
  space.part = part;
  space.model_id = "count";
  space.is_sparse = true;

  std::unordered_map<std::string, std::uint64_t> freq;
  for (const Token& tok : doc.tokens) {
    if (!targets.count(tok.surface)) ++freq[tok.surface];
  }
  std::vector<std::pair<std::string, std::uint64_t>> ranked(freq.begin(), freq.end());
  std::sort(ranked.begin(), ranked.end(),
            [](const auto& x, const auto& y) { return x.second != y.second ? x.second > y.second : x.first < y.first; });
  if (ranked.size() > cfg.max_context_vocab) ranked.resize(cfg.max_context_vocab);
  if (ranked.empty()) throw EmptyVocabulary();

  std::unordered_map<std::string, std::uint32_t> column_id;
  for (const auto& [word, n] : ranked) {
    column_id.emplace(word, static_cast<std::uint32_t>(space.columns.size()));
    space.columns.push_back(word);
  }
  space.dim = space.columns.size();

  std::vector<std::uint32_t> column_of(doc.tokens.size(), kNone);
  std::vector<bool> is_target(doc.tokens.size(), false);
  for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
    const auto it = column_id.find(doc.tokens[i].surface);
    if (it != column_id.end()) column_of[i] = it->second;
    is_target[i] = targets.count(doc.tokens[i].surface) > 0;
  }

  const auto sentences = doc.sentence_ranges();
  const std::size_t shards = std::max<std::size_t>(1, std::min(cfg.shards, sentences.size()));
  Tally total;
  total.column_sums.assign(space.dim, 0);
  for (std::size_t s = 0; s < shards; ++s) {
    const std::size_t first = sentences.size() * s / shards;
    const std::size_t last = sentences.size() * (s + 1) / shards;
    total.merge(count_range(doc, sentences, first, last, column_of, is_target, space.dim, cfg.window));
  }

  long double n_pairs = 0;
  for (std::uint64_t c : total.column_sums) n_pairs += c;

  for (const std::string& t : targets) {
    const auto occ = total.occurrences.find(t);
    if (occ == total.occurrences.end()) {
      space.excluded[t] = "no occurrences";
      continue;
    }
    const auto& row = total.rows[t];
    std::uint64_t row_sum = 0;
    for (const auto& [c, n] : row) row_sum += n;
    if (row_sum == 0) {
      space.excluded[t] = "no contexts";
      continue;
    }
    SparseRow out;
    for (const auto& [c, n] : row) {
      double v = static_cast<double>(n);
      if (cfg.weighting == Weighting::ppmi) {
        const double pmi = std::log(static_cast<double>(n_pairs) * static_cast<double>(n) /
                                    (static_cast<double>(row_sum) * static_cast<double>(total.column_sums[c])));
        v = std::max(0.0, pmi);
      }
      if (v == 0.0) continue;
      out.index.push_back(c);
      out.value.push_back(v);
    }
    if (out.index.empty()) {
      space.excluded[t] = "all weights zero";
      continue;
    }
    space.sparse.emplace(t, std::move(out));
  }
  return space;
}

}  // namespace doppelkit
