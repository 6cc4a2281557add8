#pragma once

// Reference computations written from the definitions, with no shared code
// from the library beyond plain data types. Slow on purpose.

#include <algorithm>
#include <array>
#include <cstdint>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "doppelkit/corpus.hpp"
#include "doppelkit/entities.hpp"

namespace oracle {

using Matrix = std::map<std::string, std::map<std::string, double>>;

// Context columns: the `max_vocab` most frequent non-target surfaces,
// frequency descending then byte order.
inline std::vector<std::string> context_columns(const doppelkit::TaggedDocument& doc,
                                                const std::set<std::string>& targets, std::size_t max_vocab) {
  std::map<std::string, std::size_t> freq;
  for (const auto& t : doc.tokens) {
    if (!targets.count(t.surface)) ++freq[t.surface];
  }
  std::vector<std::pair<std::string, std::size_t>> v(freq.begin(), freq.end());
  std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size() && i < max_vocab; ++i) out.push_back(v[i].first);
  return out;
}

inline bool in_window(const doppelkit::TaggedDocument& doc, std::size_t i, std::size_t j, std::size_t window) {
  if (i == j) return false;
  const std::size_t d = i > j ? i - j : j - i;
  return d <= window && doc.tokens[i].sentence_index == doc.tokens[j].sentence_index;
}

// Triple loop: target x context x (centre, neighbour) position pairs.
// Marginals come from a separate enumeration over every centre token.
inline Matrix count_matrix(const doppelkit::TaggedDocument& doc, const std::set<std::string>& targets,
                           std::size_t window, std::size_t max_vocab, bool ppmi) {
  const auto cols = context_columns(doc, targets, max_vocab);
  const std::set<std::string> colset(cols.begin(), cols.end());
  const std::size_t n = doc.tokens.size();

  double total = 0;
  std::map<std::string, double> row_sum;
  std::map<std::string, double> col_sum;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!in_window(doc, i, j, window) || !colset.count(doc.tokens[j].surface)) continue;
      total += 1;
      row_sum[doc.tokens[i].surface] += 1;
      col_sum[doc.tokens[j].surface] += 1;
    }
  }

  Matrix out;
  for (const auto& t : targets) {
    for (const auto& c : cols) {
      double count = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (doc.tokens[i].surface != t) continue;
        for (std::size_t j = 0; j < n; ++j) {
          if (in_window(doc, i, j, window) && doc.tokens[j].surface == c) count += 1;
        }
      }
      if (count == 0) continue;
      double v = count;
      if (ppmi) v = std::max(0.0, std::log(total * count / (row_sum[t] * col_sum[c])));
      if (v != 0) out[t][c] = v;
    }
  }
  return out;
}

// 1-based ranks with ties averaged, by counting.
inline std::vector<double> ranks(const std::vector<double>& x) {
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double below = 0;
    double equal = 0;
    for (double y : x) {
      if (y < x[i]) below += 1;
      if (y == x[i]) equal += 1;
    }
    r[i] = below + (equal + 1) / 2;
  }
  return r;
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  long double mx = 0;
  long double my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  long double sxy = 0;
  long double sxx = 0;
  long double syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  return pearson(ranks(x), ranks(y));
}

inline double chance_mrr(std::size_t n) {
  double h = 0;
  for (std::size_t i = 1; i <= n; ++i) h += 1.0 / static_cast<double>(i);
  return h / static_cast<double>(n);
}

// Row 0 proper names, row 1 common nouns; columns ADJ ADV DET NOUN PRON VERB.
using Profile = std::array<std::array<std::uint64_t, 6>, 2>;

inline Profile pos_scan(const doppelkit::TaggedDocument& doc, const doppelkit::MentionIndex& mentions) {
  using doppelkit::Upos;
  const Upos tags[6] = {Upos::ADJ, Upos::ADV, Upos::DET, Upos::NOUN, Upos::PRON, Upos::VERB};
  Profile out{};
  for (const auto& [id, spans] : mentions.spans) {
    const std::size_t row = id.rfind("__ent_", 0) == 0 ? 0 : 1;
    for (const auto& span : spans) {
      std::vector<long> positions;
      for (std::size_t p = 0; p < doc.tokens.size(); ++p) {
        const std::size_t ti = doc.tokens[p].token_index;
        if (ti >= span.begin && ti < span.end) positions.push_back(static_cast<long>(p));
      }
      const long first = positions.front();
      const long last = positions.back();
      for (long p : {first - 2, first - 1, last + 1, last + 2}) {
        if (p < 0 || p >= static_cast<long>(doc.tokens.size())) continue;
        for (std::size_t c = 0; c < 6; ++c) {
          if (doc.tokens[static_cast<std::size_t>(p)].upos == tags[c]) ++out[row][c];
        }
      }
    }
  }
  return out;
}

}  // namespace oracle
