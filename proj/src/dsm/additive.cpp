#include <algorithm>
#include <unordered_set>

#include "doppelkit/dsm/additive.hpp"
#include "doppelkit/error.hpp"
#include "doppelkit/kernels/kernels.hpp"
#include "doppelkit/text.hpp"

namespace doppelkit {

namespace {

bool has_letter(std::string_view s) {
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto d = text::decode(s, pos);
    if (!d) return false;
    if (text::is_letter(d->code_point)) return true;
    pos += d->length;
  }
  return false;
}

}  // namespace

EmbeddingSpace build_additive_space(const TaggedDocument& doc, const std::set<std::string>& targets,
                                    const EmbeddingTable& background, std::size_t window,
                                    const Stoplist& stoplist, PartId part) {
  if (background.size() == 0 || background.dim == 0) throw MissingBackground();
  EmbeddingSpace space;
  space.part = part;
  space.model_id = "additive";
  space.dim = background.dim;

  // Per-token background row, or null when the token is not a usable context.
  std::vector<const double*> context(doc.tokens.size(), nullptr);
  std::unordered_set<std::string> types;
  std::unordered_set<std::string> covered;
  for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
    const std::string& w = doc.tokens[i].surface;
    if (is_entity_token(w) || targets.count(w)) continue;
    types.insert(w);
    const double* v = background.find(w);
    if (v) covered.insert(w);
    if (!v || stoplist.count(w) || !has_letter(w)) continue;
    context[i] = v;
  }
  if (!types.empty() && covered.size() * 2 < types.size()) {
    space.warnings.push_back("background covers " + std::to_string(covered.size()) + " of " +
                             std::to_string(types.size()) + " word types");
  }

  const auto& k = kernels::active();
  std::map<std::string, std::vector<double>> sums;
  std::map<std::string, std::size_t> seen;
  for (const SentenceRange& r : doc.sentence_ranges()) {
    for (std::size_t i = r.begin; i < r.end; ++i) {
      const std::string& t = doc.tokens[i].surface;
      if (!targets.count(t)) continue;
      ++seen[t];
      const std::size_t lo = i - std::min(window, i - r.begin);
      const std::size_t hi = std::min(r.end, i + window + 1);
      for (std::size_t j = lo; j < hi; ++j) {
        if (j == i || !context[j]) continue;
        auto& acc = sums[t];
        if (acc.empty()) acc.assign(space.dim, 0.0);
        k.axpy(1.0, context[j], acc.data(), space.dim);
      }
    }
  }
  for (const std::string& t : targets) {
    if (!seen.count(t)) {
      space.excluded[t] = "no occurrences";
    } else if (!sums.count(t)) {
      space.excluded[t] = "no background contexts";
    } else {
      space.dense.emplace(t, std::move(sums[t]));
    }
  }
  return space;
}

}  // namespace doppelkit
