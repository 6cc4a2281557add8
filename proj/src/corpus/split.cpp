#include "doppelkit/corpus.hpp"
#include "doppelkit/error.hpp"

namespace doppelkit {

namespace {

std::size_t absdiff(std::size_t a, std::size_t b) { return a > b ? a - b : b - a; }

}  // namespace

std::vector<std::size_t> split_imbalances(const TaggedDocument& doc, SplitRule rule) {
  const auto ranges = doc.sentence_ranges();
  if (ranges.size() < 2) throw UnsplittableDocument();
  std::vector<std::size_t> out;
  out.reserve(ranges.size() - 1);
  const std::size_t total_tokens = doc.tokens.size();
  const std::size_t total_sentences = ranges.size();
  for (std::size_t k = 0; k + 1 < ranges.size(); ++k) {
    if (rule == SplitRule::tokens) {
      const std::size_t a = ranges[k].end;
      out.push_back(absdiff(a, total_tokens - a));
    } else {
      out.push_back(absdiff(k + 1, total_sentences - k - 1));
    }
  }
  return out;
}

SplitDocument split_document(const TaggedDocument& doc, SplitRule rule) {
  const auto imbalance = split_imbalances(doc, rule);
  std::size_t best = 0;
  for (std::size_t k = 1; k < imbalance.size(); ++k) {
    if (imbalance[k] < imbalance[best]) best = k;
  }
  const auto ranges = doc.sentence_ranges();
  const std::size_t cut = ranges[best].end;

  SplitDocument out;
  out.split_sentence_index = doc.tokens[cut - 1].sentence_index;
  for (TaggedDocument* part : {&out.part_a, &out.part_b}) {
    part->doc_id = doc.doc_id;
    part->source_kind = doc.source_kind;
    part->tagged = doc.tagged;
  }
  out.part_a.tokens.assign(doc.tokens.begin(), doc.tokens.begin() + static_cast<std::ptrdiff_t>(cut));
  out.part_b.tokens.assign(doc.tokens.begin() + static_cast<std::ptrdiff_t>(cut), doc.tokens.end());
  return out;
}

}  // namespace doppelkit
