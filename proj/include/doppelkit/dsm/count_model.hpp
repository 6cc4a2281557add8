#pragma once

#include <cstddef>
#include <set>
#include <string>

#include "doppelkit/corpus.hpp"
#include "doppelkit/dsm/space.hpp"

namespace doppelkit {

enum class Weighting { ppmi, raw };

struct CountModelConfig {
  std::size_t window = 5;
  std::size_t max_context_vocab = 10000;
  Weighting weighting = Weighting::ppmi;
  std::size_t shards = 1;  // sentence shards counted independently, then summed

  bool operator==(const CountModelConfig&) const = default;
};

// Sparse count vectors for `targets`.
//
// Context columns are the max_context_vocab most frequent token types that
// are not targets (frequency descending, then byte order). Every token is a
// centre: a pair (centre, context) is counted for each context-column token
// within +-window positions in the same sentence. N is the total number of
// such pairs, c(t) and c(c) the row and column sums, and with ppmi weighting
// a cell holds max(0, ln(N c(t,c) / (c(t) c(c)))).
//
// Targets that never occur, or occur without any context, are excluded.
// Throws EmptyVocabulary when no context type is left.
EmbeddingSpace build_count_space(const TaggedDocument& doc, const std::set<std::string>& targets,
                                 const CountModelConfig& cfg, PartId part = PartId::A);

}  // namespace doppelkit
