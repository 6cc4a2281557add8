#pragma once

#include <cstddef>
#include <set>
#include <string>

#include "doppelkit/corpus.hpp"
#include "doppelkit/dsm/sgns.hpp"
#include "doppelkit/dsm/space.hpp"
#include "doppelkit/entities.hpp"

namespace doppelkit {

// Entity vector = sum, over every occurrence of the entity token, of the
// background vectors of the tokens within +-window in the same sentence.
// Skipped as contexts: entity tokens, stopwords, tokens without a letter, and
// tokens the background does not know. Entities left without any context
// vector are excluded. A warning is recorded when the background covers
// fewer than half of the document's word types.
// Throws MissingBackground for an empty table.
EmbeddingSpace build_additive_space(const TaggedDocument& doc, const std::set<std::string>& targets,
                                    const EmbeddingTable& background, std::size_t window,
                                    const Stoplist& stoplist, PartId part = PartId::A);

}  // namespace doppelkit
