#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "doppelkit/corpus.hpp"

namespace doppelkit {

struct CharacterEntry {
  std::string entity_id;  // __ent_<slug>__
  std::string display_name;
  std::vector<std::string> aliases;
};

// Lowercase ASCII letters and digits joined by single underscores; non-ASCII
// letters are kept as lowercase UTF-8.
std::string slugify(std::string_view id);

std::string character_token(std::string_view slug);
std::string noun_token(std::string_view lemma);
bool is_character_token(std::string_view surface);
bool is_noun_token(std::string_view surface);
inline bool is_entity_token(std::string_view surface) {
  return is_character_token(surface) || is_noun_token(surface);
}

// Reads {"characters":[{"id":..,"name":..,"aliases":[..]}]}. Ids are
// slugified; the result is validated. Throws ParseError or InvalidInventory.
std::vector<CharacterEntry> parse_characters_json(std::string_view text);
std::vector<CharacterEntry> load_characters(const std::string& path);
std::string characters_to_json(const std::vector<CharacterEntry>& characters);

// Unique ids, at least one alias each, aliases of 1..5 tokens, and no alias
// shared between two characters.
void validate_characters(const std::vector<CharacterEntry>& characters);

// Token positions [begin, end) in the original document's numbering.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
  bool operator==(const Span&) const = default;
};

struct MentionIndex {
  std::string doc_id;
  std::map<std::string, std::vector<Span>> spans;  // entity id -> sorted spans

  std::size_t total() const;
};

struct Substitution {
  TaggedDocument doc;
  MentionIndex mentions;
};

// Replaces alias occurrences with the character's entity token. Matching is
// case-sensitive, whole-token, confined to one sentence, and greedy from the
// left with the longest alias winning. Every other token is lowercased
// (surface and lemma). Substituted tokens keep the token_index of the first
// token they replace, so indices stay strictly increasing and refer back to
// the source document.
Substitution substitute_aliases(const TaggedDocument& doc, const std::vector<CharacterEntry>& characters);

// Counts per entity; ids listed in `ids` appear even with zero spans.
std::map<std::string, std::size_t> count_mentions(const MentionIndex& index,
                                                  const std::vector<std::string>& ids = {});

struct CommonNoun {
  std::string entity_id;  // __noun_<lemma>__
  std::string lemma;
  std::string matched_character_id;
  std::size_t frequency = 0;
};

struct EntityInventory {
  std::string novel_id;
  std::vector<CharacterEntry> characters;
  std::vector<CommonNoun> common_nouns;
  bool approximate = false;  // nouns chosen from untagged text

  std::vector<std::string> character_ids() const;
  std::vector<std::string> noun_ids() const;
};

using Stoplist = std::set<std::string, std::less<>>;

// The bundled English stopword list.
const Stoplist& english_stoplist();
Stoplist load_stoplist(const std::string& path);

// Candidate pool and frequencies for common-noun matching over a document
// produced by substitute_aliases. Tagged input: lemmas of NOUN tokens.
// Untagged input: alphabetic lowercase surfaces. Stopwords, entity tokens and
// words that occur inside any alias are never candidates.
std::map<std::string, std::size_t> noun_candidates(const TaggedDocument& substituted,
                                                   const std::vector<CharacterEntry>& characters,
                                                   const Stoplist& stoplist);

// Greedy nearest-frequency matching: characters in descending mention count
// (id breaks ties) each take the unused candidate minimizing
// |freq - mentions|, alphabetical order breaking ties.
// Throws InsufficientNouns when the pool is smaller than the character list.
EntityInventory select_matched_nouns(const TaggedDocument& substituted,
                                     const std::vector<CharacterEntry>& characters,
                                     const std::map<std::string, std::size_t>& mention_counts,
                                     const Stoplist& stoplist);

// Single-token occurrences of each matched noun, in the substituted
// document's token_index numbering. Tagged documents match NOUN tokens by
// lemma; untagged ones match surfaces.
MentionIndex index_common_nouns(const TaggedDocument& substituted, const EntityInventory& inventory);

// Replaces indexed noun occurrences by their entity token.
TaggedDocument substitute_nouns(const TaggedDocument& substituted, const MentionIndex& nouns);

// Draft inventory from capitalization: runs of capitalized tokens that do not
// start a sentence, seen at least `min_count` times, most frequent first.
std::vector<CharacterEntry> bootstrap_characters(const TaggedDocument& doc, std::size_t min_count = 5,
                                                 std::size_t max_characters = 50);

}  // namespace doppelkit
