#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace doppelkit {

// Universal Dependencies part-of-speech tags.
enum class Upos { ADJ, ADP, ADV, AUX, CCONJ, DET, INTJ, NOUN, NUM, PART, PRON, PROPN, PUNCT, SCONJ, SYM, VERB, X };

std::optional<Upos> parse_upos(std::string_view tag);
std::string_view to_string(Upos tag);

struct Token {
  std::string surface;
  std::optional<std::string> lemma;
  std::optional<Upos> upos;
  std::size_t sentence_index = 0;
  std::size_t token_index = 0;  // document order

  bool operator==(const Token&) const = default;
};

enum class SourceKind { novel, wiki };

std::string_view to_string(SourceKind kind);

// Half-open range of token positions [begin, end) within one document.
struct SentenceRange {
  std::size_t begin;
  std::size_t end;
  std::size_t size() const { return end - begin; }
};

struct TaggedDocument {
  std::string doc_id;
  SourceKind source_kind = SourceKind::novel;
  std::vector<Token> tokens;
  bool tagged = false;  // every token has lemma and upos

  // Contiguous runs of tokens sharing a sentence index, in document order.
  std::vector<SentenceRange> sentence_ranges() const;
  std::size_t sentence_count() const;
};

struct SplitDocument {
  TaggedDocument part_a;
  TaggedDocument part_b;
  // Sentence index of the last sentence in part A.
  std::size_t split_sentence_index = 0;
};

enum class SplitRule { tokens, sentences };

std::string_view to_string(SplitRule rule);
std::optional<SplitRule> parse_split_rule(std::string_view name);

// Rule-based tokenizer: words are maximal runs of letters/digits with
// word-internal apostrophes; every other non-space code point is its own
// token. A sentence ends after `.`, `!` or `?` when whitespace and an
// uppercase letter (or the end of the text) follow.
// Throws EmptyDocument for blank input, ParseError for invalid UTF-8.
TaggedDocument tokenize_plain(std::string_view text, std::string doc_id = {},
                              SourceKind kind = SourceKind::novel);

// Inverse of tokenize_plain up to whitespace: tokenizing the result gives
// back the same tokens and sentence indices.
std::string detokenize(const TaggedDocument& doc);

// CoNLL-U reader: FORM, LEMMA and UPOS columns; comments, multiword ranges
// and empty nodes are skipped. Throws ParseError (1-based line) or
// EmptyDocument.
TaggedDocument parse_conllu(std::string_view text, std::string doc_id = {},
                            SourceKind kind = SourceKind::novel);

std::string to_conllu(const TaggedDocument& doc);

// Splits at the sentence boundary that best balances the two halves (token
// counts or sentence counts); ties go to the earlier boundary. Token and
// sentence indices keep their original values in both parts.
SplitDocument split_document(const TaggedDocument& doc, SplitRule rule = SplitRule::tokens);

// Candidate boundary evaluation used by split_document; returns the
// imbalance for splitting after each of the first S-1 sentences.
std::vector<std::size_t> split_imbalances(const TaggedDocument& doc, SplitRule rule);

TaggedDocument load_document(const std::string& path, std::string doc_id, SourceKind kind);

}  // namespace doppelkit
