#include "doppelkit/corpus.hpp"
#include "doppelkit/error.hpp"
#include "doppelkit/text.hpp"

namespace doppelkit {

namespace {

struct CodePoint {
  char32_t value;
  std::size_t offset;
  std::size_t length;
};

std::vector<CodePoint> decode_all(std::string_view text) {
  std::vector<CodePoint> out;
  out.reserve(text.size());
  std::size_t pos = 0;
  std::size_t line = 1;
  while (pos < text.size()) {
    const auto d = text::decode(text, pos);
    if (!d) throw ParseError(line, "invalid UTF-8 at byte " + std::to_string(pos));
    if (d->code_point == '\n') ++line;
    out.push_back({d->code_point, pos, d->length});
    pos += d->length;
  }
  return out;
}

bool is_word_char(char32_t cp) { return text::is_letter(cp) || text::is_digit(cp); }

bool is_terminator(std::string_view tok) { return tok == "." || tok == "!" || tok == "?"; }

}  // namespace

TaggedDocument tokenize_plain(std::string_view text, std::string doc_id, SourceKind kind) {
  const std::vector<CodePoint> cps = decode_all(text);

  TaggedDocument doc;
  doc.doc_id = std::move(doc_id);
  doc.source_kind = kind;
  doc.tagged = false;

  std::size_t sentence = 0;
  std::size_t i = 0;
  const std::size_t n = cps.size();
  while (i < n) {
    const char32_t cp = cps[i].value;
    if (text::is_space(cp)) {
      ++i;
      continue;
    }
    std::size_t end = i + 1;
    if (is_word_char(cp)) {
      while (end < n) {
        if (is_word_char(cps[end].value)) {
          ++end;
        } else if (text::is_apostrophe(cps[end].value) && end + 1 < n && is_word_char(cps[end + 1].value)) {
          end += 2;
        } else {
          break;
        }
      }
    }
    const std::size_t byte_begin = cps[i].offset;
    const std::size_t byte_end = cps[end - 1].offset + cps[end - 1].length;
    Token tok;
    tok.surface = std::string(text.substr(byte_begin, byte_end - byte_begin));
    tok.sentence_index = sentence;
    tok.token_index = doc.tokens.size();
    doc.tokens.push_back(std::move(tok));

    if (is_terminator(doc.tokens.back().surface)) {
      if (end == n) {
        // end of text closes the sentence anyway
      } else if (text::is_space(cps[end].value)) {
        std::size_t next = end;
        while (next < n && text::is_space(cps[next].value)) ++next;
        if (next == n || text::is_upper(cps[next].value)) ++sentence;
      }
    }
    i = end;
  }

  if (doc.tokens.empty()) throw EmptyDocument();
  return doc;
}

std::string detokenize(const TaggedDocument& doc) {
  std::string out;
  for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
    const Token& tok = doc.tokens[i];
    out += tok.surface;
    if (i + 1 == doc.tokens.size()) break;
    const Token& next = doc.tokens[i + 1];
    // A terminator that did not end its sentence must not be followed by
    // whitespace + uppercase, or re-tokenizing would insert a boundary.
    const bool glue = is_terminator(tok.surface) && next.sentence_index == tok.sentence_index &&
                      text::decode(next.surface, 0).has_value() &&
                      text::is_upper(text::decode(next.surface, 0)->code_point);
    if (!glue) out.push_back(next.sentence_index != tok.sentence_index ? '\n' : ' ');
  }
  return out;
}

}  // namespace doppelkit
