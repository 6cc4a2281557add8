#include <array>
#include <charconv>

#include "doppelkit/corpus.hpp"
#include "doppelkit/error.hpp"

namespace doppelkit {

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> cols;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      cols.push_back(line.substr(start));
      return cols;
    }
    cols.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

bool is_plain_id(std::string_view id) {
  if (id.empty()) return false;
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(id.data(), id.data() + id.size(), value);
  return ec == std::errc() && ptr == id.data() + id.size() && value > 0;
}

}  // namespace

TaggedDocument parse_conllu(std::string_view text, std::string doc_id, SourceKind kind) {
  TaggedDocument doc;
  doc.doc_id = std::move(doc_id);
  doc.source_kind = kind;

  std::size_t sentence = 0;
  bool sentence_open = false;
  bool all_tagged = true;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (line.empty()) {
      if (sentence_open) {
        ++sentence;
        sentence_open = false;
      }
      if (eol == text.size()) break;
      continue;
    }
    if (line.front() == '#') continue;

    const auto cols = split_tabs(line);
    if (cols.size() != 10) {
      throw ParseError(line_no, "expected 10 tab-separated columns, found " + std::to_string(cols.size()));
    }
    const std::string_view id = cols[0];
    if (id.find('-') != std::string_view::npos || id.find('.') != std::string_view::npos) continue;
    if (!is_plain_id(id)) throw ParseError(line_no, "invalid token id '" + std::string(id) + "'");
    if (cols[1].empty()) throw ParseError(line_no, "empty FORM");

    Token tok;
    tok.surface = std::string(cols[1]);
    if (cols[2] != "_" || cols[1] == "_") tok.lemma = std::string(cols[2]);
    if (cols[3] != "_") {
      tok.upos = parse_upos(cols[3]);
      if (!tok.upos) throw ParseError(line_no, "unknown UPOS '" + std::string(cols[3]) + "'");
    }
    all_tagged = all_tagged && tok.lemma && tok.upos;
    tok.sentence_index = sentence;
    tok.token_index = doc.tokens.size();
    doc.tokens.push_back(std::move(tok));
    sentence_open = true;
    if (eol == text.size()) break;
  }

  if (doc.tokens.empty()) throw EmptyDocument();
  doc.tagged = all_tagged;
  return doc;
}

std::string to_conllu(const TaggedDocument& doc) {
  std::string out;
  const auto ranges = doc.sentence_ranges();
  for (std::size_t s = 0; s < ranges.size(); ++s) {
    out += "# sent_id = " + std::to_string(s + 1) + "\n";
    for (std::size_t i = ranges[s].begin; i < ranges[s].end; ++i) {
      const Token& tok = doc.tokens[i];
      out += std::to_string(i - ranges[s].begin + 1);
      out += '\t';
      out += tok.surface;
      out += '\t';
      out += tok.lemma.value_or("_");
      out += '\t';
      out += tok.upos ? std::string(to_string(*tok.upos)) : std::string("_");
      out += "\t_\t_\t_\t_\t_\t_\n";
    }
    out += '\n';
  }
  return out;
}

}  // namespace doppelkit
