#include <array>
#include <fstream>
#include <sstream>

#include "doppelkit/corpus.hpp"
#include "doppelkit/error.hpp"

namespace doppelkit {

namespace {

constexpr std::array<std::string_view, 17> kUposNames = {"ADJ",  "ADP", "ADV",  "AUX",   "CCONJ", "DET",
                                                         "INTJ", "NOUN", "NUM", "PART", "PRON",  "PROPN",
                                                         "PUNCT", "SCONJ", "SYM", "VERB", "X"};

}  // namespace

std::optional<Upos> parse_upos(std::string_view tag) {
  for (std::size_t i = 0; i < kUposNames.size(); ++i) {
    if (kUposNames[i] == tag) return static_cast<Upos>(i);
  }
  return std::nullopt;
}

std::string_view to_string(Upos tag) { return kUposNames[static_cast<std::size_t>(tag)]; }

std::string_view to_string(SourceKind kind) { return kind == SourceKind::novel ? "novel" : "wiki"; }

std::string_view to_string(SplitRule rule) { return rule == SplitRule::tokens ? "tokens" : "sentences"; }

std::optional<SplitRule> parse_split_rule(std::string_view name) {
  if (name == "tokens") return SplitRule::tokens;
  if (name == "sentences") return SplitRule::sentences;
  return std::nullopt;
}

std::vector<SentenceRange> TaggedDocument::sentence_ranges() const {
  std::vector<SentenceRange> ranges;
  std::size_t begin = 0;
  for (std::size_t i = 1; i <= tokens.size(); ++i) {
    if (i == tokens.size() || tokens[i].sentence_index != tokens[begin].sentence_index) {
      ranges.push_back({begin, i});
      begin = i;
    }
  }
  return ranges;
}

std::size_t TaggedDocument::sentence_count() const { return sentence_ranges().size(); }

TaggedDocument load_document(const std::string& path, std::string doc_id, SourceKind kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IoError", "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const bool conllu = path.size() >= 7 && path.compare(path.size() - 7, 7, ".conllu") == 0;
  return conllu ? parse_conllu(text, std::move(doc_id), kind) : tokenize_plain(text, std::move(doc_id), kind);
}

}  // namespace doppelkit
