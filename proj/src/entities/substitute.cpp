#include <algorithm>
#include <unordered_map>

#include "doppelkit/entities.hpp"
#include "doppelkit/error.hpp"
#include "doppelkit/text.hpp"

namespace doppelkit {

namespace {

struct AliasPattern {
  std::vector<std::string> tokens;
  const std::string* entity_id;
};

std::vector<std::string> split_whitespace(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && !(s[j] == ' ' || s[j] == '\t' || s[j] == '\n' || s[j] == '\r')) ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

// Aliases are matched both as written (whitespace tokens, the usual CoNLL-U
// shape) and as the built-in tokenizer would split them ("Mr." -> "Mr" ".").
std::unordered_map<std::string, std::vector<AliasPattern>> build_patterns(
    const std::vector<CharacterEntry>& characters) {
  std::unordered_map<std::string, std::vector<AliasPattern>> by_first;
  for (const auto& c : characters) {
    for (const auto& alias : c.aliases) {
      std::vector<std::vector<std::string>> variants{split_whitespace(alias)};
      try {
        const TaggedDocument t = tokenize_plain(alias);
        std::vector<std::string> plain;
        for (const auto& tok : t.tokens) plain.push_back(tok.surface);
        if (plain != variants.front()) variants.push_back(std::move(plain));
      } catch (const Error&) {
      }
      for (auto& v : variants) {
        if (v.empty()) continue;
        const std::string first = v.front();
        by_first[first].push_back({std::move(v), &c.entity_id});
      }
    }
  }
  for (auto& [first, list] : by_first) {
    std::stable_sort(list.begin(), list.end(),
                     [](const AliasPattern& a, const AliasPattern& b) { return a.tokens.size() > b.tokens.size(); });
  }
  return by_first;
}

Token lowered(const Token& tok) {
  Token out = tok;
  out.surface = text::lowercase(tok.surface);
  if (out.lemma) out.lemma = text::lowercase(*out.lemma);
  return out;
}

bool in_any_alias(const std::string& word, const std::vector<CharacterEntry>& characters) {
  for (const auto& c : characters) {
    for (const auto& alias : c.aliases) {
      for (const auto& w : split_whitespace(alias)) {
        if (text::lowercase(w) == word) return true;
      }
    }
  }
  return false;
}

}  // namespace

Substitution substitute_aliases(const TaggedDocument& doc, const std::vector<CharacterEntry>& characters) {
  const auto patterns = build_patterns(characters);
  Substitution out;
  out.doc.doc_id = doc.doc_id;
  out.doc.source_kind = doc.source_kind;
  out.doc.tagged = doc.tagged;
  out.mentions.doc_id = doc.doc_id;
  for (const auto& c : characters) out.mentions.spans[c.entity_id];

  for (const SentenceRange& sent : doc.sentence_ranges()) {
    std::size_t i = sent.begin;
    while (i < sent.end) {
      const AliasPattern* hit = nullptr;
      if (const auto it = patterns.find(doc.tokens[i].surface); it != patterns.end()) {
        for (const AliasPattern& p : it->second) {
          if (i + p.tokens.size() > sent.end) continue;
          bool ok = true;
          for (std::size_t k = 1; k < p.tokens.size() && ok; ++k) ok = doc.tokens[i + k].surface == p.tokens[k];
          if (ok) {
            hit = &p;
            break;
          }
        }
      }
      if (!hit) {
        out.doc.tokens.push_back(lowered(doc.tokens[i]));
        ++i;
        continue;
      }
      const std::size_t len = hit->tokens.size();
      Token tok;
      tok.surface = *hit->entity_id;
      if (doc.tagged) {
        tok.lemma = *hit->entity_id;
        tok.upos = Upos::PROPN;
      }
      tok.sentence_index = doc.tokens[i].sentence_index;
      tok.token_index = doc.tokens[i].token_index;
      out.doc.tokens.push_back(std::move(tok));
      out.mentions.spans[*hit->entity_id].push_back({doc.tokens[i].token_index, doc.tokens[i + len - 1].token_index + 1});
      i += len;
    }
  }
  return out;
}

std::map<std::string, std::size_t> noun_candidates(const TaggedDocument& substituted,
                                                   const std::vector<CharacterEntry>& characters,
                                                   const Stoplist& stoplist) {
  std::map<std::string, std::size_t> freq;
  for (const Token& tok : substituted.tokens) {
    if (is_entity_token(tok.surface)) continue;
    if (substituted.tagged) {
      if (tok.upos != Upos::NOUN || !tok.lemma) continue;
      ++freq[text::lowercase(*tok.lemma)];
    } else {
      ++freq[text::lowercase(tok.surface)];
    }
  }
  for (auto it = freq.begin(); it != freq.end();) {
    const std::string& w = it->first;
    const bool drop = w.size() < 2 || !text::is_alphabetic(w) || stoplist.count(w) > 0 || in_any_alias(w, characters);
    it = drop ? freq.erase(it) : std::next(it);
  }
  return freq;
}

EntityInventory select_matched_nouns(const TaggedDocument& substituted,
                                     const std::vector<CharacterEntry>& characters,
                                     const std::map<std::string, std::size_t>& mention_counts,
                                     const Stoplist& stoplist) {
  const auto pool = noun_candidates(substituted, characters, stoplist);
  if (pool.size() < characters.size()) throw InsufficientNouns(characters.size(), pool.size());

  auto mentions_of = [&](const CharacterEntry& c) -> std::size_t {
    const auto it = mention_counts.find(c.entity_id);
    return it == mention_counts.end() ? 0 : it->second;
  };
  std::vector<const CharacterEntry*> order;
  for (const auto& c : characters) order.push_back(&c);
  std::sort(order.begin(), order.end(), [&](const CharacterEntry* a, const CharacterEntry* b) {
    const std::size_t ma = mentions_of(*a);
    const std::size_t mb = mentions_of(*b);
    return ma != mb ? ma > mb : a->entity_id < b->entity_id;
  });

  EntityInventory inv;
  inv.novel_id = substituted.doc_id;
  inv.characters = characters;
  inv.approximate = !substituted.tagged;
  std::set<std::string> used;
  for (const CharacterEntry* c : order) {
    const std::size_t m = mentions_of(*c);
    const std::string* best = nullptr;
    std::size_t best_gap = 0;
    std::size_t best_freq = 0;
    // The pool is a sorted map, so the first minimum found is alphabetical.
    for (const auto& [lemma, f] : pool) {
      if (used.count(lemma)) continue;
      const std::size_t gap = f > m ? f - m : m - f;
      if (!best || gap < best_gap) {
        best = &lemma;
        best_gap = gap;
        best_freq = f;
      }
    }
    used.insert(*best);
    inv.common_nouns.push_back({noun_token(*best), *best, c->entity_id, best_freq});
  }
  return inv;
}

MentionIndex index_common_nouns(const TaggedDocument& substituted, const EntityInventory& inventory) {
  std::unordered_map<std::string, const std::string*> by_lemma;
  MentionIndex out;
  out.doc_id = substituted.doc_id;
  for (const auto& n : inventory.common_nouns) {
    by_lemma[n.lemma] = &n.entity_id;
    out.spans[n.entity_id];
  }
  for (const Token& tok : substituted.tokens) {
    if (is_entity_token(tok.surface)) continue;
    std::string key;
    if (substituted.tagged) {
      if (tok.upos != Upos::NOUN || !tok.lemma) continue;
      key = text::lowercase(*tok.lemma);
    } else {
      key = text::lowercase(tok.surface);
    }
    if (const auto it = by_lemma.find(key); it != by_lemma.end()) {
      out.spans[*it->second].push_back({tok.token_index, tok.token_index + 1});
    }
  }
  return out;
}

TaggedDocument substitute_nouns(const TaggedDocument& substituted, const MentionIndex& nouns) {
  std::unordered_map<std::size_t, const std::string*> at;
  for (const auto& [id, spans] : nouns.spans) {
    for (const Span& s : spans) at[s.begin] = &id;
  }
  TaggedDocument out = substituted;
  for (Token& tok : out.tokens) {
    const auto it = at.find(tok.token_index);
    if (it == at.end() || is_entity_token(tok.surface)) continue;
    tok.surface = *it->second;
    if (tok.lemma) tok.lemma = *it->second;
  }
  return out;
}

std::vector<CharacterEntry> bootstrap_characters(const TaggedDocument& doc, std::size_t min_count,
                                                 std::size_t max_characters) {
  const Stoplist& stop = english_stoplist();
  auto capitalized = [](const std::string& s) {
    const auto d = text::decode(s, 0);
    return d && text::is_upper(d->code_point) && text::is_alphabetic(s);
  };
  std::map<std::string, std::size_t> counts;
  for (const SentenceRange& sent : doc.sentence_ranges()) {
    std::size_t i = sent.begin + 1;  // sentence-initial capitals are uninformative
    while (i < sent.end) {
      if (!capitalized(doc.tokens[i].surface)) {
        ++i;
        continue;
      }
      std::size_t j = i;
      std::string name;
      while (j < sent.end && j - i < 5 && capitalized(doc.tokens[j].surface)) {
        if (!name.empty()) name.push_back(' ');
        name += doc.tokens[j].surface;
        ++j;
      }
      if (!(j == i + 1 && stop.count(text::lowercase(name)))) ++counts[name];
      i = j;
    }
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<CharacterEntry> out;
  std::set<std::string> ids;
  for (const auto& [name, count] : ranked) {
    if (count < min_count || out.size() >= max_characters) break;
    const std::string slug = slugify(name);
    if (slug.empty() || !ids.insert(slug).second) continue;
    out.push_back({character_token(slug), name, {name}});
  }
  return out;
}

}  // namespace doppelkit
