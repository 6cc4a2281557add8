#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "doppelkit/app/synth.hpp"
#include "doppelkit/corpus.hpp"
#include "doppelkit/entities.hpp"
#include "doppelkit/error.hpp"
#include "doppelkit/random.hpp"

namespace fs = std::filesystem;

namespace doppelkit {

namespace {

constexpr const char* kOnsets[] = {"b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z", "br", "st", "tr", "gl"};
constexpr const char* kVowels[] = {"a", "e", "i", "o", "u", "ai", "ou"};

struct Lexicon {
  std::vector<std::string> verbs;
  std::vector<std::string> adjectives;
  std::vector<std::string> nouns;
  std::vector<std::string> adverbs;
};

struct Signature {
  std::vector<std::size_t> verbs;
  std::vector<std::size_t> adjectives;
  std::vector<std::size_t> nouns;
};

struct Word {
  std::string form;
  Upos upos;
};

std::string pseudo_word(Rng& rng, std::size_t syllables) {
  std::string w;
  for (std::size_t i = 0; i < syllables; ++i) {
    w += kOnsets[rng.below(std::size(kOnsets))];
    w += kVowels[rng.below(std::size(kVowels))];
  }
  if (rng.uniform() < 0.5) w += kOnsets[rng.below(12)];
  return w;
}

std::vector<std::string> fresh_words(Rng& rng, std::size_t n, std::set<std::string>& used) {
  std::vector<std::string> out;
  while (out.size() < n) {
    std::string w = pseudo_word(rng, 2 + rng.below(2));
    // Keep clear of the stoplist and of earlier words.
    if (english_stoplist().count(w) || !used.insert(w).second) continue;
    out.push_back(std::move(w));
  }
  return out;
}

std::vector<std::size_t> pick(Rng& rng, std::size_t n, std::size_t k) {
  std::set<std::size_t> s;
  while (s.size() < k) s.insert(static_cast<std::size_t>(rng.below(n)));
  return {s.begin(), s.end()};
}

// Cumulative Zipf weights for drawing from `n` items.
std::vector<double> zipf_cdf(std::size_t n, double exponent) {
  std::vector<double> cdf(n);
  double acc = 0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += 1.0 / std::pow(static_cast<double>(i + 1), exponent);
    cdf[i] = acc;
  }
  return cdf;
}

std::size_t draw(Rng& rng, const std::vector<double>& cdf) {
  const double x = rng.uniform() * cdf.back();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), x);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

class Generator {
 public:
  Generator(const SynthConfig& cfg, Rng& rng) : cfg_(cfg), rng_(rng) {
    std::set<std::string> used;
    lex_.verbs = fresh_words(rng_, 150, used);
    lex_.adjectives = fresh_words(rng_, 120, used);
    lex_.nouns = fresh_words(rng_, 300, used);
    lex_.adverbs = fresh_words(rng_, 40, used);
    for (const std::string& w : fresh_words(rng_, cfg.n_characters, used)) {
      std::string name = w;
      name[0] = static_cast<char>(name[0] - 'a' + 'A');
      names_.push_back(std::move(name));
    }
    for (std::size_t i = 0; i < cfg.n_characters; ++i) character_sigs_.push_back(signature());
    for (std::size_t i = 0; i < lex_.nouns.size(); ++i) noun_sigs_.push_back(signature());
    character_cdf_ = zipf_cdf(cfg.n_characters, 0.6);
    noun_cdf_ = zipf_cdf(lex_.nouns.size(), 1.0);
    verb_cdf_ = zipf_cdf(lex_.verbs.size(), 1.0);
    adjective_cdf_ = zipf_cdf(lex_.adjectives.size(), 1.0);
  }

  const std::vector<std::string>& names() const { return names_; }

  // Sentences until `tokens` is reached; characters limited to [0, limit).
  std::vector<std::vector<Word>> text(std::size_t tokens, std::size_t limit) {
    std::vector<std::vector<Word>> out;
    std::size_t n = 0;
    while (n < tokens) {
      auto s = rng_.uniform() < cfg_.character_share ? character_sentence(limit) : noun_sentence();
      n += s.size();
      out.push_back(std::move(s));
    }
    return out;
  }

 private:
  Signature signature() {
    return {pick(rng_, lex_.verbs.size(), 6), pick(rng_, lex_.adjectives.size(), 4), pick(rng_, lex_.nouns.size(), 4)};
  }

  bool planted() { return rng_.uniform() < cfg_.signature_rate; }

  Word verb(const Signature& s) {
    const std::size_t i = planted() ? s.verbs[rng_.below(s.verbs.size())] : draw(rng_, verb_cdf_);
    return {lex_.verbs[i], Upos::VERB};
  }
  Word adjective(const Signature& s) {
    const std::size_t i = planted() ? s.adjectives[rng_.below(s.adjectives.size())] : draw(rng_, adjective_cdf_);
    return {lex_.adjectives[i], Upos::ADJ};
  }
  Word object(const Signature& s) {
    const std::size_t i = planted() ? s.nouns[rng_.below(s.nouns.size())] : draw(rng_, noun_cdf_);
    return {lex_.nouns[i], Upos::NOUN};
  }
  Word adverb() { return {lex_.adverbs[rng_.below(lex_.adverbs.size())], Upos::ADV}; }

  std::vector<Word> character_sentence(std::size_t limit) {
    std::size_t c = draw(rng_, character_cdf_);
    while (c >= limit) c = draw(rng_, character_cdf_);
    const Word name{names_[c], Upos::PROPN};
    const Signature& s = character_sigs_[c];
    const Word the{"the", Upos::DET};
    const Word dot{".", Upos::PUNCT};
    switch (rng_.below(4)) {
      case 0:
        return {name, verb(s), the, object(s), dot};
      case 1:
        return {name, {"was", Upos::AUX}, adverb(), adjective(s), dot};
      case 2:
        return {the, object(s), verb(s), name, dot};
      default:
        return {{"she", Upos::PRON}, verb(s), {"with", Upos::ADP}, name, dot};
    }
  }

  std::vector<Word> noun_sentence() {
    const std::size_t n = draw(rng_, noun_cdf_);
    const Word noun{lex_.nouns[n], Upos::NOUN};
    const Signature& s = noun_sigs_[n];
    const Word the{"the", Upos::DET};
    const Word dot{".", Upos::PUNCT};
    switch (rng_.below(3)) {
      case 0:
        return {the, adjective(s), noun, verb(s), the, object(s), dot};
      case 1:
        return {the, noun, {"was", Upos::AUX}, adjective(s), dot};
      default:
        return {{"he", Upos::PRON}, verb(s), {"a", Upos::DET}, noun, adverb(), dot};
    }
  }

  const SynthConfig& cfg_;
  Rng& rng_;
  Lexicon lex_;
  std::vector<std::string> names_;
  std::vector<Signature> character_sigs_;
  std::vector<Signature> noun_sigs_;
  std::vector<double> character_cdf_;
  std::vector<double> noun_cdf_;
  std::vector<double> verb_cdf_;
  std::vector<double> adjective_cdf_;
};

std::string surface(const Word& w, bool initial) {
  std::string s = w.form;
  if (initial && !s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

std::string render_text(const std::vector<std::vector<Word>>& sentences) {
  std::string out;
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    for (std::size_t i = 0; i < sentences[s].size(); ++i) {
      const Word& w = sentences[s][i];
      if (w.upos == Upos::PUNCT) {
        out += w.form;
      } else {
        if (i > 0) out.push_back(' ');
        out += surface(w, i == 0);
      }
    }
    out += (s + 1) % 8 == 0 ? "\n\n" : " ";
  }
  return out;
}

std::string render_conllu(const std::vector<std::vector<Word>>& sentences) {
  std::string out;
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    out += "# sent_id = " + std::to_string(s + 1) + "\n";
    for (std::size_t i = 0; i < sentences[s].size(); ++i) {
      const Word& w = sentences[s][i];
      const std::string& lemma = w.form;
      out += std::to_string(i + 1) + "\t" + surface(w, i == 0) + "\t" + lemma + "\t" + std::string(to_string(w.upos)) +
             "\t_\t_\t_\t_\t_\t_\n";
    }
    out += "\n";
  }
  return out;
}

}  // namespace

SynthNovel synthesize_novel(const SynthConfig& cfg) {
  if (cfg.n_characters < 2) throw ConfigError("synth needs at least 2 characters");
  Rng rng(cfg.seed);
  Generator gen(cfg, rng);
  const auto sentences = gen.text(cfg.tokens, cfg.n_characters);
  SynthNovel out;
  out.text = render_text(sentences);
  out.conllu = render_conllu(sentences);
  out.character_names = gen.names();
  std::vector<CharacterEntry> entries;
  for (const std::string& name : gen.names()) entries.push_back({character_token(slugify(name)), name, {name}});
  out.characters_json = characters_to_json(entries);
  if (cfg.wiki) {
    const std::size_t half = std::max<std::size_t>(2, cfg.n_characters / 2);
    out.wiki = render_text(gen.text(cfg.wiki_tokens, std::min(half, cfg.n_characters)));
  }
  return out;
}

std::vector<std::string> write_synth_dataset(const std::string& root, const std::vector<std::size_t>& counts,
                                             std::size_t replicates, const SynthConfig& base, std::uint64_t seed) {
  std::vector<std::string> ids;
  for (std::size_t k : counts) {
    for (std::size_t r = 0; r < replicates; ++r) {
      SynthConfig cfg = base;
      cfg.n_characters = k;
      char tag[32];
      std::snprintf(tag, sizeof tag, "synth_%03zu_%02zu", k, r);
      cfg.seed = derive_seed(seed, tag);
      const SynthNovel novel = synthesize_novel(cfg);
      const fs::path dir = fs::path(root) / tag;
      fs::create_directories(dir);
      auto write = [&](const char* name, const std::string& content) {
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) throw Error("IoError", "cannot write " + (dir / name).string());
        out << content;
      };
      write("novel.txt", novel.text);
      write("novel.conllu", novel.conllu);
      write("characters.json", novel.characters_json);
      if (novel.wiki) write("wiki.txt", *novel.wiki);
      ids.emplace_back(tag);
    }
  }
  return ids;
}

}  // namespace doppelkit
