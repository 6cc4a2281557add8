#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace doppelkit {

// Synthetic novels with planted structure: every character and every common
// noun has a small signature of verbs, adjectives and nouns it prefers, so
// co-reference is recoverable from context at a rate set by signature_rate.
struct SynthConfig {
  std::size_t n_characters = 10;
  std::size_t tokens = 20000;
  std::uint64_t seed = 1;
  double signature_rate = 0.2;
  double character_share = 0.35;  // fraction of sentences about a character
  bool wiki = false;
  std::size_t wiki_tokens = 3000;
};

struct SynthNovel {
  std::string text;     // novel.txt
  std::string conllu;   // novel.conllu, same tokens with gold UPOS
  std::string characters_json;
  std::optional<std::string> wiki;  // wiki.txt, mentions the first half of the characters
  std::vector<std::string> character_names;
};

SynthNovel synthesize_novel(const SynthConfig& cfg);

// Writes <root>/synth_<k>_<i>/ for each count k and replicate i, all other
// settings taken from `base`. Seeds are derived from `seed`, the count and the
// replicate. Returns the novel ids.
std::vector<std::string> write_synth_dataset(const std::string& root, const std::vector<std::size_t>& counts,
                                             std::size_t replicates, const SynthConfig& base, std::uint64_t seed);

}  // namespace doppelkit
