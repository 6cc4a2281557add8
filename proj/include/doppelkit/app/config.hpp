#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "doppelkit/corpus.hpp"
#include "doppelkit/dsm/count_model.hpp"
#include "doppelkit/dsm/sgns.hpp"

namespace doppelkit {

struct SgnsModelConfig {
  SgnsConfig train;
  bool align = true;  // rotate part B onto part A before scoring
  std::size_t align_min_count = 5;
  std::size_t align_max_anchors = 5000;

  bool operator==(const SgnsModelConfig&) const = default;
};

struct AdditiveModelConfig {
  std::size_t window = 5;
  // word2vec text file; empty means leave-one-out SGNS on the other novels
  std::string background;
  SgnsConfig background_sgns;

  bool operator==(const AdditiveModelConfig&) const = default;
};

struct ContextualModelConfig {
  std::string file;  // interchange JSON Lines

  bool operator==(const ContextualModelConfig&) const = default;
};

struct RunConfig {
  std::string dataset_root;
  std::string output_dir = "out";
  std::uint64_t seed = 42;
  SplitRule split = SplitRule::tokens;
  std::size_t min_mentions = 2;
  std::size_t workers = 0;  // 0 = hardware concurrency
  std::size_t permutations = 10000;
  bool export_mentions = false;
  std::string stoplist;  // empty = bundled English list
  std::vector<std::string> models = {"count", "sgns", "additive"};
  CountModelConfig count;
  SgnsModelConfig sgns;
  AdditiveModelConfig additive;
  ContextualModelConfig contextual;

  bool operator==(const RunConfig&) const = default;
};

inline const std::vector<std::string>& known_models() {
  static const std::vector<std::string> names = {"count", "sgns", "additive", "contextual"};
  return names;
}

// Throws ConfigError on unknown keys, wrong types or invalid values.
RunConfig parse_config(std::string_view toml_text);
RunConfig load_config(const std::string& path);
std::string to_toml(const RunConfig& cfg);
void validate(const RunConfig& cfg);

}  // namespace doppelkit
