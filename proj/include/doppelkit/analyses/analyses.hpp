#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "doppelkit/corpus.hpp"
#include "doppelkit/doppel.hpp"
#include "doppelkit/dsm/space.hpp"
#include "doppelkit/entities.hpp"

namespace doppelkit {

// Column order of the POS profile.
inline constexpr std::array<Upos, 6> kProfileTags = {Upos::ADJ, Upos::ADV, Upos::DET,
                                                     Upos::NOUN, Upos::PRON, Upos::VERB};

struct PosProfile {
  // Row 0: proper names, row 1: common nouns.
  std::array<std::array<std::uint64_t, 6>, 2> counts{};

  // Row-relative frequencies; an all-zero row stays zero.
  std::array<std::array<double, 6>, 2> normalized() const;
  // Same, with the DET column left out of the denominator and set to zero.
  std::array<std::array<double, 6>, 2> normalized_without_det() const;
  std::uint64_t total() const;
};

// A tagged source document with the mentions found in it. Span positions are
// token_index values of `doc`; the category of each entity follows from its
// id (__ent_ characters, __noun_ common nouns).
struct ProfileInput {
  const TaggedDocument* doc;
  std::vector<const MentionIndex*> mentions;
};

// For every mention span, the up-to-two tokens on each side, excluding the
// span itself, add one to the cell (category of the mention, UPOS of the
// token) when that UPOS is tracked. Throws RequiresTaggedInput.
PosProfile pos_profile(const std::vector<ProfileInput>& inputs);

struct RsaResult {
  std::string novel_id;
  std::string model_id;
  Category category = Category::proper_names;
  double rho = 0;
  std::size_t n = 0;
  std::size_t n_pairs = 0;
};

// Spearman correlation between the upper-triangle cosine similarities of the
// shared entities in each space (same entity order on both sides).
// Throws TooFewEntities for fewer than 3 shared entities.
RsaResult rsa(const EmbeddingSpace& a, const EmbeddingSpace& b, Category category = Category::proper_names);

struct NovelCovariates {
  std::string novel_id;
  std::size_t length_tokens = 0;
  std::size_t n_characters = 0;
  double mention_sd = 0;  // population SD of per-character mention counts
};

NovelCovariates compute_covariates(std::string novel_id, std::size_t length_tokens,
                                   const std::vector<std::size_t>& character_mentions);

inline constexpr std::array<const char*, 3> kCovariateNames = {"length_tokens", "n_characters", "mention_sd"};

struct CorrelationCell {
  std::string model_id;
  Category category = Category::proper_names;
  std::string covariate;
  std::size_t n = 0;
  std::optional<double> spearman_rho;
  std::optional<double> pearson_r;
  std::optional<double> p_value;
  std::string error;  // error kind when the cell could not be computed
  std::vector<std::string> novels;
  std::vector<double> x;  // covariate
  std::vector<double> y;  // mrr
};

struct CorrelationReport {
  std::vector<CorrelationCell> cells;
};

// Per model x category x covariate, Spearman (with permutation p) and
// Pearson of the results' mrr against the covariate across novels. Cells that
// cannot be computed carry an error kind. Throws TooFewNovels when no group
// joins at least 3 novels.
CorrelationReport correlate_scores(const std::vector<DoppelResult>& results,
                                   const std::vector<NovelCovariates>& covariates, std::size_t n_perm,
                                   std::uint64_t seed);

}  // namespace doppelkit
