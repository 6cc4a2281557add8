#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "doppelkit/corpus.hpp"
#include "doppelkit/dsm/space.hpp"

namespace doppelkit {

struct SgnsConfig {
  std::size_t dim = 100;
  std::size_t window = 5;
  std::size_t epochs = 10;
  std::size_t negatives = 5;
  double initial_lr = 0.025;
  double min_lr = 1e-4;
  double subsample = 1e-3;  // 0 disables subsampling
  std::size_t min_count = 1;
  std::uint64_t seed = 1;

  bool operator==(const SgnsConfig&) const = default;
};

void validate(const SgnsConfig& cfg);

// Word vectors in row-major storage. `output` is empty for tables read from
// word2vec text files.
struct EmbeddingTable {
  std::size_t dim = 0;
  std::vector<std::string> words;
  std::vector<std::uint64_t> counts;
  std::vector<double> input;
  std::vector<double> output;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<double> epoch_loss;  // mean negative objective per pair

  std::size_t size() const { return words.size(); }
  const double* vector(std::size_t i) const { return input.data() + i * dim; }
  const double* find(const std::string& word) const;
};

// Per-pair skip-gram objective for centre input vector v, context output
// vector u_pos and negative output vectors u_neg:
//   ln s(u_pos . v) + sum_i ln s(-u_neg[i] . v)
double sgns_pair_objective(std::span<const double> v, std::span<const double> u_pos,
                           const std::vector<std::span<const double>>& u_neg);

struct SgnsGradient {
  std::vector<double> d_v;
  std::vector<double> d_pos;
  std::vector<std::vector<double>> d_neg;
};

// Analytic gradient of sgns_pair_objective.
SgnsGradient sgns_pair_gradient(std::span<const double> v, std::span<const double> u_pos,
                                const std::vector<std::span<const double>>& u_neg);

// One stochastic ascent step on the pair objective, in the order word2vec
// uses: each output vector moves using the pre-step v, and v moves by the
// accumulated step at the end. Returns the objective before the step.
// `scratch` must have the dimension of v.
double sgns_step(double* v, double* u_pos, const std::vector<double*>& u_neg, std::size_t dim, double lr,
                 double* scratch);

// Skip-gram with negative sampling over the sentences of `docs`.
// Token surfaces are the vocabulary. Entity tokens are never subsampled.
// Deterministic for a fixed config and seed.
EmbeddingTable train_sgns(const std::vector<const TaggedDocument*>& docs, const SgnsConfig& cfg);
EmbeddingTable train_sgns(const TaggedDocument& doc, const SgnsConfig& cfg);

// Input vectors of the targets; targets missing from the table are excluded.
EmbeddingSpace extract_sgns_space(const EmbeddingTable& table, const std::set<std::string>& targets,
                                  PartId part = PartId::A, std::string model_id = "sgns");

// Orthogonal map R (row-major dim x dim) minimising ||X R - Y|| over anchor
// words shared by both tables, where X rows come from `from` and Y rows from
// `to`, each L2-normalised. Anchors are non-entity words with count >= min_count
// in both tables, the most frequent first. Returns an empty vector if fewer
// than `dim` anchors exist, in which case no alignment is attempted.
struct Alignment {
  std::vector<double> rotation;
  std::size_t anchors = 0;
};

Alignment procrustes_alignment(const EmbeddingTable& from, const EmbeddingTable& to, std::size_t min_count = 5,
                               std::size_t max_anchors = 5000);

// Applies v <- v R to every dense vector of the space.
void rotate_space(EmbeddingSpace& space, const std::vector<double>& rotation);

// word2vec text format: "<vocab> <dim>" then "word v1 ... vd" per line.
EmbeddingTable read_word2vec_text(const std::string& path);
void write_word2vec_text(const EmbeddingTable& table, const std::string& path);

}  // namespace doppelkit
