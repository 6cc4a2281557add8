#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "doppelkit/dsm/space.hpp"

namespace doppelkit {

enum class Category { proper_names, common_nouns };
enum class Direction { a_to_b, b_to_a, symmetric };

std::string_view to_string(Category c);
std::string_view to_string(Direction d);
std::optional<Direction> parse_direction(std::string_view name);

struct DoppelResult {
  std::string novel_id;
  std::string model_id;
  Category category = Category::proper_names;
  Direction direction = Direction::symmetric;
  std::map<std::string, double> per_entity_rr;
  double accuracy_at_1 = 0;
  double mrr = 0;
  std::size_t n = 0;
};

// All three directions of one comparison plus the ids present on only one
// side (these are not candidates).
struct DoppelScores {
  DoppelResult a_to_b;
  DoppelResult b_to_a;
  DoppelResult symmetric;
  std::vector<std::string> only_in_a;
  std::vector<std::string> only_in_b;

  const DoppelResult& get(Direction d) const;
};

// Candidates are the ids present in both spaces. For each entity e, the
// candidates x are ranked by cos(v_A(e), v_B(x)) descending (A to B; B to A
// swaps the roles). Tied similarities take the worst rank of their block.
// The symmetric reciprocal rank is the mean of the two directional ones, and
// its accuracy@1 counts entities ranked first in both directions.
// Throws TooFewEntities (fewer than 2 candidates) or ZeroVector.
DoppelScores doppelganger_scores(const EmbeddingSpace& a, const EmbeddingSpace& b, Category category);

DoppelResult doppelganger_score(const EmbeddingSpace& a, const EmbeddingSpace& b, Category category,
                                Direction direction = Direction::symmetric);

// Same matching with a novel space on one side and a wiki space on the other.
DoppelScores quality_scores(const EmbeddingSpace& novel, const EmbeddingSpace& wiki, Category category);
DoppelResult quality_score(const EmbeddingSpace& novel, const EmbeddingSpace& wiki, Category category,
                           Direction direction = Direction::symmetric);

struct BaselineEstimate {
  std::size_t n = 0;
  double expected_mrr = 0;  // H_n / n
};

// Throws TooFewEntities for n < 2.
BaselineEstimate chance_baseline(std::size_t n);

// Ranks from a square similarity matrix (row = query, column = candidate);
// exposed for tests. Returns, per row i, the pessimistic rank of column i.
std::vector<std::size_t> pessimistic_ranks(const std::vector<std::vector<double>>& sim);

}  // namespace doppelkit
