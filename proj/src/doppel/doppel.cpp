#include <algorithm>
#include <cmath>

#include "doppelkit/doppel.hpp"
#include "doppelkit/error.hpp"
#include "doppelkit/kernels/kernels.hpp"

namespace doppelkit {

std::string_view to_string(Category c) { return c == Category::proper_names ? "proper_names" : "common_nouns"; }

std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::a_to_b:
      return "a_to_b";
    case Direction::b_to_a:
      return "b_to_a";
    case Direction::symmetric:
      return "symmetric";
  }
  return "symmetric";
}

std::optional<Direction> parse_direction(std::string_view name) {
  for (Direction d : {Direction::a_to_b, Direction::b_to_a, Direction::symmetric}) {
    if (name == to_string(d)) return d;
  }
  return std::nullopt;
}

const DoppelResult& DoppelScores::get(Direction d) const {
  switch (d) {
    case Direction::a_to_b:
      return a_to_b;
    case Direction::b_to_a:
      return b_to_a;
    case Direction::symmetric:
      return symmetric;
  }
  return symmetric;
}

std::vector<std::size_t> pessimistic_ranks(const std::vector<std::vector<double>>& sim) {
  const std::size_t n = sim.size();
  std::vector<std::size_t> ranks(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double own = sim[i][i];
    std::size_t rank = 1;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i && sim[i][j] >= own) ++rank;
    }
    ranks[i] = rank;
  }
  return ranks;
}

namespace {

void normalize_rows(std::vector<std::vector<double>>& rows, const std::vector<std::string>& ids) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double norm = std::sqrt(kernels::sum_squares(rows[i]));
    if (!(norm > 0) || !std::isfinite(norm)) throw ZeroVector(ids[i]);
    for (double& x : rows[i]) x /= norm;
  }
}

void finish(DoppelResult& r) {
  double sum = 0;
  std::size_t hits = 0;
  for (const auto& [id, rr] : r.per_entity_rr) {
    sum += rr;
    if (rr == 1.0) ++hits;
  }
  r.n = r.per_entity_rr.size();
  r.mrr = sum / static_cast<double>(r.n);
  r.accuracy_at_1 = static_cast<double>(hits) / static_cast<double>(r.n);
}

}  // namespace

DoppelScores doppelganger_scores(const EmbeddingSpace& a, const EmbeddingSpace& b, Category category) {
  DoppelScores out;
  std::vector<std::string> ids;
  for (const auto& id : a.ids()) {
    (b.contains(id) ? ids : out.only_in_a).push_back(id);
  }
  for (const auto& id : b.ids()) {
    if (!a.contains(id)) out.only_in_b.push_back(id);
  }
  if (ids.size() < 2) throw TooFewEntities(ids.size(), 2);

  AlignedPair pair = align_pair(a, b, ids);
  normalize_rows(pair.a, ids);
  normalize_rows(pair.b, ids);
  const std::size_t n = ids.size();
  std::vector<std::vector<double>> sim(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) sim[i][j] = kernels::dot(pair.a[i], pair.b[j]);
  }
  std::vector<std::vector<double>> sim_t(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) sim_t[i][j] = sim[j][i];
  }
  const auto rank_ab = pessimistic_ranks(sim);
  const auto rank_ba = pessimistic_ranks(sim_t);

  for (DoppelResult* r : {&out.a_to_b, &out.b_to_a, &out.symmetric}) {
    r->model_id = a.model_id;
    r->category = category;
  }
  out.a_to_b.direction = Direction::a_to_b;
  out.b_to_a.direction = Direction::b_to_a;
  out.symmetric.direction = Direction::symmetric;
  for (std::size_t i = 0; i < n; ++i) {
    const double ab = 1.0 / static_cast<double>(rank_ab[i]);
    const double ba = 1.0 / static_cast<double>(rank_ba[i]);
    out.a_to_b.per_entity_rr[ids[i]] = ab;
    out.b_to_a.per_entity_rr[ids[i]] = ba;
    out.symmetric.per_entity_rr[ids[i]] = 0.5 * (ab + ba);
  }
  finish(out.a_to_b);
  finish(out.b_to_a);
  finish(out.symmetric);
  return out;
}

DoppelResult doppelganger_score(const EmbeddingSpace& a, const EmbeddingSpace& b, Category category,
                                Direction direction) {
  return doppelganger_scores(a, b, category).get(direction);
}

DoppelScores quality_scores(const EmbeddingSpace& novel, const EmbeddingSpace& wiki, Category category) {
  return doppelganger_scores(novel, wiki, category);
}

DoppelResult quality_score(const EmbeddingSpace& novel, const EmbeddingSpace& wiki, Category category,
                           Direction direction) {
  return quality_scores(novel, wiki, category).get(direction);
}

BaselineEstimate chance_baseline(std::size_t n) {
  if (n < 2) throw TooFewEntities(n, 2);
  double h = 0;
  for (std::size_t i = n; i >= 1; --i) h += 1.0 / static_cast<double>(i);
  return {n, h / static_cast<double>(n)};
}

}  // namespace doppelkit
