#include <doctest.h>

#include <cmath>

#include "doppelkit/doppel.hpp"
#include "doppelkit/error.hpp"
#include "doppelkit/random.hpp"
#include "oracles.hpp"

using namespace doppelkit;

namespace {

EmbeddingSpace dense(PartId part, const std::vector<std::pair<std::string, std::vector<double>>>& rows) {
  EmbeddingSpace s;
  s.part = part;
  s.model_id = "test";
  s.dim = rows.front().second.size();
  for (const auto& [id, v] : rows) s.dense[id] = v;
  return s;
}

EmbeddingSpace gaussian(Rng& rng, PartId part, std::size_t n, std::size_t dim) {
  EmbeddingSpace s;
  s.part = part;
  s.dim = dim;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> v(dim);
    for (auto& x : v) x = rng.normal();
    s.dense["e" + std::to_string(i)] = v;
  }
  return s;
}

void check_result_invariants(const DoppelResult& r) {
  double sum = 0;
  std::size_t firsts = 0;
  for (const auto& [id, rr] : r.per_entity_rr) {
    CHECK(rr > 0);
    CHECK(rr <= 1);
    sum += rr;
    firsts += rr == 1.0;
  }
  CHECK(r.n == r.per_entity_rr.size());
  CHECK(r.mrr == doctest::Approx(sum / r.n).epsilon(1e-15));
  CHECK(r.accuracy_at_1 <= r.mrr + 1e-15);
  CHECK(r.mrr <= 1.0);
  CHECK(r.mrr >= 1.0 / r.n - 1e-15);
  if (r.direction != Direction::symmetric) CHECK(r.accuracy_at_1 == static_cast<double>(firsts) / r.n);
}

}  // namespace

TEST_CASE("chance baseline") {
  CHECK(chance_baseline(2).expected_mrr == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(chance_baseline(4).expected_mrr == doctest::Approx(25.0 / 48.0).epsilon(1e-15));
  CHECK(chance_baseline(10).expected_mrr == doctest::Approx(0.29289682539682).epsilon(1e-12));
  CHECK_THROWS_AS(chance_baseline(1), TooFewEntities);
  for (std::size_t n = 2; n < 50; ++n) CHECK(chance_baseline(n + 1).expected_mrr < chance_baseline(n).expected_mrr);
}

TEST_CASE("identical spaces match perfectly") {
  const auto a = dense(PartId::A, {{"x", {1, 0, 0}}, {"y", {0, 1, 0}}, {"z", {1, 1, 1}}});
  auto b = a;
  b.part = PartId::B;
  const auto s = doppelganger_scores(a, b, Category::proper_names);
  for (Direction d : {Direction::a_to_b, Direction::b_to_a, Direction::symmetric}) {
    CHECK(s.get(d).mrr == 1.0);
    CHECK(s.get(d).accuracy_at_1 == 1.0);
    CHECK(s.get(d).n == 3);
  }
  CHECK(quality_score(a, b, Category::common_nouns).mrr == 1.0);
}

TEST_CASE("forced swap gives reciprocal rank one half") {
  const auto a = dense(PartId::A, {{"e1", {1, 0}}, {"e2", {0, 1}}});
  const auto b = dense(PartId::B, {{"e1", {0.1, 1}}, {"e2", {1, 0.1}}});
  const auto r = doppelganger_score(a, b, Category::proper_names);
  CHECK(r.per_entity_rr.at("e1") == 0.5);
  CHECK(r.per_entity_rr.at("e2") == 0.5);
  CHECK(r.mrr == 0.5);
  CHECK(r.accuracy_at_1 == 0.0);
}

TEST_CASE("ties take the pessimistic rank") {
  CHECK(pessimistic_ranks({{1, 1, 1}, {1, 1, 1}, {1, 1, 1}}) == std::vector<std::size_t>{3, 3, 3});
  CHECK(pessimistic_ranks({{0.9, 0.9, 0.1}, {0.2, 0.5, 0.7}, {0, 0, 1}}) == std::vector<std::size_t>{2, 2, 1});
  const auto a = dense(PartId::A, {{"x", {1, 0}}, {"y", {1, 0}}});
  const auto r = doppelganger_score(a, a, Category::proper_names);
  CHECK(r.mrr == 0.5);
}

TEST_CASE("candidates are the intersection; errors") {
  const auto novel = dense(PartId::novel, {{"a", {1, 0, 0}}, {"b", {0, 1, 0}}, {"c", {0, 0, 1}}, {"d", {1, 1, 0}}});
  const auto wiki = dense(PartId::wiki, {{"a", {1, 0, 0}}, {"c", {0, 0, 1}}, {"e", {1, 1, 1}}});
  const auto s = quality_scores(novel, wiki, Category::proper_names);
  CHECK(s.symmetric.n == 2);
  CHECK(s.only_in_a == std::vector<std::string>{"b", "d"});
  CHECK(s.only_in_b == std::vector<std::string>{"e"});

  const auto one = dense(PartId::B, {{"a", {1, 0, 0}}});
  CHECK_THROWS_AS(doppelganger_score(novel, one, Category::proper_names), TooFewEntities);
  const auto zero = dense(PartId::B, {{"a", {1, 0, 0}}, {"b", {0, 0, 0}}});
  try {
    doppelganger_score(novel, zero, Category::proper_names);
    FAIL("expected ZeroVector");
  } catch (const ZeroVector& e) {
    CHECK(e.entity() == "b");
  }
}

TEST_CASE("scores are invariant under rotation and positive scaling") {
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = gaussian(rng, PartId::A, 8, 4);
    const auto b = gaussian(rng, PartId::B, 8, 4);
    const auto base = doppelganger_scores(a, b, Category::common_nouns);
    check_result_invariants(base.a_to_b);
    check_result_invariants(base.b_to_a);
    check_result_invariants(base.symmetric);
    CHECK(base.symmetric.mrr == doctest::Approx((base.a_to_b.mrr + base.b_to_a.mrr) / 2).epsilon(1e-15));

    // Rotation in the (0,1) plane, applied to both spaces; random scaling.
    const double t = rng.uniform(0, 6.28);
    auto rotate = [&](EmbeddingSpace s) {
      for (auto& [id, v] : s.dense) {
        const double x = v[0];
        const double y = v[1];
        const double scale = rng.uniform(0.1, 10);
        v[0] = std::cos(t) * x - std::sin(t) * y;
        v[1] = std::sin(t) * x + std::cos(t) * y;
        for (auto& c : v) c *= scale;
      }
      return s;
    };
    const auto moved = doppelganger_scores(rotate(a), rotate(b), Category::common_nouns);
    CHECK(moved.a_to_b.per_entity_rr == base.a_to_b.per_entity_rr);
    CHECK(moved.b_to_a.per_entity_rr == base.b_to_a.per_entity_rr);
  }
}

TEST_CASE("sparse spaces are compared by column label") {
  EmbeddingSpace a;
  a.is_sparse = true;
  a.part = PartId::A;
  a.columns = {"cat", "dog"};
  a.dim = 2;
  a.sparse["x"] = {{0}, {1.0}};
  a.sparse["y"] = {{1}, {1.0}};
  EmbeddingSpace b;
  b.is_sparse = true;
  b.part = PartId::B;
  b.columns = {"dog", "eel", "cat"};
  b.dim = 3;
  b.sparse["x"] = {{2}, {2.0}};
  b.sparse["y"] = {{0, 1}, {1.0, 0.5}};
  const auto r = doppelganger_score(a, b, Category::proper_names);
  CHECK(r.mrr == 1.0);
}

TEST_CASE("random Gaussian spaces score at the analytic chance level") {
  Rng rng(1);
  double total = 0;
  for (int seed = 0; seed < 300; ++seed) {
    total += doppelganger_score(gaussian(rng, PartId::A, 10, 16), gaussian(rng, PartId::B, 10, 16),
                                Category::proper_names, Direction::a_to_b)
                 .mrr;
  }
  CHECK(std::abs(total / 300 - oracle::chance_mrr(10)) < 0.03);
}
