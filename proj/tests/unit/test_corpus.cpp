#include <doctest.h>

#include <numeric>

#include "doppelkit/corpus.hpp"
#include "doppelkit/error.hpp"
#include "doppelkit/random.hpp"

using namespace doppelkit;

namespace {

std::vector<std::string> surfaces(const TaggedDocument& d) {
  std::vector<std::string> out;
  for (const auto& t : d.tokens) out.push_back(t.surface);
  return out;
}

std::vector<std::size_t> sentence_ids(const TaggedDocument& d) {
  std::vector<std::size_t> out;
  for (const auto& t : d.tokens) out.push_back(t.sentence_index);
  return out;
}

// Sentences of the given token counts, words named w<i>.
TaggedDocument doc_with_sentences(const std::vector<std::size_t>& sizes) {
  TaggedDocument d;
  std::size_t k = 0;
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    for (std::size_t i = 0; i < sizes[s]; ++i, ++k) d.tokens.push_back({"w" + std::to_string(k), {}, {}, s, k});
  }
  return d;
}

}  // namespace

TEST_CASE("tokenize_plain on the two-sentence example") {
  const auto d = tokenize_plain("Ada ran. Bo sat.");
  CHECK(surfaces(d) == std::vector<std::string>{"Ada", "ran", ".", "Bo", "sat", "."});
  CHECK(sentence_ids(d) == std::vector<std::size_t>{0, 0, 0, 1, 1, 1});
  CHECK_FALSE(d.tagged);
  CHECK(d.sentence_count() == 2);
}

TEST_CASE("tokenize_plain edge cases") {
  CHECK_THROWS_AS(tokenize_plain(""), EmptyDocument);
  CHECK_THROWS_AS(tokenize_plain(" \n\t "), EmptyDocument);
  const auto one = tokenize_plain("Hello");
  CHECK(one.tokens.size() == 1);
  CHECK(one.sentence_count() == 1);

  // lowercase follower: no boundary
  CHECK(tokenize_plain("It was 3 p.m. and late.").sentence_count() == 1);
  // apostrophes stay inside words, not at their edges
  CHECK(surfaces(tokenize_plain("don't 'twas")) == std::vector<std::string>{"don't", "'", "twas"});
  // surfaces are kept verbatim
  CHECK(surfaces(tokenize_plain("ÉLAN über")) == std::vector<std::string>{"ÉLAN", "über"});
  CHECK_THROWS_AS(tokenize_plain("bad \xff byte"), ParseError);
}

TEST_CASE("tokenize_plain token indices increase and sentences are contiguous") {
  const auto d = tokenize_plain("One two! Three? Four, five. six seven. Eight");
  for (std::size_t i = 1; i < d.tokens.size(); ++i) {
    CHECK(d.tokens[i].token_index == d.tokens[i - 1].token_index + 1);
    CHECK(d.tokens[i].sentence_index >= d.tokens[i - 1].sentence_index);
    CHECK(d.tokens[i].sentence_index <= d.tokens[i - 1].sentence_index + 1);
  }
  CHECK(d.sentence_count() == 4);
}

TEST_CASE("detokenize then tokenize is a fixed point") {
  const char* texts[] = {
      "Ada ran. Bo sat.",
      "\"Well,\" said Mr. Darcy, \"it's late!\" She left... Then? Nothing.",
      "A.B. Smith met J. R. R. Tolkien. They talked about 3.14 and e.g. pie.",
      "Ünïcödé wörds — and dashes; also (parentheses) and 'quotes'.",
  };
  for (const char* t : texts) {
    const auto first = tokenize_plain(t);
    const auto second = tokenize_plain(detokenize(first));
    CHECK(surfaces(second) == surfaces(first));
    CHECK(sentence_ids(second) == sentence_ids(first));
    const auto third = tokenize_plain(detokenize(second));
    CHECK(detokenize(third) == detokenize(second));
  }
}

TEST_CASE("parse_conllu maps FORM, LEMMA and UPOS") {
  const std::string text =
      "# sent_id = 1\n"
      "1\tThe\tthe\tDET\t_\t_\t2\tdet\t_\t_\n"
      "2\tdog\tdog\tNOUN\t_\t_\t3\tnsubj\t_\t_\n"
      "3\tbarked\tbark\tVERB\t_\t_\t0\troot\t_\t_\n"
      "4\t.\t.\tPUNCT\t_\t_\t3\tpunct\t_\t_\n"
      "\n"
      "1\tIt\tit\tPRON\t_\t_\t2\tnsubj\t_\t_\n"
      "2\tran\trun\tVERB\t_\t_\t0\troot\t_\t_\n"
      "3\t.\t.\tPUNCT\t_\t_\t2\tpunct\t_\t_\n";
  const auto d = parse_conllu(text, "fixture");
  REQUIRE(d.tokens.size() == 7);
  CHECK(d.tagged);
  CHECK(d.doc_id == "fixture");
  CHECK(d.tokens[2].lemma == "bark");
  CHECK(d.tokens[2].upos == Upos::VERB);
  CHECK(sentence_ids(d) == std::vector<std::size_t>{0, 0, 0, 0, 1, 1, 1});

  const auto again = parse_conllu(to_conllu(d), "fixture");
  CHECK(again.tokens == d.tokens);
}

TEST_CASE("parse_conllu errors and multiword ranges") {
  SUBCASE("nine columns") {
    const std::string bad = "1\tA\ta\tDET\t_\t_\t0\troot\t_\t_\n2\tdog\tdog\tNOUN\t_\t_\t1\tdep\t_\n";
    try {
      parse_conllu(bad);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("empty") { CHECK_THROWS_AS(parse_conllu("# only a comment\n\n"), EmptyDocument); }
  SUBCASE("range line skipped") {
    const std::string text =
        "1\tI\tI\tPRON\t_\t_\t0\troot\t_\t_\n"
        "2-3\tdon't\t_\t_\t_\t_\t_\t_\t_\t_\n"
        "2\tdo\tdo\tAUX\t_\t_\t0\troot\t_\t_\n"
        "3\tn't\tnot\tPART\t_\t_\t0\troot\t_\t_\n"
        "3.1\tgo\tgo\tVERB\t_\t_\t_\t_\t_\t_\n";
    const auto d = parse_conllu(text);
    CHECK(surfaces(d) == std::vector<std::string>{"I", "do", "n't"});
  }
  SUBCASE("missing tags leave the document untagged") {
    const auto d = parse_conllu("1\tHi\t_\t_\t_\t_\t_\t_\t_\t_\n");
    CHECK_FALSE(d.tagged);
    CHECK_FALSE(d.tokens[0].lemma.has_value());
  }
}

TEST_CASE("split_document examples") {
  SUBCASE("two equal sentences") {
    const auto s = split_document(doc_with_sentences({10, 10}));
    CHECK(s.split_sentence_index == 0);
    CHECK(s.part_a.tokens.size() == 10);
  }
  SUBCASE("4 4 4 4 5") {
    const auto d = doc_with_sentences({4, 4, 4, 4, 5});
    CHECK(split_imbalances(d, SplitRule::tokens) == std::vector<std::size_t>{13, 5, 3, 11});
    const auto s = split_document(d);
    CHECK(s.split_sentence_index == 2);
    CHECK(s.part_a.tokens.size() == 12);
    CHECK(s.part_b.tokens.size() == 9);
  }
  SUBCASE("one sentence") { CHECK_THROWS_AS(split_document(doc_with_sentences({7})), UnsplittableDocument); }
  SUBCASE("sentence rule") {
    const auto s = split_document(doc_with_sentences({1, 1, 1, 30}), SplitRule::sentences);
    CHECK(s.split_sentence_index == 1);
  }
}

TEST_CASE("split_document is the brute-force argmin and preserves tokens") {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::size_t> sizes(2 + rng.below(12));
    for (auto& s : sizes) s = 1 + rng.below(9);
    const auto d = doc_with_sentences(sizes);
    const std::size_t total = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});

    std::size_t best = 0;
    std::size_t best_gap = SIZE_MAX;
    std::size_t prefix = 0;
    for (std::size_t b = 0; b + 1 < sizes.size(); ++b) {
      prefix += sizes[b];
      const std::size_t gap = prefix > total - prefix ? 2 * prefix - total : total - 2 * prefix;
      if (gap < best_gap) {
        best_gap = gap;
        best = b;
      }
    }
    const auto s = split_document(d);
    CHECK(split_imbalances(d, SplitRule::tokens).size() == sizes.size() - 1);
    CHECK(s.split_sentence_index == best);
    CHECK_FALSE(s.part_a.tokens.empty());
    CHECK_FALSE(s.part_b.tokens.empty());
    std::vector<Token> joined = s.part_a.tokens;
    joined.insert(joined.end(), s.part_b.tokens.begin(), s.part_b.tokens.end());
    CHECK(joined == d.tokens);
  }
}
