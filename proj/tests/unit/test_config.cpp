#include <doctest.h>

#include "doppelkit/app/config.hpp"
#include "doppelkit/error.hpp"

using namespace doppelkit;

TEST_CASE("defaults round-trip through TOML") {
  const RunConfig def;
  CHECK(parse_config(to_toml(def)) == def);
  CHECK(parse_config("") == def);
}

TEST_CASE("non-default values round-trip") {
  RunConfig cfg;
  cfg.dataset_root = "data/desk";
  cfg.output_dir = "elsewhere";
  cfg.seed = 9;
  cfg.split = SplitRule::sentences;
  cfg.min_mentions = 4;
  cfg.workers = 3;
  cfg.permutations = 99;
  cfg.export_mentions = true;
  cfg.models = {"count", "contextual"};
  cfg.count.window = 2;
  cfg.count.weighting = Weighting::raw;
  cfg.count.shards = 4;
  cfg.sgns.train.dim = 12;
  cfg.sgns.train.initial_lr = 0.1 / 3;
  cfg.sgns.align = false;
  cfg.additive.background = "bg.txt";
  cfg.additive.background_sgns.epochs = 2;
  cfg.contextual.file = "mentions.vec.jsonl";
  CHECK(parse_config(to_toml(cfg)) == cfg);
}

TEST_CASE("partial files override only what they name") {
  const auto cfg = parse_config("models = [\"count\"]\n[count]\nwindow = 3\n");
  CHECK(cfg.models == std::vector<std::string>{"count"});
  CHECK(cfg.count.window == 3);
  CHECK(cfg.count.max_context_vocab == CountModelConfig{}.max_context_vocab);
  CHECK(cfg.sgns == SgnsModelConfig{});
}

TEST_CASE("bad configs are rejected") {
  CHECK_THROWS_AS(parse_config("windw = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[count]\nwindo = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[counts]\nwindow = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[count]\nwindow = \"five\"\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[count]\nwindow = -1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[count]\nwindow = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[count]\nweighting = \"tfidf\"\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("split = \"halves\"\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("models = [\"glove\"]\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("models = []\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[sgns]\ndim = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[sgns]\nmin_lr = 0.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("this is not toml"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/doppelkit.toml"), Error);
}
