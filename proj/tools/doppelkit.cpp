#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "doppelkit/app/config.hpp"
#include "doppelkit/app/pipeline.hpp"
#include "doppelkit/app/synth.hpp"
#include "doppelkit/error.hpp"

namespace {

using namespace doppelkit;

struct Options {
  std::string config;
  std::string dataset;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  bool export_mentions = false;
  std::string split;
};

RunConfig resolve(const Options& o) {
  RunConfig cfg = o.config.empty() ? RunConfig{} : load_config(o.config);
  if (!o.dataset.empty()) cfg.dataset_root = o.dataset;
  if (!o.out.empty()) cfg.output_dir = o.out;
  if (o.seed) cfg.seed = *o.seed;
  if (o.workers) cfg.workers = *o.workers;
  if (o.export_mentions) cfg.export_mentions = true;
  if (!o.split.empty()) {
    const auto rule = parse_split_rule(o.split);
    if (!rule) throw ConfigError("--split must be tokens or sentences");
    cfg.split = *rule;
  }
  if (cfg.dataset_root.empty()) throw ConfigError("no dataset given (set 'dataset' in the config or pass --dataset)");
  validate(cfg);
  return cfg;
}

void add_common(CLI::App* sub, Options& o, bool needs_config) {
  auto* c = sub->add_option("--config", o.config, "TOML configuration file");
  if (needs_config) c->required();
  sub->add_option("--dataset", o.dataset, "dataset root, overrides the config");
  sub->add_option("--out", o.out, "output directory, overrides the config");
  sub->add_option("--seed", o.seed, "run seed, overrides the config");
}

int report(const RunOutcome& r) {
  for (const auto& path : r.written) std::cout << path << "\n";
  const auto& ds = r.report["dataset"];
  std::cerr << "evaluated " << ds["n_evaluated"].get<std::size_t>() << " of " << ds["n_novels"].get<std::size_t>()
            << " novels";
  if (r.exit_code != 0) std::cerr << " (partial: see skipped and failed_cells in the report)";
  std::cerr << "\n";
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"doppelkit: co-reference matching tests for entity vectors"};
  app.require_subcommand(1);
  Options o;

  auto* run = app.add_subcommand("run", "split each novel in two halves and match entity vectors across them");
  add_common(run, o, true);
  run->add_option("--workers", o.workers, "worker threads (0 = all cores)");
  run->add_option("--split", o.split, "split rule: tokens or sentences");
  run->add_flag("--export-mentions", o.export_mentions, "also write mentions.jsonl for contextual extraction");

  auto* quality = app.add_subcommand("quality", "match entity vectors between each novel and its wiki page");
  add_common(quality, o, true);
  quality->add_option("--workers", o.workers, "worker threads (0 = all cores)");
  quality->add_flag("--export-mentions", o.export_mentions, "also write mentions.jsonl for contextual extraction");

  std::vector<std::size_t> counts = {5, 10, 20, 40};
  std::size_t replicates = 3;
  SynthConfig synth_cfg;
  auto* synth = app.add_subcommand("synth", "generate synthetic novels with planted characters and nouns");
  add_common(synth, o, false);
  synth->add_option("--characters", counts, "character counts to generate")->delimiter(',');
  synth->add_option("--replicates", replicates, "novels per character count");
  synth->add_option("--tokens", synth_cfg.tokens, "tokens per novel");
  synth->add_option("--signature-rate", synth_cfg.signature_rate, "probability that a slot uses the planted signature")
      ->check(CLI::Range(0.0, 1.0));
  synth->add_flag("--wiki", synth_cfg.wiki, "also write a wiki.txt mentioning half of the characters");

  std::string report_path;
  auto* plots = app.add_subcommand("emit-plots", "write plot-ready CSV files from a report");
  add_common(plots, o, false);
  plots->add_option("--report", report_path, "report.json to read (default <out>/report.json)");

  std::size_t min_count = 5;
  auto* boot = app.add_subcommand("bootstrap-characters", "draft characters.json files from capitalized runs");
  add_common(boot, o, false);
  boot->add_option("--min-count", min_count, "minimum occurrences of a candidate name");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) return report(cmd_run(resolve(o)));
    if (quality->parsed()) return report(cmd_quality(resolve(o)));
    if (synth->parsed()) {
      RunConfig base = o.config.empty() ? RunConfig{} : load_config(o.config);
      const std::string root = !o.out.empty() ? o.out : !o.dataset.empty() ? o.dataset : base.dataset_root;
      if (root.empty()) throw ConfigError("synth needs --out");
      for (const auto& id : write_synth_dataset(root, counts, replicates, synth_cfg, o.seed.value_or(base.seed))) {
        std::cout << id << "\n";
      }
      return 0;
    }
    if (plots->parsed()) {
      RunConfig base = o.config.empty() ? RunConfig{} : load_config(o.config);
      const std::string out = o.out.empty() ? base.output_dir : o.out;
      const std::string path = report_path.empty() ? out + "/report.json" : report_path;
      for (const auto& p : cmd_emit_plots(path, out)) std::cout << p << "\n";
      return 0;
    }
    if (boot->parsed()) {
      RunConfig base = o.config.empty() ? RunConfig{} : load_config(o.config);
      const std::string root = o.dataset.empty() ? base.dataset_root : o.dataset;
      if (root.empty()) throw ConfigError("bootstrap-characters needs --dataset");
      for (const auto& p : cmd_bootstrap_characters(root, min_count)) std::cout << p << "\n";
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "doppelkit: " << e.kind() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "doppelkit: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
