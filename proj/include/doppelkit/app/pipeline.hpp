#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "doppelkit/app/config.hpp"

namespace doppelkit {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "doppelkit/1";

// One directory of the dataset: <root>/<novel_id>/{novel.conllu|novel.txt,
// wiki.conllu|wiki.txt, characters.json}. The tagged file wins when both
// exist.
struct NovelSource {
  std::string novel_id;
  std::string dir;
  std::optional<std::string> text_path;
  std::optional<std::string> wiki_path;
  std::optional<std::string> characters_path;
};

// Sub-directories of `root` in byte order of their names.
std::vector<NovelSource> discover_dataset(const std::string& root);

struct RunOutcome {
  Json report;
  int exit_code = 0;  // 0 complete, 2 partial
  std::vector<std::string> written;
};

// Both write report.json, manifest.json and, when enabled, mentions.jsonl to
// cfg.output_dir. Throws EmptyRun when no novel could be evaluated.
RunOutcome cmd_run(const RunConfig& cfg);
RunOutcome cmd_quality(const RunConfig& cfg);

// Plot-ready CSV files for a report; returns the paths written.
std::vector<std::string> cmd_emit_plots(const std::string& report_path, const std::string& out_dir);

// Writes characters.draft.json next to each novel text; returns the paths.
std::vector<std::string> cmd_bootstrap_characters(const std::string& dataset_root, std::size_t min_count);

// Calls fn(i) for i in [0, n) on up to `workers` threads (0 = hardware
// concurrency). Exceptions escaping fn are rethrown after all work ends.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn);

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::string& path);

// Shortest round-trip decimal form.
std::string format_double(double x);

}  // namespace doppelkit
