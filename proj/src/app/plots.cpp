#include <filesystem>
#include <fstream>
#include <sstream>

#include "doppelkit/app/pipeline.hpp"
#include "doppelkit/error.hpp"

namespace fs = std::filesystem;

namespace doppelkit {

namespace {

std::string cell_text(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return v.dump();
  if (v.is_number()) return format_double(v.get<double>());
  return v.dump();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  return out + "\"";
}

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) : width_(header.size()) { row(header); }

  void row(const std::vector<std::string>& fields) {
    if (fields.size() != width_) throw Error("CsvError", "row width does not match header");
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) text_.push_back(',');
      text_ += csv_field(fields[i]);
    }
    text_.push_back('\n');
  }

  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("IoError", "cannot write " + path);
    out << text_;
  }

 private:
  std::size_t width_;
  std::string text_;
};

const Json& at(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(0, std::string("report lacks field \"") + key + "\"");
  return j[key];
}

Json direction_value(const Json& cell, const char* dir, const char* field) {
  if (!cell.contains("directions")) return nullptr;
  return cell["directions"][dir][field];
}

std::string error_kind(const Json& cell) {
  const Json& e = cell.contains("error") ? cell["error"] : Json(nullptr);
  return e.is_object() ? e.value("kind", "") : "";
}

}  // namespace

std::vector<std::string> cmd_emit_plots(const std::string& report_path, const std::string& out_dir) {
  std::ifstream in(report_path, std::ios::binary);
  if (!in) throw Error("IoError", "cannot open " + report_path);
  std::ostringstream buf;
  buf << in.rdbuf();
  Json report;
  try {
    report = Json::parse(buf.str());
  } catch (const Json::parse_error& e) {
    throw ParseError(0, std::string("corrupt report: ") + e.what());
  }
  if (!report.is_object() || report.value("schema", "") != std::string(kReportSchema)) {
    throw ParseError(0, "not a doppelkit/1 report");
  }
  const std::string command = at(report, "command").get<std::string>();
  fs::create_directories(out_dir);
  std::vector<std::string> written;
  auto save = [&](const CsvWriter& w, const char* name) {
    const std::string path = (fs::path(out_dir) / name).string();
    w.save(path);
    written.push_back(path);
  };

  CsvWriter scores({"novel", "model", "category", "n", "mrr", "accuracy_at_1", "chance_mrr", "mrr_a_to_b",
                    "mrr_b_to_a", "accuracy_at_1_a_to_b", "accuracy_at_1_b_to_a", "error"});
  CsvWriter rsa({"novel", "model", "category", "n", "n_pairs", "rho", "error"});
  for (const Json& cell : at(report, "results")) {
    const std::string novel = cell_text(at(cell, "novel"));
    const std::string model = cell_text(at(cell, "model"));
    const std::string category = cell_text(at(cell, "category"));
    const std::string n = cell_text(at(cell, "n"));
    scores.row({novel, model, category, n, cell_text(direction_value(cell, "symmetric", "mrr")),
                cell_text(direction_value(cell, "symmetric", "accuracy_at_1")),
                cell_text(cell.contains("chance_mrr") ? cell["chance_mrr"] : Json(nullptr)),
                cell_text(direction_value(cell, "a_to_b", "mrr")), cell_text(direction_value(cell, "b_to_a", "mrr")),
                cell_text(direction_value(cell, "a_to_b", "accuracy_at_1")),
                cell_text(direction_value(cell, "b_to_a", "accuracy_at_1")), error_kind(cell)});
    if (cell.contains("rsa")) {
      const Json& r = cell["rsa"];
      rsa.row({novel, model, category, n, cell_text(r.contains("n_pairs") ? r["n_pairs"] : Json(nullptr)),
               cell_text(r.contains("rho") ? r["rho"] : Json(nullptr)),
               cell_text(r.contains("error") ? r["error"] : Json(nullptr))});
    } else {
      rsa.row({novel, model, category, n, "", "", error_kind(cell)});
    }
  }
  save(scores, command == "quality" ? "quality_scores.csv" : "doppel_scores.csv");
  save(rsa, command == "quality" ? "quality_rsa.csv" : "rsa.csv");

  if (report.contains("correlations")) {
    CsvWriter corr({"model", "category", "covariate", "n", "spearman_rho", "pearson_r", "p_value", "error"});
    for (const Json& c : at(report["correlations"], "cells")) {
      corr.row({cell_text(c["model"]), cell_text(c["category"]), cell_text(c["covariate"]), cell_text(c["n"]),
                cell_text(c["spearman_rho"]), cell_text(c["pearson_r"]), cell_text(c["p_value"]),
                cell_text(c["error"])});
    }
    save(corr, "correlations.csv");
  }
  if (report.contains("pos_profile") && report["pos_profile"].contains("counts")) {
    const Json& pos = report["pos_profile"];
    CsvWriter prof({"category", "tag", "count", "normalized", "normalized_without_det"});
    for (std::size_t r = 0; r < 2; ++r) {
      for (std::size_t c = 0; c < pos["columns"].size(); ++c) {
        prof.row({cell_text(pos["rows"][r]), cell_text(pos["columns"][c]), cell_text(pos["counts"][r][c]),
                  cell_text(pos["normalized"][r][c]), cell_text(pos["normalized_without_det"][r][c])});
      }
    }
    save(prof, "pos_profile.csv");
  }
  return written;
}

}  // namespace doppelkit
