#include <charconv>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "doppelkit/dsm/contextual.hpp"
#include "doppelkit/error.hpp"

namespace doppelkit {

namespace {

void append_number(std::string& out, double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  out.append(buf, static_cast<std::size_t>(res.ptr - buf));
}

}  // namespace

std::string to_interchange_line(const InterchangeRecord& record) {
  nlohmann::json strings = {record.novel, std::string(to_string(record.part)), record.entity};
  std::string out = "{\"novel\":" + strings[0].dump() + ",\"part\":" + strings[1].dump() +
                    ",\"entity\":" + strings[2].dump() + ",\"mention\":" + std::to_string(record.mention) +
                    ",\"dim\":" + std::to_string(record.values.size()) + ",\"values\":[";
  for (std::size_t i = 0; i < record.values.size(); ++i) {
    if (i) out.push_back(',');
    append_number(out, record.values[i]);
  }
  out += "]}";
  return out;
}

InterchangeRecord parse_interchange_line(std::string_view line, std::size_t line_no) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(line_no, e.what());
  }
  auto require = [&](const char* key, bool ok) {
    if (!ok) throw ParseError(line_no, std::string("missing or invalid field \"") + key + "\"");
  };
  require("record", j.is_object());
  require("novel", j.contains("novel") && j["novel"].is_string());
  require("part", j.contains("part") && j["part"].is_string());
  require("entity", j.contains("entity") && j["entity"].is_string());
  require("mention", j.contains("mention") && j["mention"].is_number_integer());
  require("dim", j.contains("dim") && j["dim"].is_number_unsigned());
  require("values", j.contains("values") && j["values"].is_array());

  InterchangeRecord r;
  r.novel = j["novel"].get<std::string>();
  const auto part = parse_part(j["part"].get<std::string>());
  require("part", part.has_value());
  r.part = *part;
  r.entity = j["entity"].get<std::string>();
  r.mention = j["mention"].get<long long>();
  const auto dim = j["dim"].get<std::size_t>();
  for (const auto& v : j["values"]) {
    if (!v.is_number()) throw ParseError(line_no, "non-numeric vector component");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ParseError(line_no, "non-finite vector component");
    r.values.push_back(x);
  }
  if (dim == 0 || r.values.size() != dim) {
    throw ParseError(line_no, "dim " + std::to_string(dim) + " does not match " + std::to_string(r.values.size()) +
                                  " values");
  }
  return r;
}

EmbeddingSpace import_contextual_space(std::istream& in, std::optional<std::string> novel, PartId part,
                                       std::string model_id) {
  EmbeddingSpace space;
  space.part = part;
  space.model_id = std::move(model_id);
  std::map<std::string, std::size_t> n_mentions;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    InterchangeRecord r = parse_interchange_line(line, line_no);
    if (r.part != part || (novel && r.novel != *novel)) continue;
    if (space.dim == 0) space.dim = r.values.size();
    if (r.values.size() != space.dim) throw DimMismatch(r.entity, space.dim, r.values.size());
    auto& acc = space.dense[r.entity];
    if (acc.empty()) acc.assign(space.dim, 0.0);
    for (std::size_t i = 0; i < space.dim; ++i) acc[i] += r.values[i];
    ++n_mentions[r.entity];
  }
  if (space.dense.empty()) throw EmptySpace();
  for (auto it = space.dense.begin(); it != space.dense.end();) {
    auto& v = it->second;
    const double n = static_cast<double>(n_mentions[it->first]);
    double norm = 0;
    for (double& x : v) {
      x /= n;
      norm += x * x;
    }
    norm = std::sqrt(norm);
    if (norm == 0) {
      space.excluded[it->first] = "zero mean vector";
      it = space.dense.erase(it);
      continue;
    }
    for (double& x : v) x /= norm;
    ++it;
  }
  return space;
}

EmbeddingSpace import_contextual_space(const std::string& path, std::optional<std::string> novel, PartId part,
                                       std::string model_id) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IoError", "cannot open " + path);
  return import_contextual_space(in, std::move(novel), part, std::move(model_id));
}

}  // namespace doppelkit
