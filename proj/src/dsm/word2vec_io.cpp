#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "doppelkit/dsm/sgns.hpp"
#include "doppelkit/error.hpp"

namespace doppelkit {

namespace {

std::vector<std::string_view> fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

EmbeddingTable read_word2vec_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IoError", "cannot open " + path);
  EmbeddingTable table;
  std::string line;
  std::size_t line_no = 0;
  std::size_t declared = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto f = fields(line);
    if (line_no == 1) {
      if (f.size() != 2 || !parse_number(f[0], declared) || !parse_number(f[1], table.dim) || table.dim == 0) {
        throw ParseError(line_no, "expected '<vocab> <dim>' header");
      }
      continue;
    }
    if (f.empty()) continue;
    if (f.size() != table.dim + 1) {
      throw ParseError(line_no, "expected word and " + std::to_string(table.dim) + " values");
    }
    const std::string word(f[0]);
    if (table.index.count(word)) continue;
    for (std::size_t k = 1; k < f.size(); ++k) {
      double x = 0;
      if (!parse_number(f[k], x) || !std::isfinite(x)) throw ParseError(line_no, "bad number '" + std::string(f[k]) + "'");
      table.input.push_back(x);
    }
    table.index.emplace(word, table.words.size());
    table.words.push_back(word);
    table.counts.push_back(1);
  }
  if (line_no == 0) throw ParseError(1, "empty word2vec file");
  if (declared != table.size()) {
    throw ParseError(1, "header declares " + std::to_string(declared) + " words, file has " +
                            std::to_string(table.size()));
  }
  return table;
}

void write_word2vec_text(const EmbeddingTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("IoError", "cannot write " + path);
  out << table.size() << ' ' << table.dim << '\n';
  char buf[32];
  for (std::size_t i = 0; i < table.size(); ++i) {
    out << table.words[i];
    const double* v = table.vector(i);
    for (std::size_t k = 0; k < table.dim; ++k) {
      const auto res = std::to_chars(buf, buf + sizeof buf, v[k]);
      out << ' ' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
    }
    out << '\n';
  }
}

}  // namespace doppelkit
