#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace doppelkit {

enum class PartId { A, B, novel, wiki };

std::string_view to_string(PartId part);
std::optional<PartId> parse_part(std::string_view name);

struct SparseRow {
  std::vector<std::uint32_t> index;  // strictly increasing column ids
  std::vector<double> value;
};

// One side of a comparison (E_A, E_B, novel or wiki) for one model. Dense
// spaces fill `dense`; sparse spaces fill `sparse` with column ids that refer
// to `columns`, the context labels. Entities that could not be represented
// are listed in `excluded` with a reason instead of being given a vector.
struct EmbeddingSpace {
  PartId part = PartId::A;
  std::string model_id;
  bool is_sparse = false;
  std::size_t dim = 0;
  std::vector<std::string> columns;
  std::map<std::string, std::vector<double>> dense;
  std::map<std::string, SparseRow> sparse;
  std::map<std::string, std::string> excluded;
  std::vector<std::string> warnings;

  std::vector<std::string> ids() const;
  bool contains(const std::string& id) const;
  std::size_t size() const { return is_sparse ? sparse.size() : dense.size(); }
};

// Vectors of `ids` from two spaces in one coordinate system: dense spaces as
// they are (dims must agree), sparse spaces over the union of their column
// labels so that equal labels line up. Rows are in `ids` order.
struct AlignedPair {
  std::size_t dim = 0;
  std::vector<std::vector<double>> a;
  std::vector<std::vector<double>> b;
};

AlignedPair align_pair(const EmbeddingSpace& a, const EmbeddingSpace& b, const std::vector<std::string>& ids);

// Dense rows of one space, in `ids` order.
std::vector<std::vector<double>> dense_rows(const EmbeddingSpace& space, const std::vector<std::string>& ids);

double cosine(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace doppelkit
