#include <cmath>
#include <unordered_map>

#include "doppelkit/dsm/space.hpp"
#include "doppelkit/error.hpp"
#include "doppelkit/kernels/kernels.hpp"

namespace doppelkit {

std::string_view to_string(PartId part) {
  switch (part) {
    case PartId::A:
      return "A";
    case PartId::B:
      return "B";
    case PartId::novel:
      return "novel";
    case PartId::wiki:
      return "wiki";
  }
  return "A";
}

std::optional<PartId> parse_part(std::string_view name) {
  if (name == "A") return PartId::A;
  if (name == "B") return PartId::B;
  if (name == "novel") return PartId::novel;
  if (name == "wiki") return PartId::wiki;
  return std::nullopt;
}

std::vector<std::string> EmbeddingSpace::ids() const {
  std::vector<std::string> out;
  if (is_sparse) {
    for (const auto& [id, row] : sparse) out.push_back(id);
  } else {
    for (const auto& [id, v] : dense) out.push_back(id);
  }
  return out;
}

bool EmbeddingSpace::contains(const std::string& id) const {
  return is_sparse ? sparse.count(id) > 0 : dense.count(id) > 0;
}

namespace {

std::vector<double> scatter(const SparseRow& row, const std::vector<std::size_t>& remap, std::size_t dim) {
  std::vector<double> out(dim, 0.0);
  for (std::size_t k = 0; k < row.index.size(); ++k) out[remap[row.index[k]]] += row.value[k];
  return out;
}

}  // namespace

std::vector<std::vector<double>> dense_rows(const EmbeddingSpace& space, const std::vector<std::string>& ids) {
  std::vector<std::vector<double>> rows;
  rows.reserve(ids.size());
  if (space.is_sparse) {
    std::vector<std::size_t> identity(space.columns.size());
    for (std::size_t i = 0; i < identity.size(); ++i) identity[i] = i;
    for (const auto& id : ids) rows.push_back(scatter(space.sparse.at(id), identity, space.columns.size()));
  } else {
    for (const auto& id : ids) rows.push_back(space.dense.at(id));
  }
  return rows;
}

AlignedPair align_pair(const EmbeddingSpace& a, const EmbeddingSpace& b, const std::vector<std::string>& ids) {
  AlignedPair out;
  if (a.is_sparse != b.is_sparse) throw Error("SpaceMismatch", "cannot compare a sparse space with a dense one");
  if (!a.is_sparse) {
    for (const auto& id : ids) {
      const auto& va = a.dense.at(id);
      const auto& vb = b.dense.at(id);
      if (va.size() != vb.size()) throw DimMismatch(id, va.size(), vb.size());
    }
    out.dim = a.dim;
    out.a = dense_rows(a, ids);
    out.b = dense_rows(b, ids);
    return out;
  }
  std::unordered_map<std::string, std::size_t> label;
  std::vector<std::size_t> remap_a(a.columns.size());
  std::vector<std::size_t> remap_b(b.columns.size());
  for (std::size_t i = 0; i < a.columns.size(); ++i) {
    remap_a[i] = label.emplace(a.columns[i], label.size()).first->second;
  }
  for (std::size_t i = 0; i < b.columns.size(); ++i) {
    remap_b[i] = label.emplace(b.columns[i], label.size()).first->second;
  }
  out.dim = label.size();
  for (const auto& id : ids) {
    out.a.push_back(scatter(a.sparse.at(id), remap_a, out.dim));
    out.b.push_back(scatter(b.sparse.at(id), remap_b, out.dim));
  }
  return out;
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  const double na = std::sqrt(kernels::sum_squares(a));
  const double nb = std::sqrt(kernels::sum_squares(b));
  if (na == 0.0 || nb == 0.0) return 0.0;
  return kernels::dot(a, b) / (na * nb);
}

}  // namespace doppelkit
