#include <cmath>

#include "doppelkit/analyses/analyses.hpp"
#include "doppelkit/analyses/stats.hpp"
#include "doppelkit/error.hpp"
#include "doppelkit/kernels/kernels.hpp"

namespace doppelkit {

namespace {

std::vector<double> upper_triangle(std::vector<std::vector<double>> rows, const std::vector<std::string>& ids) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double norm = std::sqrt(kernels::sum_squares(rows[i]));
    if (!(norm > 0)) throw ZeroVector(ids[i]);
    for (double& x : rows[i]) x /= norm;
  }
  std::vector<double> out;
  out.reserve(rows.size() * (rows.size() - 1) / 2);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = i + 1; j < rows.size(); ++j) out.push_back(kernels::dot(rows[i], rows[j]));
  }
  return out;
}

}  // namespace

RsaResult rsa(const EmbeddingSpace& a, const EmbeddingSpace& b, Category category) {
  std::vector<std::string> ids;
  for (const auto& id : a.ids()) {
    if (b.contains(id)) ids.push_back(id);
  }
  if (ids.size() < 3) throw TooFewEntities(ids.size(), 3);
  RsaResult r;
  r.model_id = a.model_id;
  r.category = category;
  r.n = ids.size();
  const auto sa = upper_triangle(dense_rows(a, ids), ids);
  const auto sb = upper_triangle(dense_rows(b, ids), ids);
  r.n_pairs = sa.size();
  r.rho = spearman(sa, sb);
  return r;
}

}  // namespace doppelkit
