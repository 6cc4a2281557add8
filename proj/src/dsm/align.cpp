#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "doppelkit/dsm/sgns.hpp"
#include "doppelkit/entities.hpp"

namespace doppelkit {

namespace {

Eigen::RowVectorXd unit_row(const double* v, std::size_t dim) {
  Eigen::RowVectorXd r = Eigen::Map<const Eigen::RowVectorXd>(v, static_cast<Eigen::Index>(dim));
  const double n = r.norm();
  if (n > 0) r /= n;
  return r;
}

}  // namespace

Alignment procrustes_alignment(const EmbeddingTable& from, const EmbeddingTable& to, std::size_t min_count,
                               std::size_t max_anchors) {
  Alignment out;
  if (from.dim != to.dim || from.dim == 0) return out;
  struct Anchor {
    std::size_t i_from;
    std::size_t i_to;
    std::uint64_t weight;
  };
  std::vector<Anchor> anchors;
  for (std::size_t i = 0; i < from.size(); ++i) {
    const std::string& w = from.words[i];
    if (from.counts[i] < min_count || is_entity_token(w)) continue;
    const auto it = to.index.find(w);
    if (it == to.index.end() || to.counts[it->second] < min_count) continue;
    anchors.push_back({i, it->second, std::min(from.counts[i], to.counts[it->second])});
  }
  std::stable_sort(anchors.begin(), anchors.end(), [](const Anchor& a, const Anchor& b) { return a.weight > b.weight; });
  if (anchors.size() > max_anchors) anchors.resize(max_anchors);
  const std::size_t d = from.dim;
  if (anchors.size() < d) return out;

  Eigen::MatrixXd X(static_cast<Eigen::Index>(anchors.size()), static_cast<Eigen::Index>(d));
  Eigen::MatrixXd Y(X.rows(), X.cols());
  for (std::size_t k = 0; k < anchors.size(); ++k) {
    X.row(static_cast<Eigen::Index>(k)) = unit_row(from.vector(anchors[k].i_from), d);
    Y.row(static_cast<Eigen::Index>(k)) = unit_row(to.vector(anchors[k].i_to), d);
  }
  const Eigen::MatrixXd M = X.transpose() * Y;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::MatrixXd R = svd.matrixU() * svd.matrixV().transpose();
  out.rotation.resize(d * d);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) out.rotation[r * d + c] = R(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  }
  out.anchors = anchors.size();
  return out;
}

void rotate_space(EmbeddingSpace& space, const std::vector<double>& rotation) {
  const std::size_t d = space.dim;
  for (auto& [id, v] : space.dense) {
    std::vector<double> r(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
      const double vi = v[i];
      for (std::size_t j = 0; j < d; ++j) r[j] += vi * rotation[i * d + j];
    }
    v = std::move(r);
  }
}

}  // namespace doppelkit
