#include "narrative/chrono.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "narrative/error.hpp"

namespace narrative {

Dendrogram constrained_cluster(const Eigen::MatrixXd& coords, std::vector<int> leaf_ids) {
  const auto n = static_cast<int>(coords.rows());
  if (n < 2) throw Error(ErrorCode::TooShort, "clustering needs at least 2 segments");
  if (leaf_ids.empty()) {
    leaf_ids.resize(static_cast<std::size_t>(n));
    std::iota(leaf_ids.begin(), leaf_ids.end(), 1);
  }
  if (static_cast<int>(leaf_ids.size()) != n)
    throw Error(ErrorCode::InvalidArgument, "leaf id count does not match coordinate rows");

  // Cluster distances keyed by the first leaf of each block. Complete link
  // updates by max, so no distance is ever recomputed from leaves.
  Eigen::MatrixXd dist(n, n);
  for (int i = 0; i < n; ++i) {
    dist(i, i) = 0.0;
    for (int j = i + 1; j < n; ++j) dist(i, j) = dist(j, i) = (coords.row(i) - coords.row(j)).norm();
  }

  std::vector<Block> active(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) active[static_cast<std::size_t>(i)] = {i, i};

  Dendrogram out;
  out.n_leaves = n;
  out.leaf_ids = std::move(leaf_ids);
  out.merges.reserve(static_cast<std::size_t>(n - 1));

  while (active.size() > 1) {
    std::size_t best = 0;
    double best_d = dist(active[0].first, active[1].first);
    for (std::size_t k = 1; k + 1 < active.size(); ++k) {
      const double d = dist(active[k].first, active[k + 1].first);
      if (d < best_d) {
        best_d = d;
        best = k;
      }
    }
    const Block left = active[best];
    const Block right = active[best + 1];
    out.merges.push_back({left, right, best_d});

    for (const auto& other : active) {
      if (other == left || other == right) continue;
      const double d = std::max(dist(left.first, other.first), dist(right.first, other.first));
      dist(left.first, other.first) = dist(other.first, left.first) = d;
    }
    active[best] = {left.first, right.last};
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(best) + 1);
  }
  return out;
}

Eigen::MatrixXd ultrametric(const Dendrogram& d) {
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(d.n_leaves, d.n_leaves);
  for (const auto& m : d.merges)
    for (int i = m.left.first; i <= m.left.last; ++i)
      for (int j = m.right.first; j <= m.right.last; ++j) u(i, j) = u(j, i) = m.height;
  return u;
}

Segmentation cut(const Dendrogram& d, int n_blocks) {
  if (n_blocks < 1 || n_blocks > d.n_leaves)
    throw Error(ErrorCode::InvalidArgument, "n_blocks must lie in [1, " + std::to_string(d.n_leaves) + "]");
  Segmentation seg;
  const auto undo = static_cast<std::size_t>(n_blocks - 1);
  for (std::size_t k = d.merges.size() - undo; k < d.merges.size(); ++k)
    seg.boundaries.push_back(d.merges[k].left.last + 1);
  std::sort(seg.boundaries.begin(), seg.boundaries.end());

  int first = 0;
  for (int b : seg.boundaries) {
    seg.blocks.push_back({first, b - 1});
    first = b;
  }
  seg.blocks.push_back({first, d.n_leaves - 1});
  return seg;
}

Eigen::VectorXd nodal_scores(const Dendrogram& d) {
  Eigen::VectorXd scores = Eigen::VectorXd::Zero(d.n_leaves);
  for (const auto& m : d.merges) {
    if (m.left.size() == 1) scores[m.left.first] = m.height;
    if (m.right.size() == 1) scores[m.right.first] = m.height;
  }
  return scores;
}

double boundary_agreement(const Segmentation& segmentation, std::span<const int> reference, int tolerance) {
  if (reference.empty()) return 1.0;
  std::size_t hits = 0;
  for (int ref : reference) {
    const bool hit = std::any_of(segmentation.boundaries.begin(), segmentation.boundaries.end(),
                                 [&](int b) { return std::abs(b - ref) <= tolerance; });
    if (hit) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(reference.size());
}

void validate(const Dendrogram& d) {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::Internal, what); };
  if (static_cast<int>(d.merges.size()) != d.n_leaves - 1) fail("dendrogram must hold n - 1 merges");
  double previous = 0.0;
  for (const auto& m : d.merges) {
    if (m.right.first != m.left.last + 1) fail("merge joins non-adjacent blocks");
    if (m.height < previous) fail("merge heights decrease");
    previous = m.height;
  }
}

}  // namespace narrative
