#pragma once

// Sequence-constrained complete-link clustering: only neighbouring blocks of
// the segment sequence may merge, so every cluster is a contiguous run.

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace narrative {

/// Contiguous run of leaf positions, 0-based and inclusive.
struct Block {
  int first = 0;
  int last = 0;

  int size() const { return last - first + 1; }
  bool operator==(const Block&) const = default;
};

struct Merge {
  Block left;
  Block right;
  double height = 0.0;
};

struct Dendrogram {
  int n_leaves = 0;
  std::vector<Merge> merges;
  std::vector<int> leaf_ids;  // segment ordinal of each leaf position
};

struct Segmentation {
  std::vector<int> boundaries;  // 1-based positions after which a cut falls
  std::vector<Block> blocks;
};

/// Greedy agglomeration over adjacent pairs; ties go to the leftmost pair.
/// Rows of `coords` are the leaves in sequence order.
Dendrogram constrained_cluster(const Eigen::MatrixXd& coords, std::vector<int> leaf_ids = {});

/// u(i, j) = height of the lowest merge joining leaves i and j.
Eigen::MatrixXd ultrametric(const Dendrogram& dendrogram);

/// Undo the last n_blocks - 1 merges.
Segmentation cut(const Dendrogram& dendrogram, int n_blocks);

/// Height at which each leaf first joins a larger cluster.
Eigen::VectorXd nodal_scores(const Dendrogram& dendrogram);

/// Fraction of reference boundaries matched by a boundary of `segmentation`
/// within `tolerance` positions. Boundaries are 1-based "cut after" positions.
double boundary_agreement(const Segmentation& segmentation, std::span<const int> reference,
                          int tolerance = 0);

/// Throws Error{Internal} if merges are not adjacent, heights decrease, or the
/// merge count is wrong.
void validate(const Dendrogram& dendrogram);

}  // namespace narrative
