#pragma once

// Test-only helpers: random tables, fixtures, sign-invariant comparisons.

#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "narrative/chrono.hpp"

namespace testing_support {

inline std::string read_fixture(const std::string& name) {
  std::ifstream in(std::string(NARRATIVE_TEST_DATA) + "/" + name, std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// n x m table of integers in [0, max_count] with no all-zero row or column.
inline Eigen::MatrixXd random_table(std::mt19937_64& rng, int n, int m, int max_count = 5) {
  std::uniform_int_distribution<int> count(0, max_count);
  for (;;) {
    Eigen::MatrixXd t(n, m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) t(i, j) = count(rng);
    if ((t.rowwise().sum().array() > 0).all() && (t.colwise().sum().array() > 0).all()) return t;
  }
}

/// Column-wise equality allowing each column of b to be negated.
inline double max_diff_up_to_signs(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    const double same = (a.col(c) - b.col(c)).cwiseAbs().maxCoeff();
    const double flipped = (a.col(c) + b.col(c)).cwiseAbs().maxCoeff();
    worst = std::max(worst, std::min(same, flipped));
  }
  return worst;
}

/// Chi-squared distance straight from the definition, independent of the
/// library.
inline double chi2_oracle(const Eigen::MatrixXd& counts, int i, int j) {
  const double total = counts.sum();
  double d2 = 0.0;
  for (int c = 0; c < counts.cols(); ++c) {
    const double col_mass = counts.col(c).sum() / total;
    const double pi = counts(i, c) / counts.row(i).sum();
    const double pj = counts(j, c) / counts.row(j).sum();
    d2 += (pi - pj) * (pi - pj) / col_mass;
  }
  return std::sqrt(d2);
}

/// Sequence-constrained complete link that recomputes every adjacent cluster
/// distance from the leaves at each step; ties go to the leftmost pair.
inline std::vector<narrative::Merge> brute_force_merges(const Eigen::MatrixXd& coords) {
  using narrative::Block;
  const auto n = static_cast<int>(coords.rows());
  std::vector<Block> active;
  for (int i = 0; i < n; ++i) active.push_back({i, i});
  auto link = [&](const Block& a, const Block& b) {
    double d = 0.0;
    for (int i = a.first; i <= a.last; ++i)
      for (int j = b.first; j <= b.last; ++j) d = std::max(d, (coords.row(i) - coords.row(j)).norm());
    return d;
  };
  std::vector<narrative::Merge> merges;
  while (active.size() > 1) {
    std::size_t best = 0;
    double best_d = link(active[0], active[1]);
    for (std::size_t k = 1; k + 1 < active.size(); ++k) {
      const double d = link(active[k], active[k + 1]);
      if (d < best_d) best_d = d, best = k;
    }
    merges.push_back({active[best], active[best + 1], best_d});
    active[best].last = active[best + 1].last;
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(best) + 1);
  }
  return merges;
}

}  // namespace testing_support
