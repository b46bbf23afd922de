#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "narrative/chrono.hpp"
#include "narrative/error.hpp"
#include "support.hpp"

using namespace narrative;

namespace {

Eigen::MatrixXd line(std::initializer_list<double> xs) {
  Eigen::MatrixXd c(static_cast<Eigen::Index>(xs.size()), 1);
  Eigen::Index i = 0;
  for (double x : xs) c(i++, 0) = x;
  return c;
}

}  // namespace

TEST_CASE("two tight pairs far apart") {
  const auto d = constrained_cluster(line({0, 1, 10, 11}));
  REQUIRE(d.merges.size() == 3);
  CHECK(d.merges[0].left == Block{0, 0});
  CHECK(d.merges[0].right == Block{1, 1});
  CHECK(d.merges[0].height == 1.0);
  CHECK(d.merges[1].left == Block{2, 2});
  CHECK(d.merges[1].height == 1.0);
  CHECK(d.merges[2].left == Block{0, 1});
  CHECK(d.merges[2].right == Block{2, 3});
  CHECK(d.merges[2].height == 11.0);
  CHECK(d.leaf_ids == std::vector<int>{1, 2, 3, 4});

  const auto u = ultrametric(d);
  CHECK(u(0, 1) == 1.0);
  CHECK(u(0, 2) == 11.0);
  CHECK(u(3, 0) == 11.0);
  CHECK(u(2, 2) == 0.0);

  const auto scores = nodal_scores(d);
  CHECK(scores == Eigen::Vector4d(1, 1, 1, 1));

  const auto seg = cut(d, 2);
  CHECK(seg.boundaries == std::vector<int>{2});
  REQUIRE(seg.blocks.size() == 2);
  CHECK(seg.blocks[1] == Block{2, 3});
}

TEST_CASE("an outlier in the middle gets the largest nodal score") {
  const auto d = constrained_cluster(line({0, 0, 5, 0, 0}));
  const auto scores = nodal_scores(d);
  Eigen::Index top = 0;
  scores.maxCoeff(&top);
  CHECK(top == 2);
  CHECK(scores[2] == 5.0);
  CHECK(scores[0] == 0.0);
}

TEST_CASE("identical points merge at height zero") {
  const Eigen::MatrixXd same = Eigen::MatrixXd::Ones(6, 2);
  const auto d = constrained_cluster(same);
  CHECK_NOTHROW(validate(d));
  for (const auto& m : d.merges) CHECK(m.height == 0.0);
  CHECK(nodal_scores(d).isZero());
  // all ties resolve leftmost
  CHECK(d.merges[0].left == Block{0, 0});
  CHECK(d.merges[1].left == Block{0, 1});
}

TEST_CASE("agrees with brute-force recomputation") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 6);
    Eigen::MatrixXd coords(n, 2);
    for (int i = 0; i < n; ++i) coords.row(i) << unit(rng), unit(rng);
    const auto d = constrained_cluster(coords);
    const auto expected = testing_support::brute_force_merges(coords);
    REQUIRE(d.merges.size() == expected.size());
    for (std::size_t k = 0; k < expected.size(); ++k) {
      CHECK(d.merges[k].left == expected[k].left);
      CHECK(d.merges[k].right == expected[k].right);
      CHECK(d.merges[k].height == doctest::Approx(expected[k].height).epsilon(1e-14));
    }
    CHECK_NOTHROW(validate(d));
  }
}

TEST_CASE("ultrametric satisfies the strong triangle inequality") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 8);
    Eigen::MatrixXd coords(n, 3);
    for (int i = 0; i < n; ++i) coords.row(i) << normal(rng), normal(rng), normal(rng);
    const auto u = ultrametric(constrained_cluster(coords));
    CHECK(u.isApprox(u.transpose()));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) CHECK(u(i, j) <= std::max(u(i, k), u(k, j)) + 1e-12);
  }
}

TEST_CASE("reversing the sequence mirrors the dendrogram heights") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 7);
    Eigen::MatrixXd coords(n, 2);
    for (int i = 0; i < n; ++i) coords.row(i) << unit(rng), unit(rng);
    const Eigen::MatrixXd reversed = coords.colwise().reverse();
    const auto a = ultrametric(constrained_cluster(coords));
    const auto b = ultrametric(constrained_cluster(reversed));
    // continuous coordinates make ties improbable, so the trees mirror exactly
    const Eigen::MatrixXd mirrored = b.colwise().reverse().rowwise().reverse();
    CHECK((a - mirrored).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("cut edge cases") {
  const auto d = constrained_cluster(line({0, 3, 4, 9, 10, 20}));
  const auto one = cut(d, 1);
  CHECK(one.boundaries.empty());
  REQUIRE(one.blocks.size() == 1);
  CHECK(one.blocks[0] == Block{0, 5});

  const auto all = cut(d, 6);
  CHECK(all.boundaries == std::vector<int>{1, 2, 3, 4, 5});
  CHECK(all.blocks.size() == 6);

  for (int b = 1; b <= 6; ++b) {
    const auto seg = cut(d, b);
    CHECK(static_cast<int>(seg.blocks.size()) == b);
    int covered = 0;
    for (const auto& block : seg.blocks) covered += block.size();
    CHECK(covered == 6);
  }
  CHECK_THROWS_AS(cut(d, 0), Error);
  CHECK_THROWS_AS(cut(d, 7), Error);
  CHECK_THROWS_AS(constrained_cluster(line({1})), Error);
}

TEST_CASE("boundary agreement") {
  Segmentation seg;
  seg.boundaries = {3, 7};
  const std::vector<int> exact{3, 7}, near{4, 9}, none{};
  CHECK(boundary_agreement(seg, exact) == 1.0);
  CHECK(boundary_agreement(seg, near) == 0.0);
  CHECK(boundary_agreement(seg, near, 1) == 0.5);
  CHECK(boundary_agreement(seg, near, 2) == 1.0);
  CHECK(boundary_agreement(seg, none) == 1.0);
}

TEST_CASE("validate rejects malformed dendrograms") {
  auto d = constrained_cluster(line({0, 1, 10, 11}));
  auto bad = d;
  bad.merges.pop_back();
  CHECK_THROWS_AS(validate(bad), Error);
  bad = d;
  bad.merges[2].height = 0.5;
  CHECK_THROWS_AS(validate(bad), Error);
  bad = d;
  bad.merges[0].right = {2, 2};
  CHECK_THROWS_AS(validate(bad), Error);
}
