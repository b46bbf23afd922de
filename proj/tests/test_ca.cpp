#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "narrative/ca.hpp"
#include "narrative/error.hpp"
#include "support.hpp"

using namespace narrative;
using testing_support::chi2_oracle;
using testing_support::max_diff_up_to_signs;
using testing_support::random_table;

TEST_CASE("diagonal 2x2 table") {
  Eigen::MatrixXd t(2, 2);
  t << 1, 0, 0, 1;
  const auto model = correspondence_analysis(t);
  REQUIRE(model.k == 1);
  CHECK(model.sigma[0] == doctest::Approx(1.0));
  CHECK(model.inertia_total == doctest::Approx(1.0));
  CHECK(std::abs(model.row_coords(0, 0)) == doctest::Approx(1.0));
  CHECK(model.row_coords(0, 0) == doctest::Approx(-model.row_coords(1, 0)));
  CHECK(model.percent_inertia[0] == doctest::Approx(100.0));
  CHECK(chi2_distance(t, 0, 1) == doctest::Approx(2.0));
  CHECK(chi2_distance(t, 0, 0) == 0.0);

  // scale invariance
  const auto doubled = correspondence_analysis(Eigen::MatrixXd(2.0 * t));
  CHECK((doubled.row_coords - model.row_coords).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((doubled.col_coords - model.col_coords).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("identical rows share coordinates") {
  Eigen::MatrixXd t(4, 3);
  t << 1, 2, 3, 4, 0, 1, 1, 2, 3, 2, 2, 0;
  const auto model = correspondence_analysis(t);
  CHECK((model.row_coords.row(0) - model.row_coords.row(2)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(chi2_distance(t, 0, 2) == 0.0);
}

TEST_CASE("float scalar instantiation") {
  Eigen::MatrixXf t(3, 3);
  t << 4, 1, 0, 1, 3, 1, 0, 2, 5;
  const auto model = correspondence_analysis(t);
  CHECK(model.k == 2);
  const Eigen::MatrixXd td = t.cast<double>();
  const auto md = correspondence_analysis(td);
  CHECK(max_diff_up_to_signs(model.row_coords.cast<double>(), md.row_coords) < 1e-4);
}

TEST_CASE("factor distances equal chi-squared distances") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 7), m = 2 + static_cast<int>(rng() % 7);
    const auto t = random_table(rng, n, m);
    const auto model = correspondence_analysis(t);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double oracle = chi2_oracle(t, i, j);
        CHECK((model.row_coords.row(i) - model.row_coords.row(j)).norm() == doctest::Approx(oracle).epsilon(1e-8));
        CHECK(chi2_distance(t, i, j) == doctest::Approx(oracle).epsilon(1e-12));
      }
  }
}

TEST_CASE("algebraic invariants on random tables") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 7), m = 2 + static_cast<int>(rng() % 7);
    const auto t = random_table(rng, n, m);
    const auto model = correspondence_analysis(t);
    if (model.rank_deficient) continue;
    CHECK_NOTHROW(check_invariants(model, 1e-10));

    const Eigen::MatrixXd P = t / t.sum();
    const Eigen::VectorXd r = P.rowwise().sum(), c = P.colwise().sum().transpose();
    const Eigen::MatrixXd E = r * c.transpose();
    const double chi2_over_n = ((P - E).array().square() / E.array()).sum();
    CHECK(model.sigma.squaredNorm() == doctest::Approx(chi2_over_n).epsilon(1e-10));
    CHECK(model.percent_inertia.sum() == doctest::Approx(100.0).epsilon(1e-10));

    // cos2 over the full rank sums to 1 for every point off the barycenter
    for (Eigen::Index i = 0; i < n; ++i)
      if (model.row_coords.row(i).norm() > 1e-8) CHECK(model.row_cos2.row(i).sum() == doctest::Approx(1.0));
  }
}

TEST_CASE("truncated rank keeps leading axes") {
  std::mt19937_64 rng(5);
  const auto t = random_table(rng, 6, 7);
  const auto full = correspondence_analysis(t);
  const auto two = correspondence_analysis(t, 2);
  REQUIRE(two.k == 2);
  CHECK((two.row_coords - full.row_coords.leftCols(2)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(two.percent_inertia.sum() < 100.0);
  // cos2 keeps the full-rank denominator
  CHECK((two.row_cos2 - full.row_cos2.leftCols(2)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(correspondence_analysis(t, 6), Error);
}

TEST_CASE("independence table is rank deficient") {
  Eigen::MatrixXd t(3, 2);
  t << 1, 2, 2, 4, 3, 6;
  const auto model = correspondence_analysis(t);
  CHECK(model.rank_deficient);
  CHECK(model.k == 0);
  CHECK(model.row_coords.cols() == 0);
}

TEST_CASE("merging proportional columns leaves row distances unchanged") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 5), m = 3 + static_cast<int>(rng() % 5);
    Eigen::MatrixXd t = random_table(rng, n, m);
    // append a column proportional to column 0
    Eigen::MatrixXd wide(n, m + 1);
    wide << t, 2.0 * t.col(0);
    Eigen::MatrixXd merged = t;
    merged.col(0) = 3.0 * t.col(0);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        CHECK(chi2_distance(wide, i, j) == doctest::Approx(chi2_distance(merged, i, j)).epsilon(1e-10));
  }
}

TEST_CASE("row order does not change coordinates beyond axis signs") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 6), m = 3 + static_cast<int>(rng() % 6);
    const auto t = random_table(rng, n, m);
    Eigen::PermutationMatrix<Eigen::Dynamic> perm(n);
    perm.setIdentity();
    std::shuffle(perm.indices().data(), perm.indices().data() + n, rng);
    const auto a = correspondence_analysis(t);
    const Eigen::MatrixXd permuted_t = perm * t;
    const auto b = correspondence_analysis(permuted_t);
    // only compare axes with distinct singular values
    bool distinct = true;
    for (Eigen::Index k = 1; k < a.k; ++k) distinct &= a.sigma[k - 1] - a.sigma[k] > 1e-6;
    if (!distinct) continue;
    const Eigen::MatrixXd expected = perm * a.row_coords;
    CHECK(max_diff_up_to_signs(expected, b.row_coords) < 1e-8);
  }
}

TEST_CASE("supplementary projection") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 5), m = 3 + static_cast<int>(rng() % 5);
    const auto t = random_table(rng, n, m);
    const auto model = correspondence_analysis(t);
    if (model.rank_deficient) continue;
    for (int i = 0; i < n; ++i) {
      const Eigen::VectorXd profile = t.row(i).transpose();
      CHECK((project_supplementary(model, profile) - model.row_coords.row(i).transpose()).cwiseAbs().maxCoeff() <
            1e-10);
    }
    CHECK(project_supplementary(model, model.col_mass).cwiseAbs().maxCoeff() < 1e-10);

    // 50/50 mixture of two profiles projects to the midpoint; summed counts
    // project to the mass-weighted point on the same segment
    const Eigen::VectorXd p0 = t.row(0).transpose() / t.row(0).sum();
    const Eigen::VectorXd p1 = t.row(1).transpose() / t.row(1).sum();
    const Eigen::VectorXd mid = 0.5 * (model.row_coords.row(0) + model.row_coords.row(1)).transpose();
    CHECK((project_supplementary(model, Eigen::VectorXd(0.5 * (p0 + p1))) - mid).cwiseAbs().maxCoeff() < 1e-10);
    const double w0 = t.row(0).sum(), w1 = t.row(1).sum();
    const Eigen::VectorXd weighted =
        (w0 * model.row_coords.row(0) + w1 * model.row_coords.row(1)).transpose() / (w0 + w1);
    const Eigen::VectorXd summed = (t.row(0) + t.row(1)).transpose();
    CHECK((project_supplementary(model, summed) - weighted).cwiseAbs().maxCoeff() < 1e-10);

    for (int j = 0; j < m; ++j) {
      const Eigen::VectorXd col = t.col(j);
      CHECK((project_supplementary_column(model, col) - model.col_coords.row(j).transpose()).cwiseAbs().maxCoeff() <
            1e-10);
    }
  }
  Eigen::MatrixXd t(2, 2);
  t << 3, 1, 1, 3;
  const auto model = correspondence_analysis(t);
  CHECK_THROWS_AS(project_supplementary(model, Eigen::VectorXd::Zero(2)), Error);
  CHECK_THROWS_AS(project_supplementary(model, Eigen::VectorXd::Ones(3)), Error);
}

TEST_CASE("axis sign convention is deterministic") {
  std::mt19937_64 rng(41);
  const auto t = random_table(rng, 6, 6);
  const auto a = correspondence_analysis(t);
  const auto b = correspondence_analysis(t);
  CHECK(a.row_coords == b.row_coords);
  // the largest entry of each left singular vector is positive
  for (Eigen::Index ax = 0; ax < a.k; ++ax) {
    Eigen::Index imax = 0;
    const Eigen::VectorXd u = a.row_coords.col(ax).cwiseProduct(a.row_mass.cwiseSqrt());
    u.cwiseAbs().maxCoeff(&imax);
    CHECK(a.row_coords(imax, ax) > 0.0);
  }
}

TEST_CASE("contributions and cos2 of a point at the barycenter") {
  // the last row's profile equals the column masses of the table
  Eigen::MatrixXd t(3, 3);
  t << 4, 0, 2, 0, 4, 2, 2, 2, 2;
  const auto model = correspondence_analysis(t);
  CHECK(model.row_coords.row(2).norm() < 1e-12);
  CHECK(model.row_contrib.row(2).cwiseAbs().maxCoeff() < 1e-20);
  CHECK(model.row_cos2.row(2).sum() == 0.0);
}

TEST_CASE("term-segment overload carries ids and labels") {
  const auto build = build_matrix(parse_prose("alpha beta beta\n\nbeta gamma\n\ngamma alpha delta"));
  const auto model = correspondence_analysis<double>(build.matrix, build.vocabulary);
  CHECK(model.row_ids == std::vector<int>{1, 2, 3});
  CHECK(model.col_labels == build.vocabulary.terms);
  CHECK(model.row_of(2) == 1);
  CHECK(model.row_of(9) == -1);
  CHECK(chi2_distance(build.matrix, 0, 1) == doctest::Approx(chi2_oracle(build.matrix.dense<double>(), 0, 1)));
}
