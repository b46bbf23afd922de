#pragma once

// Correspondence analysis of a nonnegative table: rows and columns embedded in
// a common Euclidean factor space under the chi-squared metric.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "narrative/corpus.hpp"
#include "narrative/error.hpp"

namespace narrative {

/// Full rank (min(n, m) - 1) when empty.
using Rank = std::optional<Eigen::Index>;

template <typename Scalar>
struct FactorModel {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Eigen::Index k = 0;
  bool rank_deficient = false;  // every residual vanished (independence table)
  Vector sigma;
  Matrix row_coords;  // n x k principal coordinates
  Matrix col_coords;  // m x k
  Vector row_mass;
  Vector col_mass;
  Scalar inertia_total = 0;
  Vector percent_inertia;
  Matrix row_contrib;
  Matrix row_cos2;
  Matrix col_contrib;
  Matrix col_cos2;

  std::vector<int> row_ids;             // segment ordinals
  std::vector<std::string> col_labels;  // terms

  Eigen::Index n_rows() const { return row_coords.rows(); }
  Eigen::Index n_cols() const { return col_coords.rows(); }

  /// Row index of a segment ordinal, or -1.
  Eigen::Index row_of(int ordinal) const {
    auto it = std::find(row_ids.begin(), row_ids.end(), ordinal);
    return it == row_ids.end() ? -1 : static_cast<Eigen::Index>(it - row_ids.begin());
  }
};

using FactorModeld = FactorModel<double>;

namespace detail {

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> squared_share(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& coords) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Matrix cos2 = Matrix::Zero(coords.rows(), coords.cols());
  for (Eigen::Index i = 0; i < coords.rows(); ++i) {
    const Scalar d2 = coords.row(i).squaredNorm();
    if (d2 > Scalar(0)) cos2.row(i) = coords.row(i).array().square() / d2;
  }
  return cos2;
}

}  // namespace detail

/// Singular values below this fraction of the largest are numerical zeros.
inline constexpr double kSigmaCutoff = 1e-12;

/// Correspondence analysis of dense nonnegative counts. Zero rows or columns
/// are rejected; callers drop them upstream. Axis signs are fixed so that the
/// row with the largest |coordinate| on each axis is positive.
template <typename Derived>
FactorModel<typename Derived::Scalar> correspondence_analysis(const Eigen::MatrixBase<Derived>& counts,
                                                             Rank rank = std::nullopt) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  const Eigen::Index n = counts.rows();
  const Eigen::Index m = counts.cols();
  if (n < 2 || m < 2) throw Error(ErrorCode::DegenerateMatrix, "need at least a 2 x 2 table");
  if ((counts.array() < Scalar(0)).any())
    throw Error(ErrorCode::InvalidArgument, "counts must be nonnegative");

  const Eigen::Index max_rank = std::min(n, m) - 1;
  if (rank && (*rank < 0 || *rank > max_rank))
    throw Error(ErrorCode::InvalidArgument,
                "requested rank " + std::to_string(*rank) + " exceeds min(n, m) - 1 = " +
                    std::to_string(max_rank));

  const Matrix P = counts.template cast<Scalar>() / counts.sum();
  const Vector r = P.rowwise().sum();
  const Vector c = P.colwise().sum().transpose();
  if ((r.array() <= Scalar(0)).any() || (c.array() <= Scalar(0)).any())
    throw Error(ErrorCode::DegenerateMatrix, "zero row or column mass");

  const Vector r_isqrt = r.array().rsqrt();
  const Vector c_isqrt = c.array().rsqrt();
  const Matrix S = r_isqrt.asDiagonal() * (P - r * c.transpose()) * c_isqrt.asDiagonal();

  FactorModel<Scalar> model;
  model.row_mass = r;
  model.col_mass = c;
  model.inertia_total = S.squaredNorm();

  Eigen::BDCSVD<Matrix> svd(S, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();

  Eigen::Index full = 0;
  const Scalar scale = s.size() > 0 ? s[0] : Scalar(0);
  // Residuals of an independence table are rounding noise around zero.
  const bool vanishing = scale <= Scalar(100) * std::numeric_limits<Scalar>::epsilon();
  if (!vanishing) {
    while (full < std::min<Eigen::Index>(max_rank, s.size()) &&
           s[full] > Scalar(kSigmaCutoff) * scale)
      ++full;
  }
  if (full == 0) {
    model.rank_deficient = true;
    model.inertia_total = Scalar(0);
    model.sigma.resize(0);
    model.percent_inertia.resize(0);
    model.row_coords = model.row_contrib = model.row_cos2 = Matrix::Zero(n, 0);
    model.col_coords = model.col_contrib = model.col_cos2 = Matrix::Zero(m, 0);
    return model;
  }

  Matrix U = svd.matrixU().leftCols(full);
  Matrix V = svd.matrixV().leftCols(full);
  const Vector sigma = s.head(full);

  for (Eigen::Index a = 0; a < full; ++a) {
    Eigen::Index imax = 0;
    U.col(a).cwiseAbs().maxCoeff(&imax);
    if (U(imax, a) < Scalar(0)) {
      U.col(a) = -U.col(a);
      V.col(a) = -V.col(a);
    }
  }

  const Matrix F = r_isqrt.asDiagonal() * U * sigma.asDiagonal();
  const Matrix G = c_isqrt.asDiagonal() * V * sigma.asDiagonal();
  const Matrix row_cos2 = detail::squared_share<Scalar>(F);
  const Matrix col_cos2 = detail::squared_share<Scalar>(G);

  const Eigen::Index k = rank ? std::min(*rank, full) : full;
  model.k = k;
  model.sigma = sigma.head(k);
  model.percent_inertia = Scalar(100) * sigma.head(k).array().square() / model.inertia_total;
  model.row_coords = F.leftCols(k);
  model.col_coords = G.leftCols(k);
  model.row_cos2 = row_cos2.leftCols(k);
  model.col_cos2 = col_cos2.leftCols(k);
  const Vector inv_eig = sigma.head(k).array().square().inverse();
  model.row_contrib = r.asDiagonal() * F.leftCols(k).array().square().matrix() * inv_eig.asDiagonal();
  model.col_contrib = c.asDiagonal() * G.leftCols(k).array().square().matrix() * inv_eig.asDiagonal();
  return model;
}

/// Analysis of a term-segment table; rows keep their segment ordinals and
/// columns their terms.
template <typename Scalar = double>
FactorModel<Scalar> correspondence_analysis(const TermSegmentMatrix& matrix, const Vocabulary& vocabulary,
                                            Rank rank = std::nullopt) {
  auto model = correspondence_analysis(matrix.dense<Scalar>(), rank);
  model.row_ids = matrix.row_ordinals;
  model.col_labels = vocabulary.terms;
  return model;
}

/// Chi-squared distance between the profiles of rows i and j of the table.
template <typename Derived>
typename Derived::Scalar chi2_distance(const Eigen::MatrixBase<Derived>& counts, Eigen::Index i,
                                       Eigen::Index j) {
  using Scalar = typename Derived::Scalar;
  if (i < 0 || j < 0 || i >= counts.rows() || j >= counts.rows())
    throw Error(ErrorCode::InvalidArgument, "row index out of range");
  const Scalar total = counts.sum();
  const auto c = (counts.colwise().sum() / total).eval();
  const auto pi = (counts.row(i) / counts.row(i).sum()).eval();
  const auto pj = (counts.row(j) / counts.row(j).sum()).eval();
  return std::sqrt(((pi - pj).array().square() / c.array()).sum());
}

double chi2_distance(const TermSegmentMatrix& matrix, Eigen::Index i, Eigen::Index j);

/// Places a supplementary profile (term counts or frequencies) into the space
/// of an existing model via the transition formula f_a = sum_j p_j G_ja / sigma_a.
template <typename Scalar, typename Derived>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> project_supplementary(const FactorModel<Scalar>& model,
                                                               const Eigen::MatrixBase<Derived>& profile) {
  if (profile.size() != model.n_cols())
    throw Error(ErrorCode::InvalidArgument, "profile length does not match the model's columns");
  if ((profile.array() < 0).any())
    throw Error(ErrorCode::InvalidArgument, "profile must be nonnegative");
  const Scalar total = static_cast<Scalar>(profile.sum());
  if (!(total > Scalar(0))) throw Error(ErrorCode::ZeroProfile, "profile sums to zero");
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> p = profile.template cast<Scalar>() / total;
  return (model.col_coords.transpose() * p).cwiseQuotient(model.sigma);
}

/// Column counterpart: a supplementary term given its counts over the rows.
template <typename Scalar, typename Derived>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> project_supplementary_column(
    const FactorModel<Scalar>& model, const Eigen::MatrixBase<Derived>& profile) {
  if (profile.size() != model.n_rows())
    throw Error(ErrorCode::InvalidArgument, "profile length does not match the model's rows");
  const Scalar total = static_cast<Scalar>(profile.sum());
  if (!(total > Scalar(0))) throw Error(ErrorCode::ZeroProfile, "profile sums to zero");
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> p = profile.template cast<Scalar>() / total;
  return (model.row_coords.transpose() * p).cwiseQuotient(model.sigma);
}

/// Throws Error{Internal} when barycenter, contribution or inertia identities
/// fail beyond `tol`.
void check_invariants(const FactorModeld& model, double tol = 1e-10);

}  // namespace narrative
