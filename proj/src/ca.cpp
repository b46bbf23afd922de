#include "narrative/ca.hpp"

#include <sstream>

namespace narrative {

double chi2_distance(const TermSegmentMatrix& matrix, Eigen::Index i, Eigen::Index j) {
  return chi2_distance(matrix.dense<double>(), i, j);
}

void check_invariants(const FactorModeld& model, double tol) {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::Internal, what); };
  if (model.k == 0) return;
  const Eigen::VectorXd row_bary = model.row_coords.transpose() * model.row_mass;
  const Eigen::VectorXd col_bary = model.col_coords.transpose() * model.col_mass;
  if (row_bary.cwiseAbs().maxCoeff() > tol || col_bary.cwiseAbs().maxCoeff() > tol)
    fail("factor coordinates are not centered on the weighted barycenter");
  const Eigen::RowVectorXd row_sum = model.row_contrib.colwise().sum();
  const Eigen::RowVectorXd col_sum = model.col_contrib.colwise().sum();
  if ((row_sum.array() - 1.0).abs().maxCoeff() > tol || (col_sum.array() - 1.0).abs().maxCoeff() > tol)
    fail("contributions do not sum to 1 per axis");
  if (model.sigma.maxCoeff() > 1.0 + tol) fail("singular value above 1");
  if (model.percent_inertia.sum() > 100.0 + tol) fail("percent inertia above 100");
  for (Eigen::Index a = 1; a < model.k; ++a)
    if (model.sigma[a] > model.sigma[a - 1]) fail("singular values out of order");
}

}  // namespace narrative
