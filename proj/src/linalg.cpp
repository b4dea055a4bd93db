#include "ccc/linalg.hpp"

#include <Eigen/SVD>

namespace ccc {

SvdKernel svd_kernel(const Eigen::MatrixXcd& m, double rel_tol) {
  SvdKernel out;
  const Eigen::Index ncols = m.cols();
  if (m.rows() == 0) {
    out.basis = Eigen::MatrixXcd::Identity(ncols, ncols);
    return out;
  }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullV);
  out.singular_values = svd.singularValues();
  double smax = out.singular_values.size() > 0 ? out.singular_values(0) : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < out.singular_values.size(); ++i) {
    if (out.singular_values(i) > rel_tol * smax && smax > 0) ++rank;
  }
  out.rank = rank;
  out.basis = svd.matrixV().rightCols(ncols - rank);
  return out;
}

}  // namespace ccc
