#pragma once

#include <vector>

#include "ccc/errors.hpp"
#include "ccc/ratfunc.hpp"

namespace ccc {

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, const T& fill) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  T& operator()(int r, int c) { return data_[r * cols_ + c]; }
  const T& operator()(int r, int c) const { return data_[r * cols_ + c]; }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

using RatMatrix = Matrix<RatFunc>;

RatMatrix identity_matrix(int n, int nvars);
RatMatrix operator*(const RatMatrix& a, const RatMatrix& b);
RatFunc determinant(const RatMatrix& m);
// Exact inverse; throws SingularError when the determinant is identically 0.
// Block lower-triangular matrices are inverted blockwise.
RatMatrix inverse(const RatMatrix& m);

}  // namespace ccc
