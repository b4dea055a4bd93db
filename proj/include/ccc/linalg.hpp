#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

#include "ccc/errors.hpp"
#include "ccc/scalar.hpp"

namespace ccc {

// Incrementally maintained reduced row echelon form over an exact field.
template <class Field>
class Echelon {
 public:
  using T = typename Field::value_type;
  using Row = std::vector<T>;

  Echelon(Field field, int ncols) : field_(std::move(field)), ncols_(ncols) {}

  int ncols() const { return ncols_; }
  int rank() const { return static_cast<int>(rows_.size()); }
  const std::vector<Row>& rows() const { return rows_; }
  const std::vector<int>& pivots() const { return pivots_; }

  // Reduces `row` against the current rows; the result is zero iff `row`
  // lies in their span.
  Row reduce(Row row) const {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const T& factor = row[pivots_[r]];
      if (field_.is_zero(factor)) continue;
      T f = factor;
      for (int c = 0; c < ncols_; ++c) {
        if (!field_.is_zero(rows_[r][c])) row[c] = field_.sub(row[c], field_.mul(f, rows_[r][c]));
      }
    }
    return row;
  }

  bool is_zero(const Row& row) const {
    for (const auto& x : row) {
      if (!field_.is_zero(x)) return false;
    }
    return true;
  }

  // Returns true when the row increased the rank.
  bool insert(Row row) {
    if (static_cast<int>(row.size()) != ncols_) throw DimensionError("row length does not match echelon width");
    row = reduce(std::move(row));
    int pivot = -1;
    for (int c = 0; c < ncols_; ++c) {
      if (!field_.is_zero(row[c])) {
        pivot = c;
        break;
      }
    }
    if (pivot < 0) return false;
    T inv = field_.inv(row[pivot]);
    for (auto& x : row) x = field_.mul(x, inv);
    for (auto& existing : rows_) {
      T f = existing[pivot];
      if (field_.is_zero(f)) continue;
      for (int c = 0; c < ncols_; ++c) existing[c] = field_.sub(existing[c], field_.mul(f, row[c]));
    }
    // Keep rows sorted by pivot column.
    auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), pivot) - pivots_.begin();
    pivots_.insert(pivots_.begin() + pos, pivot);
    rows_.insert(rows_.begin() + pos, std::move(row));
    return true;
  }

  // Basis of the null space {x : r . x = 0 for every row r}.
  std::vector<Row> kernel() const {
    std::vector<bool> is_pivot(ncols_, false);
    for (int p : pivots_) is_pivot[p] = true;
    std::vector<Row> basis;
    for (int f = 0; f < ncols_; ++f) {
      if (is_pivot[f]) continue;
      Row x(ncols_, field_.zero());
      x[f] = field_.one();
      for (std::size_t r = 0; r < rows_.size(); ++r) x[pivots_[r]] = field_.neg(rows_[r][f]);
      basis.push_back(std::move(x));
    }
    return basis;
  }

 private:
  Field field_;
  int ncols_;
  std::vector<Row> rows_;
  std::vector<int> pivots_;
};

template <class Field>
int rank_of(const Field& field, const std::vector<typename Field::value_type>* rows, std::size_t count, int ncols) {
  Echelon<Field> e(field, ncols);
  for (std::size_t i = 0; i < count; ++i) e.insert(rows[i]);
  return e.rank();
}

// Solves sum_i a_i basis[i] = target exactly. Returns the coefficients, or
// the nonzero residual of target modulo span(basis) on failure.
template <class Field>
std::pair<std::optional<std::vector<typename Field::value_type>>, std::vector<typename Field::value_type>>
solve_in_span(const Field& field, const std::vector<std::vector<typename Field::value_type>>& basis,
              const std::vector<typename Field::value_type>& target) {
  using T = typename Field::value_type;
  const int d = static_cast<int>(basis.size());
  const int n = static_cast<int>(target.size());
  // Augment each basis vector with a unit vector so the reduction records
  // the combination used.
  Echelon<Field> e(field, n + d);
  for (int i = 0; i < d; ++i) {
    std::vector<T> row(basis[i]);
    row.resize(n + d, field.zero());
    row[n + i] = field.one();
    e.insert(std::move(row));
  }
  std::vector<T> t(target);
  t.resize(n + d, field.zero());
  t = e.reduce(std::move(t));
  std::vector<T> residual(t.begin(), t.begin() + n);
  bool member = true;
  for (const auto& x : residual) {
    if (!field.is_zero(x)) member = false;
  }
  if (!member) return {std::nullopt, residual};
  // target - sum c_i basis_i reduced to zero in the first n slots; the tail
  // holds -coefficients.
  std::vector<T> coeffs(d);
  for (int i = 0; i < d; ++i) coeffs[i] = field.neg(t[n + i]);
  return {coeffs, residual};
}

// Numerical null space by singular value decomposition: singular values
// below rel_tol * sigma_max count as zero.
struct SvdKernel {
  int rank = 0;
  Eigen::MatrixXcd basis;  // columns span the kernel
  Eigen::VectorXd singular_values;
};
SvdKernel svd_kernel(const Eigen::MatrixXcd& m, double rel_tol);

}  // namespace ccc
