#include "ccc/matrix.hpp"

#include <map>

namespace ccc {

namespace {

int nvars_of(const RatMatrix& m) { return m.rows() > 0 ? m(0, 0).nvars() : 0; }

// Determinant of the submatrix on rows [row, n) and the columns in `mask`,
// by Laplace expansion along the first row with memoization on the mask.
RatFunc minor_det(const RatMatrix& m, int row, unsigned mask, std::map<unsigned, RatFunc>& memo) {
  const int n = m.rows();
  if (row == n) return RatFunc(nvars_of(m), Rational(1));
  auto it = memo.find(mask);
  if (it != memo.end()) return it->second;
  RatFunc total(nvars_of(m));
  int sign = 1;
  for (int c = 0; c < n; ++c) {
    if (!(mask & (1U << c))) continue;
    if (!m(row, c).is_zero()) {
      RatFunc term = m(row, c) * minor_det(m, row + 1, mask & ~(1U << c), memo);
      if (sign > 0) {
        total += term;
      } else {
        total -= term;
      }
    }
    sign = -sign;
  }
  memo.emplace(mask, total);
  return total;
}

RatMatrix submatrix(const RatMatrix& m, int drop_row, int drop_col) {
  RatMatrix s(m.rows() - 1, m.cols() - 1, RatFunc(nvars_of(m)));
  for (int r = 0, rr = 0; r < m.rows(); ++r) {
    if (r == drop_row) continue;
    for (int c = 0, cc = 0; c < m.cols(); ++c) {
      if (c == drop_col) continue;
      s(rr, cc++) = m(r, c);
    }
    ++rr;
  }
  return s;
}

RatMatrix block(const RatMatrix& m, int r0, int c0, int rows, int cols) {
  RatMatrix b(rows, cols, RatFunc(nvars_of(m)));
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) b(r, c) = m(r0 + r, c0 + c);
  }
  return b;
}

RatMatrix adjugate_inverse(const RatMatrix& m) {
  const int n = m.rows();
  RatFunc det = determinant(m);
  if (det.is_zero()) throw SingularError("matrix is singular (determinant is identically zero)");
  RatFunc inv_det = det.inverse();
  RatMatrix out(n, n, RatFunc(nvars_of(m)));
  if (n == 1) {
    out(0, 0) = inv_det;
    return out;
  }
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      RatFunc cof = determinant(submatrix(m, c, r));
      if ((r + c) % 2 == 1) cof = -cof;
      out(r, c) = cof * inv_det;
    }
  }
  return out;
}

}  // namespace

RatMatrix identity_matrix(int n, int nvars) {
  RatMatrix m(n, n, RatFunc(nvars));
  for (int i = 0; i < n; ++i) m(i, i) = RatFunc(nvars, Rational(1));
  return m;
}

RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matrix product shape mismatch");
  RatMatrix out(a.rows(), b.cols(), RatFunc(nvars_of(a)));
  for (int r = 0; r < a.rows(); ++r) {
    for (int c = 0; c < b.cols(); ++c) {
      RatFunc acc(nvars_of(a));
      for (int k = 0; k < a.cols(); ++k) {
        if (a(r, k).is_zero() || b(k, c).is_zero()) continue;
        acc += a(r, k) * b(k, c);
      }
      out(r, c) = std::move(acc);
    }
  }
  return out;
}

RatFunc determinant(const RatMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("determinant of a non-square matrix");
  if (m.rows() > 20) throw DimensionError("determinant size limit exceeded");
  std::map<unsigned, RatFunc> memo;
  return minor_det(m, 0, (1U << m.rows()) - 1, memo);
}

RatMatrix inverse(const RatMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("inverse of a non-square matrix");
  const int n = m.rows();
  if (n >= 4 && n % 2 == 0) {
    const int h = n / 2;
    bool upper_right_zero = true;
    for (int r = 0; r < h && upper_right_zero; ++r) {
      for (int c = h; c < n; ++c) {
        if (!m(r, c).is_zero()) {
          upper_right_zero = false;
          break;
        }
      }
    }
    if (upper_right_zero) {
      // [[P, 0], [R, S]]^-1 = [[P^-1, 0], [-S^-1 R P^-1, S^-1]]
      RatMatrix p_inv = inverse(block(m, 0, 0, h, h));
      RatMatrix s_inv = inverse(block(m, h, h, h, h));
      RatMatrix lower = s_inv * block(m, h, 0, h, h) * p_inv;
      RatMatrix out(n, n, RatFunc(nvars_of(m)));
      for (int r = 0; r < h; ++r) {
        for (int c = 0; c < h; ++c) {
          out(r, c) = p_inv(r, c);
          out(h + r, h + c) = s_inv(r, c);
          out(h + r, c) = -lower(r, c);
        }
      }
      return out;
    }
  }
  return adjugate_inverse(m);
}

}  // namespace ccc
