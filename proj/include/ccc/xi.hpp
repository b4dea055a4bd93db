#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ccc/coframe.hpp"
#include "ccc/hypersurface.hpp"
#include "ccc/report.hpp"

namespace ccc {

// Constant elements of Hom(wedge^2 V, V); coordinate k * C(n,2) + pair(i, j)
// holds c^k_ij for i < j.
template <class T>
using HomTensor = AntisymTensor<T>;

inline int hom_dimension(int n) { return n * AntisymTensor<int>::pair_count(n); }

enum class FieldKind { Rational, Prime, Float };

struct FieldTag {
  FieldKind kind = FieldKind::Rational;
  std::uint64_t prime = 0;
  double tol = 1e-8;

  static FieldTag rational() { return {}; }
  static FieldTag modp(std::uint64_t p) { return {FieldKind::Prime, p, 1e-8}; }
  static FieldTag floating(double tol = 1e-8) { return {FieldKind::Float, 0, tol}; }
  std::string to_string() const;
};

// A subspace of Hom(wedge^2 V, V) given by a basis in one field; only the
// basis vector list matching `field.kind` is populated.
struct TensorSubspace {
  int n = 0;
  FieldTag field;
  std::vector<std::vector<Rational>> rational_basis;
  std::vector<std::vector<std::uint64_t>> modp_basis;
  std::vector<std::vector<Complex>> float_basis;

  int dim() const;
};

// iota(eta)(u, v) = eta(u) v - eta(v) u, i.e. c^k_ij = eta_i delta^k_j - eta_j delta^k_i.
template <class T>
HomTensor<T> iota(std::span<const T> eta, const T& zero) {
  const int n = static_cast<int>(eta.size());
  HomTensor<T> c(n, zero);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      c.at(j, i, j) = eta[i];
      c.at(i, i, j) = T(-eta[j]);
    }
  }
  return c;
}
HomTensor<Rational> iota(std::span<const Rational> eta);

// Trace formula eta_j = sum_k c^k_kj / (1 - n); exact inverse of iota on its image.
template <class T>
std::vector<T> eta_trace(const HomTensor<T>& c, const T& zero) {
  const int n = c.n();
  std::vector<T> eta(n, zero);
  for (int j = 0; j < n; ++j) {
    T s = zero;
    for (int k = 0; k < n; ++k) {
      if (k != j) s += c.value(k, k, j);
    }
    eta[j] = s * make_rational(1, 1 - n);
  }
  return eta;
}

// eta with iota(eta) == c, or nullopt when c is not in Xi_V.
std::optional<std::vector<Rational>> recover_eta(const HomTensor<Rational>& c);
std::optional<std::vector<RatFunc>> recover_eta(const AntisymTensor<RatFunc>& c);

// Xi_V = image of iota, basis iota(e^a). Throws DimensionError for n < 3.
TensorSubspace xi_V(int n, FieldTag field = {});

struct Membership {
  bool member = false;
  // Relative least-squares distance |sigma - proj| / |sigma| for rational and
  // float data; 0 or 1 for prime-field data, where no magnitude exists.
  double residual = 0.0;
  std::vector<Rational> rational_coefficients;
  std::vector<std::uint64_t> modp_coefficients;
  std::vector<Complex> float_coefficients;
};

// Exact solve for rational or prime-field subspaces (sigma is reduced mod p
// for the latter); least squares with tolerance field.tol for float ones.
Membership membership(const HomTensor<Rational>& sigma, const TensorSubspace& s);
// Requires a prime-field subspace over the same prime (FieldMismatchError).
Membership membership(const HomTensor<std::uint64_t>& sigma, std::uint64_t p, const TensorSubspace& s);
// Requires a float or rational subspace (FieldMismatchError).
Membership membership(const HomTensor<Complex>& sigma, const TensorSubspace& s);

// Rows sigma -> grad f(u) . sigma(u, v) for sampled cone points u and v in a
// basis of ker grad f(u).
struct ConstraintBatch {
  int n = 0;
  FieldTag field;
  std::vector<std::vector<std::uint64_t>> modp_rows;
  std::vector<std::vector<Complex>> float_rows;
  std::vector<std::vector<std::uint64_t>> modp_u, modp_v;
  std::vector<std::vector<Complex>> float_u, float_v;

  int rows() const;
};

// Row coefficients g_k (u_i v_j - u_j v_i) at coordinate (k, i<j).
template <class Field>
std::vector<typename Field::value_type> xiZ_constraint_row(const Field& field,
                                                           std::span<const typename Field::value_type> g,
                                                           std::span<const typename Field::value_type> u,
                                                           std::span<const typename Field::value_type> v) {
  const int n = static_cast<int>(u.size());
  const int pairs = AntisymTensor<int>::pair_count(n);
  std::vector<typename Field::value_type> row(n * pairs, field.zero());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      auto w = field.sub(field.mul(u[i], v[j]), field.mul(u[j], v[i]));
      if (field.is_zero(w)) continue;
      int pair = AntisymTensor<int>::pair_index(n, i, j);
      for (int k = 0; k < n; ++k) row[k * pairs + pair] = field.mul(g[k], w);
    }
  }
  return row;
}

// Throws ConfigError for a float batch requested with a prime tag and the
// like; SamplingError when not enough smooth points are found.
ConstraintBatch assemble_xiZ_constraints(const Hypersurface& z, int count, std::uint64_t seed, FieldTag field);

struct XiConfig {
  EvalMode backend = EvalMode::ModP;  // Rational runs the exact prime-field path
  std::vector<std::uint64_t> primes;  // empty: two primes above 2^30 derived from seed
  int samples = 0;                    // cone points; 0 picks a count that oversamples the unknowns
  std::uint64_t seed = 1;
  double tol = 1e-8;
};

std::vector<std::uint64_t> default_primes(std::uint64_t seed);
int default_sample_count(int n);

struct XiZResult {
  TensorSubspace subspace;
  int dim = 0;
  int dim_xi_V = 0;
  std::vector<std::uint64_t> primes;
  std::vector<int> prime_dims;  // per prime
  int float_dim = -1;           // -1 when the float backend did not run
  bool stable = true;           // primes agree and doubling the samples does not change the dimension
  bool contains_xi_V = false;
  int samples = 0;
  std::vector<std::string> notes;
};

XiZResult xi_Z(const Hypersurface& z, const XiConfig& cfg);

struct RankResult {
  bool ok = false;
  int rank = 0;
  int expected = 0;
};

// Rank of span{u ^ v} over sampled cone points u and v in ker grad f(u);
// nondegenerate iff the rank is C(n, 2).
RankResult tangent_lines_nondegenerate(const Hypersurface& z, const XiConfig& cfg);
// Rank of the span of sampled cone points; spans iff the rank is n.
RankResult span_check(const Hypersurface& z, const XiConfig& cfg);

}  // namespace ccc
