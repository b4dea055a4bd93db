#include "ccc/xi.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "ccc/linalg.hpp"

namespace ccc {

std::string FieldTag::to_string() const {
  switch (kind) {
    case FieldKind::Rational:
      return "rational";
    case FieldKind::Prime:
      return "modp(" + std::to_string(prime) + ")";
    case FieldKind::Float:
      return "float";
  }
  return "?";
}

int TensorSubspace::dim() const {
  switch (field.kind) {
    case FieldKind::Rational:
      return static_cast<int>(rational_basis.size());
    case FieldKind::Prime:
      return static_cast<int>(modp_basis.size());
    case FieldKind::Float:
      return static_cast<int>(float_basis.size());
  }
  return 0;
}

int ConstraintBatch::rows() const {
  return static_cast<int>(field.kind == FieldKind::Float ? float_rows.size() : modp_rows.size());
}

HomTensor<Rational> iota(std::span<const Rational> eta) { return iota(eta, Rational(0)); }

std::optional<std::vector<Rational>> recover_eta(const HomTensor<Rational>& c) {
  auto eta = eta_trace(c, Rational(0));
  if (!(iota(std::span<const Rational>(eta)) == c)) return std::nullopt;
  return eta;
}

std::optional<std::vector<RatFunc>> recover_eta(const AntisymTensor<RatFunc>& c) {
  const int nv = c.coords().empty() ? 0 : c.coords()[0].nvars();
  auto eta = eta_trace(c, RatFunc(nv));
  if (!(iota(std::span<const RatFunc>(eta), RatFunc(nv)) == c)) return std::nullopt;
  return eta;
}

namespace {

std::vector<Rational> iota_coords(int n, int a) {
  std::vector<Rational> e(n, Rational(0));
  e[a] = 1;
  return iota(std::span<const Rational>(e)).coords();
}

std::vector<std::uint64_t> reduce(const std::vector<Rational>& v, std::uint64_t p) {
  std::vector<std::uint64_t> out;
  for (const auto& x : v) out.push_back(modp::from_rational(x, p));
  return out;
}

std::vector<Complex> to_complex(const std::vector<Rational>& v) {
  std::vector<Complex> out;
  for (const auto& x : v) out.emplace_back(x.get_d());
  return out;
}

Membership least_squares(const std::vector<Complex>& sigma, const std::vector<std::vector<Complex>>& basis,
                         double tol) {
  Membership out;
  const int m = static_cast<int>(sigma.size());
  const int d = static_cast<int>(basis.size());
  Eigen::VectorXcd s(m);
  for (int i = 0; i < m; ++i) s(i) = sigma[i];
  double norm = s.norm();
  if (norm == 0.0) {
    out.member = true;
    out.float_coefficients.assign(d, 0.0);
    return out;
  }
  if (d == 0) {
    out.residual = 1.0;
    return out;
  }
  Eigen::MatrixXcd b(m, d);
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < m; ++i) b(i, j) = basis[j][i];
  }
  Eigen::VectorXcd x = b.completeOrthogonalDecomposition().solve(s);
  out.residual = (b * x - s).norm() / norm;
  out.member = out.residual < tol;
  out.float_coefficients.assign(x.data(), x.data() + d);
  return out;
}

}  // namespace

TensorSubspace xi_V(int n, FieldTag field) {
  if (n < 3) throw DimensionError("Xi_V is only meaningful for n >= 3");
  TensorSubspace s;
  s.n = n;
  s.field = field;
  for (int a = 0; a < n; ++a) {
    auto v = iota_coords(n, a);
    switch (field.kind) {
      case FieldKind::Rational:
        s.rational_basis.push_back(std::move(v));
        break;
      case FieldKind::Prime:
        s.modp_basis.push_back(reduce(v, field.prime));
        break;
      case FieldKind::Float:
        s.float_basis.push_back(to_complex(v));
        break;
    }
  }
  return s;
}

Membership membership(const HomTensor<Rational>& sigma, const TensorSubspace& s) {
  if (sigma.n() != s.n) throw DimensionError("tensor and subspace dimensions differ");
  switch (s.field.kind) {
    case FieldKind::Rational: {
      auto [coeffs, residual] = solve_in_span(RationalField{}, s.rational_basis, sigma.coords());
      std::vector<std::vector<Complex>> basis;
      for (const auto& b : s.rational_basis) basis.push_back(to_complex(b));
      Membership out = least_squares(to_complex(sigma.coords()), basis, s.field.tol);
      out.member = coeffs.has_value();
      if (out.member) {
        out.residual = 0.0;
        out.rational_coefficients = *coeffs;
      }
      return out;
    }
    case FieldKind::Prime: {
      HomTensor<std::uint64_t> reduced(sigma.n(), 0);
      reduced.coords() = reduce(sigma.coords(), s.field.prime);
      return membership(reduced, s.field.prime, s);
    }
    case FieldKind::Float: {
      HomTensor<Complex> c(sigma.n(), 0.0);
      c.coords() = to_complex(sigma.coords());
      return membership(c, s);
    }
  }
  return {};
}

Membership membership(const HomTensor<std::uint64_t>& sigma, std::uint64_t p, const TensorSubspace& s) {
  if (s.field.kind != FieldKind::Prime || s.field.prime != p) {
    throw FieldMismatchError("prime-field tensor over " + std::to_string(p) + " tested against a " +
                             s.field.to_string() + " subspace");
  }
  if (sigma.n() != s.n) throw DimensionError("tensor and subspace dimensions differ");
  auto [coeffs, residual] = solve_in_span(PrimeField(p), s.modp_basis, sigma.coords());
  Membership out;
  out.member = coeffs.has_value();
  out.residual = out.member ? 0.0 : 1.0;
  if (coeffs) out.modp_coefficients = *coeffs;
  return out;
}

Membership membership(const HomTensor<Complex>& sigma, const TensorSubspace& s) {
  if (sigma.n() != s.n) throw DimensionError("tensor and subspace dimensions differ");
  if (s.field.kind == FieldKind::Prime) {
    throw FieldMismatchError("float tensor tested against a " + s.field.to_string() + " subspace");
  }
  if (s.field.kind == FieldKind::Float) return least_squares(sigma.coords(), s.float_basis, s.field.tol);
  std::vector<std::vector<Complex>> basis;
  for (const auto& b : s.rational_basis) basis.push_back(to_complex(b));
  return least_squares(sigma.coords(), basis, s.field.tol);
}

ConstraintBatch assemble_xiZ_constraints(const Hypersurface& z, int count, std::uint64_t seed, FieldTag field) {
  ConstraintBatch batch;
  batch.n = z.n;
  batch.field = field;
  if (field.kind == FieldKind::Rational) {
    throw ConfigError("Xi_Z constraints are assembled over a prime field or in floating point");
  }
  if (field.kind == FieldKind::Prime) {
    const std::uint64_t p = field.prime;
    PrimeField fp(p);
    for (const auto& u : sample_cone_points_modp(z, count, seed, p)) {
      std::vector<std::uint64_t> g;
      for (const auto& d : z.gradient) g.push_back(d.evaluate_mod(u, p));
      for (auto& v : tangent_basis_modp(z, u, p)) {
        batch.modp_rows.push_back(xiZ_constraint_row(fp, std::span<const std::uint64_t>(g),
                                                     std::span<const std::uint64_t>(u),
                                                     std::span<const std::uint64_t>(v)));
        batch.modp_u.push_back(u);
        batch.modp_v.push_back(std::move(v));
      }
    }
  } else {
    ComplexField fc;
    for (const auto& u : sample_cone_points_complex(z, count, seed)) {
      std::vector<Complex> g;
      for (const auto& d : z.gradient) g.push_back(d.evaluate(std::span<const Complex>(u)));
      for (auto& v : tangent_basis_complex(z, u)) {
        auto row = xiZ_constraint_row(fc, std::span<const Complex>(g), std::span<const Complex>(u),
                                      std::span<const Complex>(v));
        double norm = 0.0;
        for (const auto& x : row) norm += std::norm(x);
        norm = std::sqrt(norm);
        if (norm > 0.0) {
          for (auto& x : row) x /= norm;
        }
        batch.float_rows.push_back(std::move(row));
        batch.float_u.push_back(u);
        batch.float_v.push_back(std::move(v));
      }
    }
  }
  return batch;
}

std::vector<std::uint64_t> default_primes(std::uint64_t seed) {
  constexpr std::uint64_t base = 1ULL << 30;
  constexpr std::uint64_t span = 1ULL << 29;
  std::uint64_t p1 = next_prime(base + splitmix64(seed) % span);
  std::uint64_t p2 = next_prime(base + span + splitmix64(seed + 1) % span);
  return {p1, p2};
}

int default_sample_count(int n) {
  const int unknowns = hom_dimension(n);
  return (2 * unknowns + n - 2) / (n - 1) + 10;
}

XiZResult xi_Z(const Hypersurface& z, const XiConfig& cfg) {
  const int n = z.n;
  const int ncols = hom_dimension(n);
  XiZResult res;
  res.samples = cfg.samples > 0 ? cfg.samples : default_sample_count(n);
  res.dim_xi_V = n;
  const int half_rows = res.samples * (n - 1);

  if (cfg.backend == EvalMode::Float) {
    ConstraintBatch batch = assemble_xiZ_constraints(z, 2 * res.samples, cfg.seed, FieldTag::floating(cfg.tol));
    auto kernel_of = [&](int rows) {
      Eigen::MatrixXcd m(rows, ncols);
      for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < ncols; ++c) m(r, c) = batch.float_rows[r][c];
      }
      return svd_kernel(m, cfg.tol);
    };
    SvdKernel half = kernel_of(half_rows);
    SvdKernel full = kernel_of(batch.rows());
    res.float_dim = static_cast<int>(full.basis.cols());
    res.dim = res.float_dim;
    res.stable = half.basis.cols() == full.basis.cols();
    if (!res.stable) res.notes.push_back("float kernel dimension changed when the samples were doubled");
    res.subspace.n = n;
    res.subspace.field = FieldTag::floating(cfg.tol);
    for (int c = 0; c < full.basis.cols(); ++c) {
      res.subspace.float_basis.emplace_back(full.basis.col(c).data(), full.basis.col(c).data() + ncols);
    }
    res.contains_xi_V = true;
    for (int a = 0; a < n; ++a) {
      HomTensor<Complex> t(n, 0.0);
      t.coords() = to_complex(iota_coords(n, a));
      if (!membership(t, res.subspace).member) res.contains_xi_V = false;
    }
    return res;
  }

  if (cfg.backend == EvalMode::Rational) {
    res.notes.push_back("exact mode runs over prime fields: the cone generally has too few rational points to sample");
  }
  res.primes = cfg.primes.empty() ? default_primes(cfg.seed) : cfg.primes;
  res.contains_xi_V = true;
  for (std::size_t idx = 0; idx < res.primes.size(); ++idx) {
    const std::uint64_t p = res.primes[idx];
    if (!modp::is_prime(p)) throw ConfigError(std::to_string(p) + " is not prime");
    ConstraintBatch batch = assemble_xiZ_constraints(z, 2 * res.samples, cfg.seed, FieldTag::modp(p));
    Echelon<PrimeField> e(PrimeField(p), ncols);
    for (int r = 0; r < half_rows; ++r) e.insert(batch.modp_rows[r]);
    int half_dim = ncols - e.rank();
    for (int r = half_rows; r < batch.rows(); ++r) e.insert(batch.modp_rows[r]);
    int dim = ncols - e.rank();
    res.prime_dims.push_back(dim);
    if (half_dim != dim) {
      res.stable = false;
      res.notes.push_back("kernel dimension over " + std::to_string(p) + " changed from " +
                          std::to_string(half_dim) + " to " + std::to_string(dim) + " when the samples were doubled");
    }
    TensorSubspace kernel;
    kernel.n = n;
    kernel.field = FieldTag::modp(p);
    kernel.modp_basis = e.kernel();
    for (int a = 0; a < n; ++a) {
      HomTensor<std::uint64_t> t(n, 0);
      t.coords() = reduce(iota_coords(n, a), p);
      if (!membership(t, p, kernel).member) res.contains_xi_V = false;
    }
    if (idx == 0) {
      res.subspace = std::move(kernel);
      res.dim = dim;
    } else if (dim != res.dim) {
      res.stable = false;
      res.notes.push_back("primes disagree on dim Xi_Z");
    }
  }
  return res;
}

RankResult tangent_lines_nondegenerate(const Hypersurface& z, const XiConfig& cfg) {
  const int n = z.n;
  const int pairs = AntisymTensor<int>::pair_count(n);
  const std::uint64_t p = cfg.primes.empty() ? default_primes(cfg.seed)[0] : cfg.primes[0];
  const int count = cfg.samples > 0 ? cfg.samples : default_sample_count(n);
  Echelon<PrimeField> e(PrimeField(p), pairs);
  for (const auto& u : sample_cone_points_modp(z, count, cfg.seed, p)) {
    for (const auto& v : tangent_basis_modp(z, u, p)) {
      std::vector<std::uint64_t> w(pairs);
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          w[AntisymTensor<int>::pair_index(n, i, j)] =
              modp::sub(modp::mul(u[i], v[j], p), modp::mul(u[j], v[i], p), p);
        }
      }
      e.insert(std::move(w));
    }
  }
  return {e.rank() == pairs, e.rank(), pairs};
}

RankResult span_check(const Hypersurface& z, const XiConfig& cfg) {
  const int n = z.n;
  const std::uint64_t p = cfg.primes.empty() ? default_primes(cfg.seed)[0] : cfg.primes[0];
  const int count = cfg.samples > 0 ? cfg.samples : default_sample_count(n);
  Echelon<PrimeField> e(PrimeField(p), n);
  for (auto& u : sample_cone_points_modp(z, count, cfg.seed, p, false)) e.insert(std::move(u));
  return {e.rank() == n, e.rank(), n};
}

}  // namespace ccc
