#include "ccc/cone.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <random>

#include "ccc/errors.hpp"

namespace ccc {

namespace {

std::string format_complex(const Complex& z) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g%+.12gi", z.real(), z.imag());
  return buf;
}

std::string format_vector(std::span<const std::uint64_t> v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  return s + ")";
}

std::string format_vector(std::span<const Complex> v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_complex(v[i]);
  return s + ")";
}

std::string format_vector(std::span<const Rational> v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + to_string(v[i]);
  return s + ")";
}

// Solves m y = b over Z/p; nullopt when m is singular.
std::optional<std::vector<std::uint64_t>> solve_modp(std::vector<std::vector<std::uint64_t>> m,
                                                     std::vector<std::uint64_t> b, std::uint64_t p) {
  const int n = static_cast<int>(b.size());
  for (int col = 0; col < n; ++col) {
    int piv = col;
    while (piv < n && m[piv][col] == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(m[piv], m[col]);
    std::swap(b[piv], b[col]);
    const std::uint64_t inv = modp::inv(m[col][col], p);
    for (int c = col; c < n; ++c) m[col][c] = modp::mul(m[col][c], inv, p);
    b[col] = modp::mul(b[col], inv, p);
    for (int r = 0; r < n; ++r) {
      if (r == col || m[r][col] == 0) continue;
      const std::uint64_t f = m[r][col];
      for (int c = col; c < n; ++c) m[r][c] = modp::sub(m[r][c], modp::mul(f, m[col][c], p), p);
      b[r] = modp::sub(b[r], modp::mul(f, b[col], p), p);
    }
  }
  return b;
}

std::vector<std::vector<std::uint64_t>> matrix_mod(const RatMatrix& a, std::span<const std::uint64_t> x,
                                                   std::uint64_t p) {
  std::vector<std::vector<std::uint64_t>> m(a.rows(), std::vector<std::uint64_t>(a.cols()));
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) m[i][j] = a(i, j).evaluate_mod(x, p);
  }
  return m;
}

Eigen::MatrixXcd matrix_complex(const RatMatrix& a, std::span<const Complex> x) {
  Eigen::MatrixXcd m(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) m(i, j) = a(i, j).evaluate(x);
  }
  return m;
}

template <class T>
std::vector<T> concat(const std::vector<T>& a, const std::vector<T>& b) {
  std::vector<T> out(a);
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

ConeSampleSet sample_modp(const ConeStructure& cs, const ConeSampling& cfg) {
  const int n = cs.n();
  const std::uint64_t p = cfg.field.prime;
  ConeSampleSet out{cfg.field, {}};
  std::mt19937_64 rng(splitmix64(cfg.seed ^ 0x5A3D1E77ULL));
  const RatMatrix& a = cs.omega.matrix();
  const int max_attempts = 50 * std::max(cfg.count, 1);
  int attempts = 0;
  std::uint64_t batch_seed = cfg.seed;
  while (static_cast<int>(out.points.size()) < cfg.count) {
    auto cone = sample_cone_points_modp(cs.z, cfg.count - static_cast<int>(out.points.size()), batch_seed++, p);
    for (const auto& w : cone) {
      if (++attempts > max_attempts) throw SamplingError("no cone samples found after " + std::to_string(max_attempts) + " attempts");
      std::vector<std::uint64_t> x(n);
      for (auto& xi : x) xi = rng() % p;
      try {
        auto y = solve_modp(matrix_mod(a, x, p), w, p);
        if (!y) continue;
        auto point = concat(x, *y);
        if (cs.cone_equation.evaluate_mod(point, p) != 0) continue;
        bool smooth = false;
        for (int j = 0; j < n && !smooth; ++j) smooth = cs.cone_equation.diff(n + j).evaluate_mod(point, p) != 0;
        if (!smooth) continue;
        out.points.push_back({std::move(x), std::move(*y), {}, {}});
      } catch (const PoleError&) {
        continue;
      } catch (const BadPrimeError&) {
        continue;
      }
      if (static_cast<int>(out.points.size()) == cfg.count) break;
    }
  }
  return out;
}

ConeSampleSet sample_float(const ConeStructure& cs, const ConeSampling& cfg) {
  const int n = cs.n();
  ConeSampleSet out{cfg.field, {}};
  std::mt19937_64 rng(splitmix64(cfg.seed ^ 0x7F4A7C15ULL));
  std::uniform_real_distribution<double> unif(-cfg.box_radius, cfg.box_radius);
  const RatMatrix& a = cs.omega.matrix();
  const auto& base = cs.omega.chart().base_point;
  const int max_attempts = 50 * std::max(cfg.count, 1);
  auto cone = sample_cone_points_complex(cs.z, max_attempts, cfg.seed);
  for (int attempt = 0; attempt < max_attempts && static_cast<int>(out.points.size()) < cfg.count; ++attempt) {
    std::vector<Complex> x(n);
    for (int i = 0; i < n; ++i) x[i] = Complex(base[i].get_d() + unif(rng), 0.0);
    try {
      Eigen::MatrixXcd m = matrix_complex(a, x);
      Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
      if (std::abs(lu.determinant()) < 1e-8) continue;
      const auto& w = cone[attempt % cone.size()];
      Eigen::VectorXcd wv = Eigen::Map<const Eigen::VectorXcd>(w.data(), n);
      Eigen::VectorXcd yv = lu.solve(wv);
      std::vector<Complex> y(yv.data(), yv.data() + n);
      // One Newton step along the conjugate gradient of F in y.
      auto point = concat(x, y);
      Complex fval = cs.cone_equation.evaluate(std::span<const Complex>(point));
      std::vector<Complex> g(n);
      double gnorm = 0.0;
      for (int j = 0; j < n; ++j) {
        g[j] = cs.cone_equation.diff(n + j).evaluate(std::span<const Complex>(point));
        gnorm += std::norm(g[j]);
      }
      if (std::sqrt(gnorm) < 1e-8) continue;
      for (int j = 0; j < n; ++j) y[j] -= fval * std::conj(g[j]) / gnorm;
      point = concat(x, y);
      if (std::abs(cs.cone_equation.evaluate(std::span<const Complex>(point))) >= 1e-12) continue;
      out.points.push_back({{}, {}, std::move(x), std::move(y)});
    } catch (const PoleError&) {
      continue;
    }
  }
  if (static_cast<int>(out.points.size()) < cfg.count) {
    throw SamplingError("only " + std::to_string(out.points.size()) + " of " + std::to_string(cfg.count) +
                        " float cone samples found");
  }
  return out;
}

}  // namespace

ConeStructure adapted_cone(const Coframe& omega, const Hypersurface& z) {
  if (omega.n() != z.n) {
    throw DimensionError("coframe has dimension " + std::to_string(omega.n()) + " but Z lies in P^" +
                         std::to_string(z.n - 1));
  }
  ConeStructure cs{omega, z, induced_coframe(omega), structure_function(omega), RatFunc()};
  cs.cone_equation = compose(z.f, cs.induced.mu);
  return cs;
}

ConeSampleSet sample_cone(const ConeStructure& cs, const ConeSampling& cfg) {
  switch (cfg.field.kind) {
    case FieldKind::Prime:
      return sample_modp(cs, cfg);
    case FieldKind::Float:
      return sample_float(cs, cfg);
    case FieldKind::Rational:
      break;
  }
  throw ConfigError("cone sampling needs a prime or float field; rational cone points need not exist");
}

TangencyReport geodesic_tangency_check(const ConeStructure& cs) {
  TangencyReport r;
  r.name = "geodesic tangency";
  r.mode = EvalMode::Rational;
  VectorField gamma = geodesic_flow(cs.induced, tangent_dual_frame(cs.induced));
  RatFunc value = gamma.apply(cs.cone_equation);
  r.symbolic = value.is_zero();
  r.passed = r.symbolic;
  r.detail = "gamma(F) = " + value.to_string(cs.induced.chart.total.variables);
  return r;
}

BracketReport double_bracket_check(const ConeStructure& cs, const ConeSampleSet& samples, double tol) {
  const int n = cs.n();
  const int total = 2 * n;
  const TangentChart& tc = cs.induced.chart;
  BracketReport r;
  r.name = "double bracket";
  r.mode = samples.field.kind == FieldKind::Float ? EvalMode::Float : EvalMode::ModP;

  TangentFrames frames = tangent_dual_frame(cs.induced);
  VectorField gamma = geodesic_flow(cs.induced, frames);
  const RatMatrix& a = cs.omega.matrix();

  // lhs[b][k] = omega(d pi [[D_lambda_b, gamma], gamma])^k, rhs[b][k] = sigma(mu, e_b)^k.
  std::vector<std::vector<RatFunc>> lhs(n), rhs(n);
  r.symbolic = true;
  for (int b = 0; b < n; ++b) {
    VectorField w = bracket(bracket(frames.d_lambda.vector(b), gamma), gamma);
    for (int k = 0; k < n; ++k) {
      RatFunc l(total);
      for (int j = 0; j < n; ++j) l += pullback(a(k, j), tc) * w.comps[tc.x(j)];
      RatFunc s(total);
      for (int i = 0; i < n; ++i) {
        if (i != b) s += pullback(cs.sigma.value(k, i, b), tc) * cs.induced.mu[i];
      }
      if (!(l == s)) r.symbolic = false;
      lhs[b].push_back(std::move(l));
      rhs[b].push_back(std::move(s));
    }
  }

  bool all = r.symbolic;
  for (const auto& pt : samples.points) {
    if (samples.field.kind == FieldKind::Prime) {
      const std::uint64_t p = samples.field.prime;
      auto point = concat(pt.x_mod, pt.y_mod);
      if (cs.cone_equation.evaluate_mod(point, p) != 0) throw SamplingError("sample is not on the cone");
      std::vector<std::uint64_t> mu(n);
      for (int k = 0; k < n; ++k) mu[k] = cs.induced.mu[k].evaluate_mod(point, p);
      std::vector<std::uint64_t> c(cs.sigma.coords().size());
      for (std::size_t i = 0; i < c.size(); ++i) c[i] = cs.sigma.coords()[i].evaluate_mod(pt.x_mod, p);
      HomTensor<std::uint64_t> sig(n, 0);
      sig.coords() = c;
      std::vector<std::vector<std::uint64_t>> lval(n, std::vector<std::uint64_t>(n));
      for (int b = 0; b < n; ++b) {
        for (int k = 0; k < n; ++k) lval[b][k] = lhs[b][k].evaluate_mod(point, p);
      }
      for (const auto& v : tangent_basis_modp(cs.z, mu, p)) {
        std::vector<std::uint64_t> left(n, 0), right(n, 0);
        for (int k = 0; k < n; ++k) {
          for (int b = 0; b < n; ++b) left[k] = modp::add(left[k], modp::mul(v[b], lval[b][k], p), p);
          for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
              std::uint64_t wedge = modp::sub(modp::mul(mu[i], v[j], p), modp::mul(mu[j], v[i], p), p);
              right[k] = modp::add(right[k], modp::mul(sig.at(k, i, j), wedge, p), p);
            }
          }
        }
        double res = left == right ? 0.0 : 1.0;
        if (res != 0.0) all = false;
        r.max_residual = std::max(r.max_residual, res);
        r.entries.push_back({"x=" + format_vector(pt.x_mod) + " y=" + format_vector(pt.y_mod) + " v=" + format_vector(v),
                             format_vector(left), format_vector(right), res});
      }
    } else if (samples.field.kind == FieldKind::Float) {
      auto point = concat(pt.x_c, pt.y_c);
      std::span<const Complex> ps(point);
      if (std::abs(cs.cone_equation.evaluate(ps)) > 1e-10) throw SamplingError("sample is not on the cone");
      std::vector<Complex> mu(n);
      for (int k = 0; k < n; ++k) mu[k] = cs.induced.mu[k].evaluate(ps);
      AntisymTensor<Complex> sig = cs.sigma.evaluate(std::span<const Complex>(pt.x_c));
      std::vector<std::vector<Complex>> lval(n, std::vector<Complex>(n));
      for (int b = 0; b < n; ++b) {
        for (int k = 0; k < n; ++k) lval[b][k] = lhs[b][k].evaluate(ps);
      }
      for (const auto& v : tangent_basis_complex(cs.z, mu)) {
        std::vector<Complex> left(n, 0.0), right(n, 0.0);
        double diff = 0.0, scale = 0.0;
        for (int k = 0; k < n; ++k) {
          for (int b = 0; b < n; ++b) left[k] += v[b] * lval[b][k];
          for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) right[k] += sig.at(k, i, j) * (mu[i] * v[j] - mu[j] * v[i]);
          }
          diff += std::norm(left[k] - right[k]);
          scale = std::max({scale, std::abs(left[k]), std::abs(right[k])});
        }
        diff = std::sqrt(diff);
        double res = scale > 1e-14 ? diff / scale : diff;
        if (!(res < tol)) all = false;
        r.max_residual = std::max(r.max_residual, res);
        r.entries.push_back({"x=" + format_vector(pt.x_c) + " y=" + format_vector(pt.y_c) + " v=" + format_vector(v),
                             format_vector(left), format_vector(right), res});
      }
    } else {
      throw ConfigError("double bracket samples must come from a prime or float field");
    }
  }
  r.passed = all;
  r.detail = std::string(r.symbolic ? "identity holds" : "identity fails") + " as rational functions; " +
             std::to_string(r.entries.size()) + " sample checks";
  return r;
}

CharacteristicReport characteristic_check(const ConeStructure& cs, const TensorSubspace& xi_z, int samples,
                                          std::uint64_t seed) {
  const int n = cs.n();
  if (xi_z.n != n) throw DimensionError("subspace dimension does not match the cone structure");
  CharacteristicReport r;
  r.field = xi_z.field;
  r.passed = true;
  const auto& base = cs.omega.chart().base_point;
  std::mt19937_64 rng(splitmix64(seed ^ 0x3C6EF372ULL));
  const int max_attempts = 50 * std::max(samples, 1);
  for (int attempt = 0; attempt < max_attempts && r.samples < samples; ++attempt) {
    SampleEntry e;
    Membership m;
    std::vector<Rational> rational_point;
    try {
      switch (xi_z.field.kind) {
        case FieldKind::Rational: {
          rational_point = base;
          if (r.samples > 0) {
            auto off = sample_rational_point(n, seed, r.samples, attempt);
            for (int i = 0; i < n; ++i) rational_point[i] += off[i] / 20;
          }
          m = membership(cs.sigma.evaluate(std::span<const Rational>(rational_point)), xi_z);
          e.point = format_vector(rational_point);
          break;
        }
        case FieldKind::Prime: {
          const std::uint64_t p = xi_z.field.prime;
          std::vector<std::uint64_t> x(n);
          for (auto& xi : x) xi = rng() % p;
          HomTensor<std::uint64_t> t(n, 0);
          for (std::size_t i = 0; i < t.coords().size(); ++i) t.coords()[i] = cs.sigma.coords()[i].evaluate_mod(x, p);
          m = membership(t, p, xi_z);
          e.point = format_vector(x);
          break;
        }
        case FieldKind::Float: {
          std::uniform_real_distribution<double> unif(-0.25, 0.25);
          std::vector<Complex> x(n);
          for (int i = 0; i < n; ++i) x[i] = Complex(base[i].get_d() + unif(rng), 0.0);
          m = membership(cs.sigma.evaluate(std::span<const Complex>(x)), xi_z);
          e.point = format_vector(x);
          break;
        }
      }
    } catch (const PoleError&) {
      continue;
    } catch (const BadPrimeError&) {
      continue;
    }
    ++r.samples;
    e.residual = m.residual;
    e.lhs = m.member ? "member" : "nonmember";
    r.max_residual = std::max(r.max_residual, m.residual);
    if (!m.member && !r.witness) {
      r.passed = false;
      r.witness = e;
      r.witness_point = rational_point;
    }
    r.entries.push_back(std::move(e));
  }
  if (r.samples < samples) throw SamplingError("could not find pole-free points for the characteristic check");
  r.detail = r.passed ? "sigma lies in the subspace at every sample"
                      : "sigma leaves the subspace at " + r.witness->point;
  return r;
}

}  // namespace ccc
