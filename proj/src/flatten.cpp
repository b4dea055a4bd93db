#include "ccc/flatten.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "ccc/errors.hpp"
#include "ccc/linalg.hpp"

namespace ccc {

namespace {

std::vector<Rational> to_rational_offset(const std::vector<Rational>& base, std::uint64_t seed, std::uint64_t index,
                                         int attempt) {
  auto off = sample_rational_point(static_cast<int>(base.size()), seed, index, attempt);
  std::vector<Rational> p = base;
  for (std::size_t i = 0; i < p.size(); ++i) p[i] += off[i] / 20;
  return p;
}

std::vector<double> to_double(std::span<const Rational> v) {
  std::vector<double> out;
  for (const auto& x : v) out.push_back(x.get_d());
  return out;
}

std::vector<double> real_offset(std::span<const Rational> base, std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> unif(-radius, radius);
  std::vector<double> x;
  for (const auto& b : base) x.push_back(b.get_d() + unif(rng));
  return x;
}

bool all_zero(const std::vector<RatFunc>& v) {
  for (const auto& f : v) {
    if (!f.is_zero()) return false;
  }
  return true;
}

// All monomials in nvars variables of total degree between lo and hi.
void monomials_upto(int nvars, int lo, int hi, int var, Monomial cur, int deg, std::vector<Monomial>& out) {
  if (var == nvars) {
    if (deg >= lo) out.push_back(cur);
    return;
  }
  for (int e = 0; deg + e <= hi; ++e) {
    cur.e[var] = static_cast<std::uint8_t>(e);
    monomials_upto(nvars, lo, hi, var + 1, cur, deg + e, out);
  }
}

// Splits a factor list into pairwise coprime nonconstant factors.
std::vector<MultiPoly> coprime_refinement(std::vector<MultiPoly> factors) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < factors.size() && !changed; ++i) {
      for (std::size_t j = i + 1; j < factors.size() && !changed; ++j) {
        if (factors[i] == factors[j]) {
          factors.erase(factors.begin() + static_cast<long>(j));
          changed = true;
          break;
        }
        MultiPoly g = gcd(factors[i], factors[j]);
        if (g.is_constant()) continue;
        MultiPoly a = *factors[i].divide_exact(g);
        MultiPoly b = *factors[j].divide_exact(g);
        factors.erase(factors.begin() + static_cast<long>(j));
        factors.erase(factors.begin() + static_cast<long>(i));
        for (auto* p : {&a, &b, &g}) {
          if (!p->is_constant()) factors.push_back(p->primitive());
        }
        changed = true;
      }
    }
  }
  return factors;
}

int multiplicity(const MultiPoly& factor, MultiPoly poly) {
  int m = 0;
  while (!poly.is_constant()) {
    auto q = poly.divide_exact(factor);
    if (!q) break;
    poly = std::move(*q);
    ++m;
  }
  return m;
}

// Vector-valued adaptive Simpson on [a, b].
struct Simpson {
  const std::function<std::vector<double>(double)>& g;
  double tol;

  static double max_abs_diff(const std::vector<double>& x, const std::vector<double>& y) {
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
    return m;
  }

  std::vector<double> rule(double a, double b, const std::vector<double>& fa, const std::vector<double>& fm,
                           const std::vector<double>& fb) const {
    std::vector<double> s(fa.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = (b - a) / 6.0 * (fa[i] + 4.0 * fm[i] + fb[i]);
    return s;
  }

  std::vector<double> recurse(double a, double b, const std::vector<double>& fa, const std::vector<double>& fm,
                              const std::vector<double>& fb, const std::vector<double>& whole, double eps,
                              int depth) const {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    auto flm = g(lm), frm = g(rm);
    auto left = rule(a, m, fa, flm, fm), right = rule(m, b, fm, frm, fb);
    std::vector<double> sum(left.size());
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = left[i] + right[i];
    const double err = max_abs_diff(sum, whole);
    if (depth <= 0) throw PoleError("quadrature did not converge (pole near the path?)");
    if (err <= 15.0 * eps) {
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += (sum[i] - whole[i]) / 15.0;
      return sum;
    }
    auto l = recurse(a, m, fa, flm, fm, left, eps / 2, depth - 1);
    auto r = recurse(m, b, fm, frm, fb, right, eps / 2, depth - 1);
    for (std::size_t i = 0; i < l.size(); ++i) l[i] += r[i];
    return l;
  }

  std::vector<double> integrate(double a, double b) const {
    auto fa = g(a), fb = g(b), fm = g(0.5 * (a + b));
    if (a == b) return std::vector<double>(fa.size(), 0.0);
    return recurse(a, b, fa, fm, fb, rule(a, b, fa, fm, fb), tol, 48);
  }
};

std::vector<double> checked(std::vector<double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) throw PoleError("non-finite integrand");
  }
  return v;
}

std::vector<double> eval_components(std::span<const RatFunc> comps, std::span<const double> x) {
  std::vector<double> out;
  out.reserve(comps.size());
  for (const auto& c : comps) out.push_back(c.evaluate(x));
  return checked(std::move(out));
}

}  // namespace

// ------------------------------------------------------------ verdict

std::string to_string(Closedness c) {
  switch (c) {
    case Closedness::Closed:
      return "closed";
    case Closedness::ConformallyClosed:
      return "conformally_closed";
    case Closedness::NotConformallyClosed:
      return "not_conformally_closed";
  }
  return "unknown";
}

ClosednessVerdict conformal_closedness_test(const Coframe& omega) {
  const int n = omega.n();
  const RatMatrix& a = omega.matrix();
  ClosednessVerdict v;
  VValuedForm2 w = exterior_derivative(omega);
  if (all_zero(w.coords())) {
    v.kind = Closedness::Closed;
    v.xi.assign(n, RatFunc(n));
    v.alpha.assign(n, RatFunc(n));
    v.detail = "d omega = 0";
    return v;
  }
  StructureFunction sigma = structure_function(omega);
  auto eta = recover_eta(sigma);
  if (!eta) {
    v.kind = Closedness::NotConformallyClosed;
    TensorSubspace xv = xi_V(n);
    const auto& base = omega.chart().base_point;
    for (int attempt = 0; attempt < 200; ++attempt) {
      std::vector<Rational> p = attempt == 0 ? base : to_rational_offset(base, 0x51A7ULL, attempt, 0);
      try {
        Membership m = membership(sigma.evaluate(std::span<const Rational>(p)), xv);
        if (!m.member) {
          v.witness = p;
          v.residual = m.residual;
          break;
        }
      } catch (const PoleError&) {
        continue;
      }
    }
    v.detail = "sigma is not iota of its trace";
    return v;
  }
  v.kind = Closedness::ConformallyClosed;
  v.xi = *eta;
  v.alpha.assign(n, RatFunc(n));
  for (int i = 0; i < n; ++i) {
    for (int b = 0; b < n; ++b) {
      if (!v.xi[b].is_zero() && !a(b, i).is_zero()) v.alpha[i] += v.xi[b] * a(b, i);
    }
  }
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (!(w.at(k, i, j) == v.alpha[i] * a(k, j) - v.alpha[j] * a(k, i))) {
          throw InternalIdentityError("d omega differs from (xi # omega) ^ omega although sigma = iota(xi)");
        }
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!(v.alpha[j].diff(i) == v.alpha[i].diff(j))) {
        throw InternalIdentityError("xi # omega is not closed for a conformally closed coframe");
      }
    }
  }
  v.detail = "sigma = iota(xi) and d(xi # omega) = 0";
  return v;
}

// ------------------------------------------------------- log functions

bool LogForm::is_zero() const { return rational.is_zero() && logs.empty(); }

double LogForm::evaluate(std::span<const double> x) const {
  double s = rational.evaluate(x);
  for (const auto& t : logs) s += t.coeff.get_d() * std::log(std::abs(t.arg.evaluate(x) / t.arg_at_base.get_d()));
  return s;
}

std::vector<RatFunc> LogForm::gradient() const {
  std::vector<RatFunc> g;
  for (int i = 0; i < nvars; ++i) {
    RatFunc d = rational.diff(i);
    for (const auto& t : logs) d += RatFunc::quotient(t.arg.diff(i), t.arg) * t.coeff;
    g.push_back(std::move(d));
  }
  return g;
}

std::string LogForm::to_string(std::span<const std::string> names) const {
  std::string s;
  if (!rational.is_zero()) s = rational.to_string(names);
  for (const auto& t : logs) {
    if (!s.empty()) s += " + ";
    std::string arg = t.arg.to_string(names);
    if (t.arg_at_base != 1) arg = "(" + arg + ")/(" + ccc::to_string(t.arg_at_base) + ")";
    s += "(" + ccc::to_string(t.coeff) + ")*log|" + arg + "|";
  }
  return s.empty() ? "0" : s;
}

std::optional<LogForm> integrate_closed_rational(std::span<const RatFunc> beta, std::span<const Rational> base) {
  const int n = static_cast<int>(beta.size());
  if (static_cast<int>(base.size()) != n) throw IndexError("one base coordinate per component required");
  for (const auto& b : beta) {
    if (b.nvars() != n) throw IndexError("1-form components must live on the chart");
  }
  LogForm out;
  out.nvars = n;
  out.rational = RatFunc(n);
  if (all_zero(std::vector<RatFunc>(beta.begin(), beta.end()))) return out;

  std::vector<MultiPoly> bases;
  for (const auto& b : beta) {
    for (const auto& f : b.denominator_factors()) bases.push_back(f.base.primitive());
  }
  bases = coprime_refinement(std::move(bases));
  std::vector<MultiPoly> dens;
  for (const auto& b : beta) dens.push_back(b.denominator());
  MultiPoly d(n, Rational(1)), p_all(n, Rational(1));
  for (const auto& p : bases) {
    int e = 0;
    for (const auto& den : dens) e = std::max(e, multiplicity(p, den));
    for (int k = 1; k < e; ++k) d *= p;
    p_all *= p;
  }
  int excess = 0;
  for (std::size_t i = 0; i < beta.size(); ++i) {
    if (beta[i].is_zero()) continue;
    excess = std::max(excess, beta[i].numerator().total_degree() - dens[i].total_degree() + 1);
  }
  const int dn = d.total_degree() + excess;
  std::vector<Monomial> monos;
  monomials_upto(n, d.is_constant() ? 1 : 0, dn, 0, Monomial{}, 0, monos);
  if (monos.size() > 2000) return std::nullopt;

  const int unknowns = static_cast<int>(bases.size() + monos.size());
  // Columns and target per equation i, as polynomials scaled by M_i = D^2 P den_i.
  std::vector<std::vector<MultiPoly>> cols(unknowns);
  std::vector<MultiPoly> target;
  const MultiPoly d2 = d * d;
  for (int i = 0; i < n; ++i) {
    const MultiPoly m_i = d2 * p_all * dens[i];
    const MultiPoly over_d2 = p_all * dens[i];
    for (std::size_t j = 0; j < bases.size(); ++j) {
      cols[j].push_back(bases[j].diff(i) * *m_i.divide_exact(bases[j]));
    }
    const MultiPoly di = d.diff(i);
    for (std::size_t c = 0; c < monos.size(); ++c) {
      MultiPoly mono = MultiPoly::monomial(n, monos[c], Rational(1));
      cols[bases.size() + c].push_back((mono.diff(i) * d - mono * di) * over_d2);
    }
    target.push_back(beta[i].numerator() * *m_i.divide_exact(dens[i]));
  }
  // Flatten the polynomial identities into coefficient vectors.
  std::map<std::pair<int, Monomial>, int> index;
  auto collect = [&](int eq, const MultiPoly& p) {
    for (const auto& [m, c] : p.terms()) index.emplace(std::make_pair(eq, m), 0);
  };
  for (int i = 0; i < n; ++i) {
    collect(i, target[i]);
    for (const auto& col : cols) collect(i, col[i]);
  }
  int row = 0;
  for (auto& [key, value] : index) value = row++;
  auto flatten = [&](const std::vector<MultiPoly>& polys) {
    std::vector<Rational> v(row, Rational(0));
    for (int i = 0; i < n; ++i) {
      for (const auto& [m, c] : polys[i].terms()) v[index.at({i, m})] = c;
    }
    return v;
  };
  std::vector<std::vector<Rational>> basis;
  for (const auto& col : cols) basis.push_back(flatten(col));
  auto [coeffs, residual] = solve_in_span(RationalField{}, basis, flatten(target));
  if (!coeffs) return std::nullopt;

  MultiPoly num(n);
  for (std::size_t c = 0; c < monos.size(); ++c) {
    const Rational& q = (*coeffs)[bases.size() + c];
    if (sgn(q) != 0) num += MultiPoly::monomial(n, monos[c], q);
  }
  RatFunc r = RatFunc::quotient(num, d);
  if (!r.is_zero()) {
    Rational at_base = r.evaluate(base);
    out.rational = r - RatFunc(n, at_base);
  }
  for (std::size_t j = 0; j < bases.size(); ++j) {
    const Rational& q = (*coeffs)[j];
    if (sgn(q) == 0) continue;
    Rational at_base = bases[j].evaluate(base);
    if (sgn(at_base) == 0) throw PoleError("log argument vanishes at the base point");
    out.logs.push_back({q, bases[j], at_base});
  }
  auto g = out.gradient();
  for (int i = 0; i < n; ++i) {
    if (!(g[i] == beta[i])) return std::nullopt;
  }
  return out;
}

// ---------------------------------------------------------- quadrature

PathIntegral integrate_along_paths(const FormEvaluator& form, int forms, std::span<const double> base,
                                   std::span<const double> x, double tol) {
  const int n = static_cast<int>(base.size());
  std::vector<std::vector<int>> orders;
  for (int s = 0; s < n; ++s) {
    std::vector<int> fwd, rev;
    for (int k = 0; k < n; ++k) fwd.push_back((s + k) % n);
    rev.assign(fwd.rbegin(), fwd.rend());
    orders.push_back(fwd);
    orders.push_back(rev);
  }
  PathIntegral res;
  for (const auto& order : orders) {
    try {
      std::vector<double> p(base.begin(), base.end());
      std::vector<double> total(forms, 0.0);
      for (int c : order) {
        std::function<std::vector<double>(double)> g = [&](double t) {
          std::vector<double> q = p;
          q[c] = t;
          auto all = checked(form(q));
          std::vector<double> out(forms);
          for (int k = 0; k < forms; ++k) out[k] = all[k * n + c];
          return out;
        };
        Simpson s{g, tol};
        auto leg = s.integrate(p[c], x[c]);
        for (int k = 0; k < forms; ++k) total[k] += leg[k];
        p[c] = x[c];
      }
      if (res.paths == 0) {
        res.value = total;
      } else {
        for (int k = 0; k < forms; ++k) {
          res.path_discrepancy = std::max(res.path_discrepancy, std::abs(total[k] - res.value[k]));
        }
      }
      if (++res.paths == 2) break;
    } catch (const PoleError&) {
      continue;
    }
  }
  if (res.paths == 0) throw PoleError("no pole-free integration path found");
  return res;
}

// --------------------------------------------------------------- h, f, zeta

PathIntegral HFunction::quadrature(std::span<const double> x) const {
  auto b = to_double(base);
  const auto& comps = alpha;
  return integrate_along_paths([&comps](std::span<const double> p) { return eval_components(comps, p); }, 1, b, x,
                               tol);
}

double HFunction::evaluate(std::span<const double> x) const {
  return symbolic ? form.evaluate(x) : quadrature(x).value[0];
}

HFunction integrate_h(const Coframe& omega, const ClosednessVerdict& verdict, bool force_quadrature) {
  if (verdict.kind == Closedness::NotConformallyClosed) {
    throw ConfigError("h exists only for conformally closed coframes");
  }
  const int n = omega.n();
  HFunction h;
  h.alpha = verdict.alpha;
  h.base = omega.chart().base_point;
  h.form.nvars = n;
  h.form.rational = RatFunc(n);
  if (verdict.kind == Closedness::Closed) {
    h.symbolic = true;
    return h;
  }
  if (!force_quadrature) {
    if (auto form = integrate_closed_rational(h.alpha, h.base)) {
      h.symbolic = true;
      h.form = std::move(*form);
    }
  }
  return h;
}

double ConformalFactor::evaluate(std::span<const double> x) const {
  return rational ? f.evaluate(x) : std::exp(-h.evaluate(x));
}

std::string ConformalFactor::to_string(std::span<const std::string> names) const {
  if (rational) return f.to_string(names);
  if (h.symbolic) return "exp(-(" + h.form.to_string(names) + "))";
  return "exp(-h), h by path quadrature";
}

ConformalFactor conformal_factor(const HFunction& h) {
  const int n = h.form.nvars;
  ConformalFactor cf;
  cf.h = h;
  if (!h.symbolic || !h.form.rational.is_zero()) return cf;
  for (const auto& t : h.form.logs) {
    if (t.coeff.get_den() != 1) return cf;
  }
  RatFunc f(n, Rational(1));
  for (const auto& t : h.form.logs) {
    // (p / p0)^(-q)
    RatFunc ratio = RatFunc(t.arg) * Rational(1 / t.arg_at_base);
    long e = -t.coeff.get_num().get_si();
    f *= e >= 0 ? ratio.pow(static_cast<unsigned>(e)) : ratio.inverse().pow(static_cast<unsigned>(-e));
  }
  cf.rational = true;
  cf.f = f;
  return cf;
}

ClosureCheck verify_closure(const Coframe& omega, const ConformalFactor& f, int samples, std::uint64_t seed,
                            double tol) {
  const int n = omega.n();
  const RatMatrix& a = omega.matrix();
  ClosureCheck c;
  if (f.rational) {
    RatMatrix fa(n, n, RatFunc(n));
    for (int k = 0; k < n; ++k) {
      for (int j = 0; j < n; ++j) fa(k, j) = f.f * a(k, j);
    }
    c.exact = true;
    VValuedForm2 w = exterior_derivative(Coframe(omega.chart(), fa));
    c.passed = all_zero(w.coords());
    if (c.passed) return c;
    std::mt19937_64 rng(splitmix64(seed));
    for (int s = 0; s < samples; ++s) {
      auto x = real_offset(omega.chart().base_point, rng, 0.25);
      try {
        for (const auto& comp : w.coords()) c.max_residual = std::max(c.max_residual, std::abs(comp.evaluate(x)));
        ++c.samples;
      } catch (const PoleError&) {
      }
    }
    return c;
  }
  VValuedForm2 w = exterior_derivative(omega);
  const std::vector<RatFunc> dh = f.h.symbolic ? f.h.form.gradient() : f.h.alpha;
  std::mt19937_64 rng(splitmix64(seed));
  for (int attempt = 0; attempt < 50 * samples && c.samples < samples; ++attempt) {
    auto x = real_offset(omega.chart().base_point, rng, 0.25);
    try {
      const double fx = f.evaluate(x);
      auto g = eval_components(dh, x);
      for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
          for (int j = i + 1; j < n; ++j) {
            // d(f A)^k_ij = f (w^k_ij - dh_i A_kj + dh_j A_ki)
            double r = fx * (w.at(k, i, j).evaluate(x) - g[i] * a(k, j).evaluate(x) + g[j] * a(k, i).evaluate(x));
            c.max_residual = std::max(c.max_residual, std::abs(r));
          }
        }
      }
      ++c.samples;
    } catch (const PoleError&) {
    }
  }
  c.passed = c.samples == samples && c.max_residual < tol;
  return c;
}

std::vector<double> FlatChart::evaluate(std::span<const double> x) const {
  const int n = a.rows();
  if (symbolic) {
    std::vector<double> out;
    for (const auto& c : components) out.push_back(c.evaluate(x));
    return out;
  }
  std::vector<double> base = to_double(factor.h.base);
  auto form = [this, n](std::span<const double> p) {
    const double fx = factor.evaluate(p);
    std::vector<double> out(n * n);
    for (int k = 0; k < n; ++k) {
      for (int j = 0; j < n; ++j) out[k * n + j] = fx * a(k, j).evaluate(p);
    }
    return out;
  };
  return integrate_along_paths(form, n, base, x, tol).value;
}

std::vector<std::vector<double>> FlatChart::jacobian(std::span<const double> x) const {
  const int n = a.rows();
  std::vector<std::vector<double>> j(n, std::vector<double>(n));
  if (symbolic) {
    for (int k = 0; k < n; ++k) j[k] = eval_components(components[k].gradient(), x);
    return j;
  }
  const double fx = factor.evaluate(x);
  for (int k = 0; k < n; ++k) {
    for (int c = 0; c < n; ++c) j[k][c] = fx * a(k, c).evaluate(x);
  }
  return j;
}

FlatChart flat_coordinates(const Coframe& omega, const ConformalFactor& f) {
  const int n = omega.n();
  FlatChart z;
  z.a = omega.matrix();
  z.factor = f;
  z.tol = f.h.tol;
  const auto& base = omega.chart().base_point;
  Eigen::MatrixXd jac(n, n);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) jac(k, j) = z.a(k, j).evaluate(std::span<const Rational>(base)).get_d();
  }
  if (std::abs(jac.determinant()) == 0.0) throw InternalIdentityError("Jacobian of zeta degenerates at the base point");
  if (!f.rational) return z;
  for (int k = 0; k < n; ++k) {
    std::vector<RatFunc> beta;
    for (int j = 0; j < n; ++j) beta.push_back(f.f * z.a(k, j));
    auto form = integrate_closed_rational(beta, base);
    if (!form) {
      z.components.clear();
      return z;
    }
    z.components.push_back(std::move(*form));
  }
  z.symbolic = true;
  return z;
}

ProductDeviation cone_product_deviation(const ConeStructure& cs, const FlatChart& zeta, int samples,
                                        std::uint64_t seed) {
  const int n = cs.n();
  ConeSampling sc;
  sc.count = samples;
  sc.seed = seed;
  sc.field = FieldTag::floating();
  ConeSampleSet set = sample_cone(cs, sc);
  ProductDeviation d;
  for (const auto& pt : set.points) {
    std::vector<double> x;
    for (const auto& c : pt.x_c) x.push_back(c.real());
    auto jac = zeta.jacobian(x);
    std::vector<Complex> w(n, 0.0);
    double norm = 0.0;
    for (int k = 0; k < n; ++k) {
      for (int j = 0; j < n; ++j) w[k] += jac[k][j] * pt.y_c[j];
      norm += std::norm(w[k]);
    }
    norm = std::sqrt(norm);
    if (norm == 0.0) throw InternalIdentityError("d zeta annihilates a cone vector");
    double dev = std::abs(cs.z.f.evaluate(std::span<const Complex>(w))) / std::pow(norm, cs.z.degree);
    d.max_deviation = std::max(d.max_deviation, dev);
    ++d.samples;
  }
  return d;
}

// --------------------------------------------------------------- certify

std::string to_string(CertStatus s) {
  switch (s) {
    case CertStatus::Flat:
      return "flat";
    case CertStatus::ConformallyFlat:
      return "conformally_flat";
    case CertStatus::Rejected:
      return "rejected";
    case CertStatus::Error:
      return "error";
  }
  return "error";
}

FlattenCertificate certify(const ConeStructure& cs, const XiZResult& xi_z, const CertifyConfig& cfg) {
  const int n = cs.n();
  const Coframe& omega = cs.omega;
  FlattenCertificate cert;
  cert.dim_xi_z = xi_z.dim;
  cert.dim_xi_v = n;
  cert.notes.push_back("uniqueness of the conic connection is assumed, not computed");
  try {
    cert.stage = "characteristic_check";
    const bool equal = xi_z.dim == n && xi_z.contains_xi_V;
    if (!xi_z.stable) cert.notes.push_back("Xi_Z dimension was not stable under resampling");
    if (equal) {
      cert.notes.push_back("dim Xi_Z = dim Xi_V: the characteristic check runs exactly against Xi_V");
    } else {
      cert.notes.push_back("dim Xi_Z != dim Xi_V: passing the characteristic check does not imply conformal closedness");
    }
    TensorSubspace sub = equal ? xi_V(n) : xi_z.subspace;
    if (sub.field.kind == FieldKind::Float) sub.field.tol = cfg.membership_tol;
    cert.characteristic = characteristic_check(cs, sub, cfg.characteristic_samples, cfg.seed);
    if (!cert.characteristic->passed) {
      cert.status = CertStatus::Rejected;
      return cert;
    }

    cert.stage = "conformal_closedness";
    cert.verdict = conformal_closedness_test(omega);
    if (cert.verdict->kind == Closedness::NotConformallyClosed) {
      cert.status = CertStatus::Rejected;
      return cert;
    }

    cert.stage = "integrate_h";
    HFunction h = integrate_h(omega, *cert.verdict, cfg.force_quadrature);
    h.tol = cfg.quadrature_tol;
    if (!h.symbolic) {
      cert.notes.push_back("h has no rational-logarithmic antiderivative; using path quadrature");
      std::mt19937_64 rng(splitmix64(cfg.seed ^ 0x11ULL));
      for (int s = 0; s < 5; ++s) {
        auto x = real_offset(omega.chart().base_point, rng, 0.25);
        cert.two_path_discrepancy = std::max(cert.two_path_discrepancy, h.quadrature(x).path_discrepancy);
      }
    }
    cert.h = h;

    cert.stage = "conformal_factor";
    cert.f = conformal_factor(h);

    cert.stage = "closure";
    cert.closure = verify_closure(omega, *cert.f, 20, cfg.seed, cfg.validation_tol);
    if (!cert.closure->passed) throw InternalIdentityError("d(f omega) does not vanish");

    cert.stage = "flat_coordinates";
    cert.zeta = flat_coordinates(omega, *cert.f);

    cert.stage = "validation";
    cert.product = cone_product_deviation(cs, *cert.zeta, cfg.validation_samples, cfg.seed);
    if (cert.product->max_deviation >= cfg.validation_tol) {
      throw InternalIdentityError("zeta does not carry the cone structure onto the product");
    }
    cert.fully_symbolic = cert.h->symbolic && cert.f->rational && cert.zeta->symbolic;
    if (!cert.fully_symbolic) {
      cert.notes.push_back("parts of the certificate are validated on samples only");
    }
    cert.status = cert.verdict->kind == Closedness::Closed ? CertStatus::Flat : CertStatus::ConformallyFlat;
    cert.stage = "done";
  } catch (const InternalIdentityError& e) {
    cert.status = CertStatus::Error;
    cert.internal_error = true;
    cert.error = e.what();
  } catch (const Error& e) {
    cert.status = CertStatus::Error;
    cert.error = e.what();
  }
  return cert;
}

}  // namespace ccc
