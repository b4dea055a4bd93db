#include "ccc/coframe.hpp"

#include <functional>
#include <set>

namespace ccc {

// ------------------------------------------------------------------ Chart

Chart::Chart(std::vector<std::string> vars, std::vector<Rational> base, std::string note)
    : n(static_cast<int>(vars.size())), variables(std::move(vars)), base_point(std::move(base)),
      domain_note(std::move(note)) {
  if (n < 3) throw DimensionError("charts need dimension n >= 3, got " + std::to_string(n));
  if (n > kMaxVars) throw DimensionError("chart dimension exceeds " + std::to_string(kMaxVars));
  if (static_cast<int>(base_point.size()) != n) {
    throw DimensionError("base point has " + std::to_string(base_point.size()) + " coordinates, chart has " +
                         std::to_string(n));
  }
  std::set<std::string> seen(variables.begin(), variables.end());
  if (static_cast<int>(seen.size()) != n) throw ConfigError("chart variable names must be distinct");
}

Chart Chart::standard(int n) { return Chart(default_names(n), std::vector<Rational>(n, Rational(0))); }

// ----------------------------------------------------------- VectorField

RatFunc VectorField::apply(const RatFunc& f) const {
  RatFunc out(f.nvars());
  for (int i = 0; i < nvars(); ++i) {
    if (comps[i].is_zero()) continue;
    RatFunc df = f.diff(i);
    if (!df.is_zero()) out += comps[i] * df;
  }
  return out;
}

VectorField VectorField::operator+(const VectorField& other) const {
  VectorField out = *this;
  for (int i = 0; i < nvars(); ++i) out.comps[i] += other.comps[i];
  return out;
}

VectorField VectorField::operator-(const VectorField& other) const {
  VectorField out = *this;
  for (int i = 0; i < nvars(); ++i) out.comps[i] -= other.comps[i];
  return out;
}

VectorField VectorField::scaled(const RatFunc& f) const {
  VectorField out = *this;
  for (auto& c : out.comps) {
    if (!c.is_zero()) c *= f;
  }
  return out;
}

VectorField VectorField::zero(int nvars) { return VectorField{std::vector<RatFunc>(nvars, RatFunc(nvars))}; }

VectorField bracket(const VectorField& x, const VectorField& y) {
  if (x.nvars() != y.nvars()) throw DimensionError("bracket of vector fields on different charts");
  VectorField out = VectorField::zero(x.nvars());
  for (int i = 0; i < x.nvars(); ++i) out.comps[i] = x.apply(y.comps[i]) - y.apply(x.comps[i]);
  return out;
}

// --------------------------------------------------------------- Coframe

Coframe::Coframe(Chart chart, RatMatrix a) : chart_(std::move(chart)), a_(std::move(a)) {
  const int n = chart_.n;
  if (a_.rows() != n || a_.cols() != n) throw DimensionError("coframe matrix must be n x n");
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      if (a_(r, c).nvars() != n) throw DimensionError("coframe entry lives in the wrong number of variables");
    }
  }
  det_ = determinant(a_);
  if (det_.is_zero()) throw SingularError("coframe determinant vanishes identically");
  Rational at_base;
  try {
    at_base = det_.evaluate(std::span<const Rational>(chart_.base_point));
  } catch (const PoleError&) {
    throw SingularError("coframe has a pole at the base point");
  }
  if (sgn(at_base) == 0) throw SingularError("coframe is degenerate at the base point");
}

VectorField FrameField::vector(int a) const {
  VectorField v;
  for (int j = 0; j < b.rows(); ++j) v.comps.push_back(b(j, a));
  return v;
}

FrameField dual_frame(const Coframe& omega) { return FrameField{inverse(omega.matrix())}; }

VValuedForm2 exterior_derivative(const Coframe& omega) {
  const int n = omega.n();
  const RatMatrix& a = omega.matrix();
  VValuedForm2 w(n, RatFunc(n));
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) w.at(k, i, j) = a(k, j).diff(i) - a(k, i).diff(j);
    }
  }
  return w;
}

std::vector<RatFunc> exterior_derivative(const VValuedForm2& w) {
  const int n = w.n();
  const int nv = w.coords().empty() ? n : w.coords()[0].nvars();
  std::vector<RatFunc> out;
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        for (int l = j + 1; l < n; ++l) {
          // d(w dx_j^dx_l) etc: cyclic sum over the three index pairs.
          RatFunc v(nv);
          v += w.at(k, j, l).diff(i);
          v -= w.at(k, i, l).diff(j);
          v += w.at(k, i, j).diff(l);
          out.push_back(std::move(v));
        }
      }
    }
  }
  return out;
}

StructureFunction structure_function(const Coframe& omega) { return structure_function(omega, dual_frame(omega)); }

StructureFunction structure_function(const Coframe& omega, const FrameField& frame) {
  const int n = omega.n();
  const RatMatrix& b = frame.b;
  VValuedForm2 w = exterior_derivative(omega);
  const int pairs = AntisymTensor<RatFunc>::pair_count(n);
  // minors[(i<j)][(a<b)] = B_ia B_jb - B_ja B_ib, shared by every k.
  std::vector<std::vector<RatFunc>> minors(pairs);
  auto minor = [&](int i, int j, int pa, int a, int bb) -> const RatFunc& {
    auto& row = minors[AntisymTensor<RatFunc>::pair_index(n, i, j)];
    if (row.empty()) row.resize(pairs);
    RatFunc& m = row[pa];
    if (m.nvars() == 0) {
      m = RatFunc(n);
      if (!b(i, a).is_zero() && !b(j, bb).is_zero()) m += b(i, a) * b(j, bb);
      if (!b(j, a).is_zero() && !b(i, bb).is_zero()) m -= b(j, a) * b(i, bb);
    }
    return m;
  };
  StructureFunction c(n, RatFunc(n));
  for (int k = 0; k < n; ++k) {
    for (int a = 0; a < n; ++a) {
      for (int bb = a + 1; bb < n; ++bb) {
        int pa = AntisymTensor<RatFunc>::pair_index(n, a, bb);
        RatFunc acc(n);
        for (int i = 0; i < n; ++i) {
          for (int j = i + 1; j < n; ++j) {
            const RatFunc& wk = w.at(k, i, j);
            if (wk.is_zero()) continue;
            const RatFunc& m = minor(i, j, pa, a, bb);
            if (!m.is_zero()) acc += wk * m;
          }
        }
        c.at(k, a, bb) = std::move(acc);
      }
    }
  }
  return c;
}

AntisymTensor<Rational> StructureFunction::evaluate(std::span<const Rational> point) const {
  AntisymTensor<Rational> out(n(), Rational(0));
  for (std::size_t i = 0; i < coords().size(); ++i) out.coords()[i] = coords()[i].evaluate(point);
  return out;
}

AntisymTensor<Complex> StructureFunction::evaluate(std::span<const Complex> point) const {
  AntisymTensor<Complex> out(n(), Complex(0));
  for (std::size_t i = 0; i < coords().size(); ++i) out.coords()[i] = coords()[i].evaluate(point);
  return out;
}

VValuedForm2 reconstruct_exterior_derivative(const StructureFunction& sigma, const Coframe& omega) {
  const int n = omega.n();
  const RatMatrix& a = omega.matrix();
  VValuedForm2 w(n, RatFunc(n));
  // omega^a ^ omega^b has dx_i ^ dx_j coefficient A_ai A_bj - A_aj A_bi.
  for (int k = 0; k < n; ++k) {
    for (int ia = 0; ia < n; ++ia) {
      for (int ib = ia + 1; ib < n; ++ib) {
        const RatFunc& c = sigma.at(k, ia, ib);
        if (c.is_zero()) continue;
        for (int i = 0; i < n; ++i) {
          for (int j = i + 1; j < n; ++j) {
            RatFunc m = a(ia, i) * a(ib, j) - a(ia, j) * a(ib, i);
            if (!m.is_zero()) w.at(k, i, j) += c * m;
          }
        }
      }
    }
  }
  return w;
}

namespace {

std::vector<RatFunc> flatten_fields(const std::vector<VectorField>& fields) {
  std::vector<RatFunc> out;
  for (const auto& f : fields) out.insert(out.end(), f.comps.begin(), f.comps.end());
  return out;
}

// Lie brackets [F_a, G_b] for the listed pairs versus sum_k coeff(a, b, k) H_k.
CheckResult bracket_identity(std::string name, const FrameField& f, const FrameField& g, const FrameField& h,
                             bool same, const std::function<RatFunc(int, int, int)>& coeff,
                             const SampleConfig& cfg) {
  std::vector<VectorField> lhs, rhs;
  const int nv = f.b.rows();
  for (int a = 0; a < f.count(); ++a) {
    for (int b = same ? a + 1 : 0; b < g.count(); ++b) {
      lhs.push_back(bracket(f.vector(a), g.vector(b)));
      VectorField sum = VectorField::zero(nv);
      for (int k = 0; k < h.count(); ++k) {
        RatFunc c = coeff(a, b, k);
        if (!c.is_zero()) sum = sum + h.vector(k).scaled(c);
      }
      rhs.push_back(std::move(sum));
    }
  }
  auto l = flatten_fields(lhs);
  auto r = flatten_fields(rhs);
  return check_identity(std::move(name), l, r, cfg);
}

Report make_report(std::string title, const SampleConfig& cfg) {
  Report r;
  r.title = std::move(title);
  r.seed = cfg.seed;
  r.mode = to_string(cfg.mode);
  return r;
}

}  // namespace

Report frame_bracket_check(const Coframe& omega, const SampleConfig& cfg) {
  Report report = make_report("frame brackets", cfg);
  FrameField frame = dual_frame(omega);
  StructureFunction c = structure_function(omega, frame);
  report.add(bracket_identity(
      "[D_a, D_b] = sum_k delta^k_ab D_k", frame, frame, frame, true,
      [&](int a, int b, int k) { return -c.at(k, a, b); }, cfg));
  return report;
}

CheckResult check_differential_identity(const Coframe& omega, const RatFunc& f, const SampleConfig& cfg) {
  const int n = omega.n();
  FrameField frame = dual_frame(omega);
  std::vector<RatFunc> df, rhs;
  std::vector<RatFunc> dw(n);
  for (int a = 0; a < n; ++a) dw[a] = frame.vector(a).apply(f);
  for (int j = 0; j < n; ++j) {
    df.push_back(f.diff(j));
    RatFunc s(n);
    for (int a = 0; a < n; ++a) {
      if (!dw[a].is_zero() && !omega.matrix()(a, j).is_zero()) s += dw[a] * omega.matrix()(a, j);
    }
    rhs.push_back(std::move(s));
  }
  return check_identity("df = (D f) # omega", df, rhs, cfg);
}

// ---------------------------------------------------------- tangent bundle

TangentChart tangent_chart(const Chart& base) {
  const int n = base.n;
  std::set<std::string> used(base.variables.begin(), base.variables.end());
  std::vector<std::string> names = base.variables;
  for (int i = 0; i < n; ++i) {
    std::string y = "y" + std::to_string(i + 1);
    if (used.count(y)) y = "d" + base.variables[i];
    while (used.count(y)) y = "_" + y;
    used.insert(y);
    names.push_back(y);
  }
  std::vector<Rational> point = base.base_point;
  for (int i = 0; i < n; ++i) point.push_back(Rational(i == 0 ? 1 : 0));
  return TangentChart{base, Chart(std::move(names), std::move(point), base.domain_note)};
}

RatFunc pullback(const RatFunc& f, const TangentChart& chart) { return f.embed(2 * chart.n(), 0); }

InducedCoframe induced_coframe(const Coframe& omega) {
  const int n = omega.n();
  const int nn = 2 * n;
  InducedCoframe out;
  out.chart = tangent_chart(omega.chart());
  const RatMatrix& a = omega.matrix();
  RatMatrix lifted(n, n, RatFunc(nn));
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) lifted(k, j) = pullback(a(k, j), out.chart);
  }
  out.theta = RatMatrix(n, nn, RatFunc(nn));
  out.lambda = RatMatrix(n, nn, RatFunc(nn));
  for (int k = 0; k < n; ++k) {
    RatFunc mu(nn);
    for (int j = 0; j < n; ++j) {
      out.theta(k, j) = lifted(k, j);
      if (!lifted(k, j).is_zero()) mu += lifted(k, j) * RatFunc::variable(nn, out.chart.y(j));
    }
    for (int v = 0; v < nn; ++v) out.lambda(k, v) = mu.diff(v);
    out.mu.push_back(std::move(mu));
  }
  return out;
}

Coframe InducedCoframe::as_coframe() const {
  const int n = chart.n();
  RatMatrix m(2 * n, 2 * n, RatFunc(2 * n));
  for (int k = 0; k < n; ++k) {
    for (int v = 0; v < 2 * n; ++v) {
      m(k, v) = theta(k, v);
      m(n + k, v) = lambda(k, v);
    }
  }
  return Coframe(chart.total, std::move(m));
}

TangentFrames tangent_dual_frame(const InducedCoframe& big_omega) {
  const int n = big_omega.chart.n();
  RatMatrix m(2 * n, 2 * n, RatFunc(2 * n));
  for (int k = 0; k < n; ++k) {
    for (int v = 0; v < 2 * n; ++v) {
      m(k, v) = big_omega.theta(k, v);
      m(n + k, v) = big_omega.lambda(k, v);
    }
  }
  RatMatrix inv = inverse(m);
  TangentFrames out{FrameField{RatMatrix(2 * n, n, RatFunc(2 * n))}, FrameField{RatMatrix(2 * n, n, RatFunc(2 * n))}};
  for (int r = 0; r < 2 * n; ++r) {
    for (int a = 0; a < n; ++a) {
      out.d_theta.b(r, a) = inv(r, a);
      out.d_lambda.b(r, a) = inv(r, n + a);
    }
  }
  return out;
}

VectorField geodesic_flow(const InducedCoframe& big_omega, const TangentFrames& frames) {
  const int n = big_omega.chart.n();
  VectorField gamma = VectorField::zero(2 * n);
  for (int a = 0; a < n; ++a) gamma = gamma + frames.d_theta.vector(a).scaled(big_omega.mu[a]);
  return gamma;
}

VectorField geodesic_flow(const Coframe& omega) {
  InducedCoframe big = induced_coframe(omega);
  return geodesic_flow(big, tangent_dual_frame(big));
}

Report verify_dual_relations(const Coframe& omega, const SampleConfig& cfg) {
  Report report = make_report("tangent dual frame", cfg);
  const int n = omega.n();
  const int nn = 2 * n;
  InducedCoframe big = induced_coframe(omega);
  TangentFrames fr = tangent_dual_frame(big);

  // Pairings (frame vector a, form row k) collected as n x n matrices.
  auto pairing = [&](const FrameField& f, const RatMatrix& forms) {
    std::vector<RatFunc> out;
    for (int k = 0; k < n; ++k) {
      for (int a = 0; a < n; ++a) {
        RatFunc s(nn);
        for (int v = 0; v < nn; ++v) {
          if (!forms(k, v).is_zero() && !f.b(v, a).is_zero()) s += forms(k, v) * f.b(v, a);
        }
        out.push_back(std::move(s));
      }
    }
    return out;
  };
  auto derivative = [&](const FrameField& f) {
    std::vector<RatFunc> out;
    for (int k = 0; k < n; ++k) {
      for (int a = 0; a < n; ++a) out.push_back(f.vector(a).apply(big.mu[k]));
    }
    return out;
  };
  std::vector<RatFunc> id, zero;
  for (int k = 0; k < n; ++k) {
    for (int a = 0; a < n; ++a) {
      id.emplace_back(nn, Rational(k == a ? 1 : 0));
      zero.emplace_back(nn);
    }
  }
  report.add(check_identity("D_theta | theta = Id", pairing(fr.d_theta, big.theta), id, cfg));
  report.add(check_identity("D_lambda | lambda = Id", pairing(fr.d_lambda, big.lambda), id, cfg));
  report.add(check_identity("D_lambda mu = Id", derivative(fr.d_lambda), id, cfg));
  report.add(check_identity("D_theta mu = 0", derivative(fr.d_theta), zero, cfg));
  report.add(check_identity("D_theta | lambda = 0", pairing(fr.d_theta, big.lambda), zero, cfg));
  report.add(check_identity("D_lambda | theta = 0", pairing(fr.d_lambda, big.theta), zero, cfg));

  // d pi(D_theta) = pi^* D_omega: x-components of D_theta are the lifted dual frame.
  FrameField base = dual_frame(omega);
  std::vector<RatFunc> proj, lifted;
  for (int a = 0; a < n; ++a) {
    for (int j = 0; j < n; ++j) {
      proj.push_back(fr.d_theta.b(j, a));
      lifted.push_back(pullback(base.b(j, a), big.chart));
    }
  }
  report.add(check_identity("d pi(D_theta) = D_omega", proj, lifted, cfg));

  StructureFunction c = structure_function(omega, base);
  auto zero_coeff = [&](int, int, int) { return RatFunc(nn); };
  report.add(bracket_identity("[D_theta, D_lambda] = 0", fr.d_theta, fr.d_lambda, fr.d_theta, false, zero_coeff, cfg));
  report.add(bracket_identity("[D_lambda, D_lambda] = 0", fr.d_lambda, fr.d_lambda, fr.d_lambda, true, zero_coeff, cfg));
  report.add(bracket_identity(
      "[D_theta, D_theta] = (pi^* delta) # D_theta", fr.d_theta, fr.d_theta, fr.d_theta, true,
      [&](int a, int b, int k) { return -pullback(c.at(k, a, b), big.chart); }, cfg));
  return report;
}

Report verify_geodesic_flow(const Coframe& omega, const SampleConfig& cfg) {
  Report report = make_report("geodesic flow", cfg);
  const int n = omega.n();
  InducedCoframe big = induced_coframe(omega);
  TangentFrames fr = tangent_dual_frame(big);
  VectorField gamma = geodesic_flow(big, fr);
  std::vector<VectorField> lhs, rhs;
  for (int a = 0; a < n; ++a) {
    lhs.push_back(bracket(fr.d_lambda.vector(a), gamma));
    rhs.push_back(fr.d_theta.vector(a));
  }
  report.add(check_identity("[D_lambda, gamma] = D_theta", flatten_fields(lhs), flatten_fields(rhs), cfg));
  std::vector<RatFunc> proj, y;
  for (int j = 0; j < n; ++j) {
    proj.push_back(gamma.comps[j]);
    y.push_back(RatFunc::variable(2 * n, big.chart.y(j)));
  }
  report.add(check_identity("d pi(gamma_v) = v", proj, y, cfg));
  return report;
}

Report verify_induced_structure(const Coframe& omega, const SampleConfig& cfg) {
  Report report = make_report("induced structure function", cfg);
  const int n = omega.n();
  InducedCoframe big = induced_coframe(omega);
  Coframe big_frame = big.as_coframe();
  StructureFunction sigma_big = structure_function(big_frame);
  StructureFunction sigma = structure_function(omega);
  std::vector<RatFunc> lhs, rhs;
  for (int k = 0; k < 2 * n; ++k) {
    for (int a = 0; a < 2 * n; ++a) {
      for (int b = a + 1; b < 2 * n; ++b) {
        lhs.push_back(sigma_big.at(k, a, b));
        if (k < n && b < n) {
          rhs.push_back(pullback(sigma.at(k, a, b), big.chart));
        } else {
          rhs.emplace_back(2 * n);
        }
      }
    }
  }
  report.add(check_identity("sigma^Omega = pi^* sigma^omega", lhs, rhs, cfg));
  return report;
}

}  // namespace ccc
