#include <random>

#include "ccc/coframe.hpp"
#include "ccc/parse.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace ccc;

namespace {

const std::vector<std::string> kX3 = {"x1", "x2", "x3"};

Coframe make(const std::vector<std::vector<std::string>>& rows) {
  const int n = static_cast<int>(rows.size());
  auto names = default_names(n);
  RatMatrix a(n, n, RatFunc(n));
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) a(r, c) = parse_ratfunc(rows[r][c], names);
  }
  return Coframe(Chart::standard(n), std::move(a));
}

Coframe heisenberg() { return make({{"1", "0", "0"}, {"0", "1", "0"}, {"0", "x1", "1"}}); }
Coframe rescaled() {
  return make({{"1/(1-x1)", "0", "0"}, {"0", "1/(1-x1)", "0"}, {"0", "0", "1/(1-x1)"}});
}
Coframe flat() { return make({{"1", "0", "0"}, {"0", "1", "0"}, {"0", "0", "1"}}); }

RatFunc R(const std::string& s, int nvars = 3) { return parse_ratfunc(s, default_names(nvars)); }

// Exact solve of the 2n x 2n (or n x n) system M x = rhs over Q by elimination.
std::vector<Rational> solve(std::vector<std::vector<Rational>> m, std::vector<Rational> rhs) {
  const int n = static_cast<int>(m.size());
  for (int c = 0; c < n; ++c) {
    int p = c;
    while (sgn(m[p][c]) == 0) ++p;
    std::swap(m[p], m[c]);
    std::swap(rhs[p], rhs[c]);
    for (int r = 0; r < n; ++r) {
      if (r == c || sgn(m[r][c]) == 0) continue;
      Rational f = m[r][c] / m[c][c];
      for (int k = 0; k < n; ++k) m[r][k] -= f * m[c][k];
      rhs[r] -= f * rhs[c];
    }
  }
  for (int r = 0; r < n; ++r) rhs[r] /= m[r][r];
  return rhs;
}

SampleConfig exact(int count = 5) {
  SampleConfig cfg;
  cfg.count = count;
  return cfg;
}

}  // namespace

TEST_CASE("charts require n >= 3") {
  CHECK_THROWS_AS(Chart::standard(2), DimensionError);
  CHECK(Chart::standard(4).variables[3] == "x4");
}

TEST_CASE("coframe validation") {
  CHECK_THROWS_AS(make({{"1", "0", "0"}, {"0", "1", "0"}, {"1", "0", "0"}}), SingularError);
  CHECK_THROWS_AS(make({{"x1", "0", "0"}, {"0", "1", "0"}, {"0", "0", "1"}}), SingularError);
  CHECK_THROWS_AS(make({{"1/x1", "0", "0"}, {"0", "1", "0"}, {"0", "0", "1"}}), SingularError);
}

TEST_CASE("dual frame examples") {
  CHECK(dual_frame(flat()).b == identity_matrix(3, 3));
  FrameField h = dual_frame(heisenberg());
  CHECK(h.b(2, 1) == R("-x1"));
  CHECK(h.b * heisenberg().matrix() == identity_matrix(3, 3));
  CHECK(heisenberg().matrix() * h.b == identity_matrix(3, 3));
  FrameField r = dual_frame(rescaled());
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) CHECK(r.b(i, j) == (i == j ? R("1-x1") : R("0")));
  }
}

TEST_CASE("exterior derivative examples") {
  VValuedForm2 zero = exterior_derivative(flat());
  for (const auto& w : zero.coords()) CHECK(w.is_zero());
  VValuedForm2 h = exterior_derivative(heisenberg());
  for (int k = 0; k < 3; ++k) {
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) CHECK(h.at(k, i, j) == (k == 2 && i == 0 && j == 1 ? R("1") : R("0")));
    }
  }
  CHECK(h.value(2, 1, 0) == R("-1"));
  VValuedForm2 r = exterior_derivative(rescaled());
  for (int k = 0; k < 3; ++k) {
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) {
        RatFunc expected = (i == 0 && j == k) ? R("1/(1-x1)^2") : R("0");
        CHECK(r.at(k, i, j) == expected);
      }
    }
  }
}

TEST_CASE("structure function examples") {
  StructureFunction zero = structure_function(flat());
  for (const auto& c : zero.coords()) CHECK(c.is_zero());
  StructureFunction h = structure_function(heisenberg());
  for (int k = 0; k < 3; ++k) {
    for (int a = 0; a < 3; ++a) {
      for (int b = a + 1; b < 3; ++b) CHECK(h.at(k, a, b) == (k == 2 && a == 0 && b == 1 ? R("1") : R("0")));
    }
  }
  StructureFunction r = structure_function(rescaled());
  for (int k = 0; k < 3; ++k) {
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        RatFunc expected = R("0");
        if (k != 0 && a == 0 && b == k) expected = R("1");
        if (k != 0 && b == 0 && a == k) expected = R("-1");
        CHECK(r.value(k, a, b) == expected);
      }
    }
  }
}

TEST_CASE("structure function matches the defining expansion pointwise") {
  // Oracle: at a rational point, solve dω^k = Σ_{a<b} c^k_ab ω^a∧ω^b for c
  // as a linear system in the dx_i∧dx_j basis.
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 3 + trial % 2;
    Coframe omega = testing::random_coframe(rng, n, 2);
    StructureFunction c = structure_function(omega);
    VValuedForm2 w = exterior_derivative(omega);
    auto point = sample_rational_point(n, 5, trial, 0);
    const int pairs = n * (n - 1) / 2;
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
    for (int r = 0; r < n; ++r) {
      for (int s = 0; s < n; ++s) a[r][s] = omega.matrix()(r, s).evaluate(point);
    }
    std::vector<std::vector<Rational>> m(pairs, std::vector<Rational>(pairs));
    for (int ia = 0; ia < n; ++ia) {
      for (int ib = ia + 1; ib < n; ++ib) {
        for (int i = 0; i < n; ++i) {
          for (int j = i + 1; j < n; ++j) {
            m[AntisymTensor<int>::pair_index(n, i, j)][AntisymTensor<int>::pair_index(n, ia, ib)] =
                a[ia][i] * a[ib][j] - a[ia][j] * a[ib][i];
          }
        }
      }
    }
    for (int k = 0; k < n; ++k) {
      std::vector<Rational> rhs(pairs);
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) rhs[AntisymTensor<int>::pair_index(n, i, j)] = w.at(k, i, j).evaluate(point);
      }
      auto expected = solve(m, rhs);
      for (int ia = 0; ia < n; ++ia) {
        for (int ib = ia + 1; ib < n; ++ib) {
          CHECK(c.at(k, ia, ib).evaluate(point) == expected[AntisymTensor<int>::pair_index(n, ia, ib)]);
        }
      }
    }
  }
}

TEST_CASE("reconstruction and d o d = 0 on random coframes") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    Coframe omega = testing::random_coframe(rng, 3, 2);
    VValuedForm2 w = exterior_derivative(omega);
    CHECK(reconstruct_exterior_derivative(structure_function(omega), omega) == w);
    for (const auto& v : exterior_derivative(w)) CHECK(v.is_zero());
  }
}

TEST_CASE("frame brackets") {
  CHECK(frame_bracket_check(flat(), exact()).passed());
  CHECK(frame_bracket_check(heisenberg(), exact()).passed());
  // Hand bracket: D_1 = d1, D_2 = d2 - x1 d3, [D_1, D_2] = -d3 = -D_3.
  FrameField h = dual_frame(heisenberg());
  VectorField br = bracket(h.vector(0), h.vector(1));
  CHECK(br.comps[0].is_zero());
  CHECK(br.comps[1].is_zero());
  CHECK(br.comps[2] == R("-1"));
  std::mt19937_64 rng(5);
  Coframe omega = testing::random_coframe(rng, 3, 2);
  SampleConfig cfg = exact(20);
  Report r = frame_bracket_check(omega, cfg);
  CHECK(r.passed());
  CHECK(r.checks[0].max_residual == 0.0);
  cfg.mode = EvalMode::Float;
  CHECK(frame_bracket_check(omega, cfg).passed());
}

TEST_CASE("differential identity df = (D f) # omega") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 3; ++trial) {
    Coframe omega = testing::random_coframe(rng, 3, 2);
    RatFunc f = RatFunc(testing::random_poly(rng, 3, 3)) /
                RatFunc(MultiPoly(3, Rational(2)) + testing::random_poly(rng, 3, 1, 2) * MultiPoly::variable(3, 0));
    CHECK(check_differential_identity(omega, f, exact()).passed);
  }
}

TEST_CASE("GL naturality of the structure function") {
  // x -> Lx: omega' = A(Lx) L has c'(x) = c(Lx).
  std::mt19937_64 rng(21);
  Coframe omega = testing::random_coframe(rng, 3, 2);
  const int l[3][3] = {{1, 2, 0}, {0, 1, -1}, {1, 0, 1}};
  std::vector<RatFunc> lx;
  for (int i = 0; i < 3; ++i) {
    RatFunc s(3);
    for (int j = 0; j < 3; ++j) s += RatFunc::variable(3, j) * Rational(l[i][j]);
    lx.push_back(s);
  }
  auto sub = [&](const RatFunc& f) {
    return compose(f.numerator(), lx) / compose(f.denominator(), lx);
  };
  RatMatrix lmat(3, 3, RatFunc(3));
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) lmat(i, j) = RatFunc(3, Rational(l[i][j]));
  }
  RatMatrix moved(3, 3, RatFunc(3));
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) moved(i, j) = sub(omega.matrix()(i, j));
  }
  Coframe pulled(Chart::standard(3), moved * lmat);
  StructureFunction c = structure_function(omega);
  StructureFunction c2 = structure_function(pulled);
  for (std::size_t i = 0; i < c.coords().size(); ++i) CHECK(c2.coords()[i] == sub(c.coords()[i]));
}

TEST_CASE("induced coframe examples") {
  InducedCoframe f = induced_coframe(flat());
  CHECK(f.chart.total.variables[4] == "y2");
  for (int k = 0; k < 3; ++k) {
    CHECK(f.mu[k] == RatFunc::variable(6, 3 + k));
    for (int v = 0; v < 6; ++v) {
      CHECK(f.theta(k, v) == RatFunc(6, Rational(v == k ? 1 : 0)));
      CHECK(f.lambda(k, v) == RatFunc(6, Rational(v == 3 + k ? 1 : 0)));
    }
  }
  InducedCoframe h = induced_coframe(heisenberg());
  CHECK(h.mu[2] == R("x1*x5+x6", 6));
  CHECK(h.lambda(2, 0) == R("x5", 6));  // y2 is x5 in the default names
  CHECK(h.lambda(2, 4) == R("x1", 6));
  CHECK(h.lambda(2, 5) == R("1", 6));
  CHECK(h.lambda(2, 1).is_zero());
  InducedCoframe r = induced_coframe(rescaled());
  CHECK(r.mu[1] == R("x5/(1-x1)", 6));
  CHECK(r.lambda(1, 4) == R("1/(1-x1)", 6));
  CHECK(r.lambda(1, 0) == R("x5/(1-x1)^2", 6));
}

TEST_CASE("tangent dual frame") {
  TangentFrames f = tangent_dual_frame(induced_coframe(flat()));
  for (int v = 0; v < 6; ++v) {
    for (int a = 0; a < 3; ++a) {
      CHECK(f.d_theta.b(v, a) == RatFunc(6, Rational(v == a ? 1 : 0)));
      CHECK(f.d_lambda.b(v, a) == RatFunc(6, Rational(v == 3 + a ? 1 : 0)));
    }
  }
  TangentFrames r = tangent_dual_frame(induced_coframe(rescaled()));
  CHECK(r.d_lambda.b(3, 0) == R("1-x1", 6));
  CHECK(r.d_lambda.b(0, 0).is_zero());
  // D_theta_1 = (1-x1) d/dx1 + y-correction; the correction is -y (from D_theta mu = 0).
  CHECK(r.d_theta.b(3, 0) == R("-x4", 6));
  CHECK(verify_dual_relations(flat(), exact()).passed());
  CHECK(verify_dual_relations(heisenberg(), exact()).passed());
  CHECK(verify_dual_relations(rescaled(), exact()).passed());
}

TEST_CASE("geodesic flow") {
  VectorField g = geodesic_flow(flat());
  for (int a = 0; a < 3; ++a) {
    CHECK(g.comps[a] == RatFunc::variable(6, 3 + a));
    CHECK(g.comps[3 + a].is_zero());
  }
  VectorField gr = geodesic_flow(rescaled());
  std::vector<Rational> p = {Rational(1, 3), Rational(2), Rational(-1), Rational(1), Rational(0), Rational(0)};
  CHECK(gr.comps[0].evaluate(p) == 1);
  CHECK(gr.comps[1].evaluate(p) == 0);
  CHECK(gr.comps[2].evaluate(p) == 0);
  CHECK(verify_geodesic_flow(heisenberg(), exact()).passed());
  CHECK(verify_geodesic_flow(rescaled(), exact()).passed());
}

TEST_CASE("induced structure function") {
  CHECK(verify_induced_structure(flat(), exact()).passed());
  CHECK(verify_induced_structure(heisenberg(), exact()).passed());
  StructureFunction big = structure_function(induced_coframe(heisenberg()).as_coframe());
  int nonzero = 0;
  for (const auto& c : big.coords()) nonzero += c.is_zero() ? 0 : 1;
  CHECK(nonzero == 1);
  CHECK(big.at(2, 0, 1) == RatFunc(6, Rational(1)));
  CHECK(verify_induced_structure(rescaled(), exact()).passed());
}

TEST_CASE("random coframe identity suite") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 3; ++trial) {
    Coframe omega = testing::random_coframe(rng, 3, 2);
    SampleConfig cfg = exact(3);
    CHECK(verify_induced_structure(omega, cfg).passed());
    CHECK(verify_dual_relations(omega, cfg).passed());
    CHECK(verify_geodesic_flow(omega, cfg).passed());
  }
}
