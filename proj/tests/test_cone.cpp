#include <random>

#include "ccc/cone.hpp"
#include "ccc/models.hpp"
#include "ccc/parse.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace ccc;

namespace {

constexpr std::uint64_t kP = 2147483647ULL;

Hypersurface fermat() { return Hypersurface(parse_poly("x1^4+x2^4+x3^4", default_names(3))); }

RatFunc on_tangent(const ConeStructure& cs, const std::string& s) {
  return parse_ratfunc(s, cs.induced.chart.total.variables);
}

std::uint64_t pw(std::uint64_t x, unsigned e, std::uint64_t p) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < e; ++i) r = static_cast<std::uint64_t>((static_cast<unsigned __int128>(r) * x) % p);
  return r;
}

std::string fmt(const std::vector<std::uint64_t>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  return s + ")";
}

ConeSampling modp_sampling(int count, std::uint64_t seed = 1) {
  ConeSampling s;
  s.count = count;
  s.seed = seed;
  s.field = FieldTag::modp(kP);
  return s;
}

ConeSampling float_sampling(int count, std::uint64_t seed = 1) {
  ConeSampling s;
  s.count = count;
  s.seed = seed;
  s.field = FieldTag::floating();
  return s;
}

}  // namespace

TEST_CASE("adapted cone equations") {
  ConeStructure flat = adapted_cone(model_flat(3), fermat());
  CHECK(flat.cone_equation == on_tangent(flat, "y1^4+y2^4+y3^4"));
  for (int i = 0; i < 3; ++i) CHECK(flat.cone_equation.diff(i).is_zero());

  ConeStructure resc = adapted_cone(model_rescaled("1/(1-x1)", 3), fermat());
  CHECK(resc.cone_equation == on_tangent(resc, "(y1^4+y2^4+y3^4)/(1-x1)^4"));

  ConeStructure tw = adapted_cone(model_twisted_default(3), fermat());
  CHECK(tw.cone_equation == on_tangent(tw, "y1^4+(y2+x1*y3)^4+y3^4"));

  CHECK_THROWS_AS(adapted_cone(model_flat(4), fermat()), DimensionError);
}

TEST_CASE("prime-field cone samples are exact and reproducible") {
  ConeStructure tw = adapted_cone(model_twisted_default(3), fermat());
  ConeSampleSet s = sample_cone(tw, modp_sampling(25, 3));
  REQUIRE(s.points.size() == 25);
  for (const auto& pt : s.points) {
    // mu = (y1, y2 + x1 y3, y3), then the quartic by repeated multiplication.
    const auto& x = pt.x_mod;
    const auto& y = pt.y_mod;
    std::uint64_t mu2 = (y[1] + static_cast<std::uint64_t>((static_cast<unsigned __int128>(x[0]) * y[2]) % kP)) % kP;
    std::uint64_t value = (pw(y[0], 4, kP) + pw(mu2, 4, kP) + pw(y[2], 4, kP)) % kP;
    CHECK(value == 0);
    CHECK((y[0] | y[1] | y[2]) != 0);
  }
  ConeSampleSet again = sample_cone(tw, modp_sampling(25, 3));
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    CHECK(s.points[i].x_mod == again.points[i].x_mod);
    CHECK(s.points[i].y_mod == again.points[i].y_mod);
  }
  CHECK_THROWS_AS(sample_cone(tw, ConeSampling{5, 1, FieldTag::rational(), 0.25}), ConfigError);
}

TEST_CASE("float cone samples") {
  ConeStructure resc = adapted_cone(model_rescaled("1/(1-x1)", 3), fermat());
  ConeSampleSet s = sample_cone(resc, float_sampling(30, 5));
  REQUIRE(s.points.size() == 30);
  for (const auto& pt : s.points) {
    double s1 = 1.0 / (1.0 - pt.x_c[0].real());
    Complex value = 0.0;
    double norm = 0.0;
    for (const auto& y : pt.y_c) {
      value += std::pow(s1 * y, 4);
      norm += std::norm(s1 * y);
    }
    CHECK(std::abs(value) < 1e-12);
    CHECK(norm > 1e-6);
    CHECK(std::abs(pt.x_c[0].real()) <= 0.25);
  }
}

TEST_CASE("geodesic flow is tangent to the cone") {
  CHECK(geodesic_tangency_check(adapted_cone(model_flat(3), fermat())).passed);
  CHECK(geodesic_tangency_check(adapted_cone(model_rescaled("1/(1-x1)", 3), fermat())).passed);
  CHECK(geodesic_tangency_check(adapted_cone(model_twisted_default(3), fermat())).passed);

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 4; ++trial) {
    Coframe omega = testing::random_coframe(rng, 3, 1, 2);
    MultiPoly f = testing::random_poly(rng, 3, 3, 5);
    // Homogenize: keep only the degree-3 part plus a Fermat cubic.
    MultiPoly cubic = parse_poly("x1^3+x2^3+x3^3", default_names(3));
    for (const auto& [m, c] : f.terms()) {
      if (m.degree() == 3) cubic += MultiPoly::from_terms(3, {{m, c}});
    }
    ConeStructure cs = adapted_cone(omega, Hypersurface(cubic));
    TangencyReport r = geodesic_tangency_check(cs);
    CHECK(r.symbolic);
    CHECK(r.passed);
  }
}

TEST_CASE("double bracket on the flat model") {
  ConeStructure flat = adapted_cone(model_flat(3), fermat());
  BracketReport r = double_bracket_check(flat, sample_cone(flat, modp_sampling(10)));
  CHECK(r.symbolic);
  CHECK(r.passed);
  CHECK(r.entries.size() == 20);
  for (const auto& e : r.entries) {
    CHECK(e.lhs == "(0, 0, 0)");
    CHECK(e.rhs == "(0, 0, 0)");
  }
}

TEST_CASE("double bracket on the rescaled model matches the hand formula") {
  ConeStructure resc = adapted_cone(model_rescaled("1/(1-x1)", 3), fermat());
  ConeSampleSet samples = sample_cone(resc, modp_sampling(50, 2));
  BracketReport r = double_bracket_check(resc, samples);
  CHECK(r.symbolic);
  CHECK(r.passed);
  CHECK(r.max_residual == 0.0);
  REQUIRE(r.entries.size() == 100);
  // sigma = iota(e^1): sigma(u, v) = u_1 v - v_1 u with u = mu = y / (1 - x1)
  // and v running over e_i - (g_i / g_m) e_m, g = grad f(u).
  std::size_t idx = 0;
  int nonzero = 0;
  for (const auto& pt : samples.points) {
    const std::uint64_t s = modp::inv(modp::sub(1, pt.x_mod[0], kP), kP);
    std::vector<std::uint64_t> u(3), g(3);
    for (int i = 0; i < 3; ++i) u[i] = modp::mul(s, pt.y_mod[i], kP);
    for (int i = 0; i < 3; ++i) g[i] = modp::mul(4, pw(u[i], 3, kP), kP);
    int m = 0;
    while (g[m] == 0) ++m;
    for (int i = 0; i < 3; ++i) {
      if (i == m) continue;
      std::vector<std::uint64_t> v(3, 0);
      v[i] = 1;
      v[m] = modp::neg(modp::mul(g[i], modp::inv(g[m], kP), kP), kP);
      std::vector<std::uint64_t> expected(3);
      for (int k = 0; k < 3; ++k) {
        expected[k] = modp::sub(modp::mul(u[0], v[k], kP), modp::mul(v[0], u[k], kP), kP);
      }
      if (expected != std::vector<std::uint64_t>{0, 0, 0}) ++nonzero;
      CHECK(r.entries[idx].rhs == fmt(expected));
      CHECK(r.entries[idx].lhs == fmt(expected));
      ++idx;
    }
  }
  CHECK(nonzero > 50);
}

TEST_CASE("double bracket on random adapted coframes in float mode") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 2; ++trial) {
    Coframe omega = testing::random_coframe(rng, 3, 1, 2);
    ConeStructure cs = adapted_cone(omega, fermat());
    BracketReport r = double_bracket_check(cs, sample_cone(cs, float_sampling(25, trial + 1)), 1e-8);
    CHECK(r.symbolic);
    CHECK(r.passed);
    CHECK(r.max_residual < 1e-8);
  }
}

TEST_CASE("characteristic check") {
  TensorSubspace v3 = xi_V(3);
  CHECK(characteristic_check(adapted_cone(model_flat(3), fermat()), v3, 10, 1).passed);
  CHECK(characteristic_check(adapted_cone(model_rescaled("1/(1-x1)", 3), fermat()), v3, 10, 1).passed);
  CHECK(characteristic_check(adapted_cone(model_rescaled("1+x1*x2-x3^2", 3), fermat()), v3, 10, 1).passed);

  ConeStructure tw = adapted_cone(model_twisted_default(3), fermat());
  CharacteristicReport r = characteristic_check(tw, v3, 10, 1);
  CHECK(!r.passed);
  REQUIRE(r.witness);
  // sigma = dx1 ^ dx3 in the second component: orthogonal to every iota(eta),
  // so the relative residual is exactly 1.
  auto sigma = tw.sigma.evaluate(std::span<const Rational>(r.witness_point));
  for (int k = 0; k < 3; ++k) {
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) CHECK(sigma.at(k, i, j) == Rational((k == 1 && i == 0 && j == 2) ? 1 : 0));
    }
  }
  CHECK(r.witness->residual == doctest::Approx(1.0).epsilon(1e-12));

  XiConfig cfg;
  XiZResult z = xi_Z(fermat(), cfg);
  CHECK(!characteristic_check(tw, z.subspace, 5, 2).passed);
  CHECK(characteristic_check(adapted_cone(model_rescaled("1/(1-x1)", 3), fermat()), z.subspace, 5, 2).passed);
  cfg.backend = EvalMode::Float;
  XiZResult zf = xi_Z(fermat(), cfg);
  CHECK(!characteristic_check(tw, zf.subspace, 5, 2).passed);
  CHECK(characteristic_check(adapted_cone(model_rescaled("1/(1-x1)", 3), fermat()), zf.subspace, 5, 2).passed);
}
