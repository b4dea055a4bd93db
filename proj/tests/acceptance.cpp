// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ccc/cone.hpp"
#include "ccc/flatten.hpp"
#include "ccc/models.hpp"
#include "ccc/parse.hpp"
#include "ccc/xi.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace ccc;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

Hypersurface fermat() { return Hypersurface(parse_poly("x1^4+x2^4+x3^4", default_names(3))); }

RatFunc R(const std::string& s, int n = 3) { return parse_ratfunc(s, default_names(n)); }

const XiZResult& fermat_xi() {
  static const XiZResult r = xi_Z(fermat(), XiConfig{});
  return r;
}

// Exterior derivative of omega by its coordinate formula, k-major over i < j.
std::vector<RatFunc> oracle_d(const Coframe& omega) {
  return testing::d_of_scaled(omega, RatFunc(omega.n(), Rational(1)));
}

// d of a V-valued 2-form given k-major over i < j, components over i < j < l.
std::vector<RatFunc> oracle_dd(const std::vector<RatFunc>& w, int n) {
  auto idx = [n](int i, int j) {
    int pos = 0;
    for (int a = 0; a < i; ++a) pos += n - 1 - a;
    return pos + (j - i - 1);
  };
  const int pairs = n * (n - 1) / 2;
  std::vector<RatFunc> out;
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        for (int l = j + 1; l < n; ++l) {
          const auto& wij = w[k * pairs + idx(i, j)];
          const auto& wil = w[k * pairs + idx(i, l)];
          const auto& wjl = w[k * pairs + idx(j, l)];
          out.push_back(wjl.diff(i) - wil.diff(j) + wij.diff(l));
        }
      }
    }
  }
  return out;
}

std::string fmt_modp(const std::vector<std::uint64_t>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  return s + ")";
}

// ------------------------------------------------------------------ criteria

Outcome c1_xi_v_dimension() {
  Outcome o;
  for (int n = 3; n <= 6; ++n) {
    TensorSubspace s = xi_V(n);
    // iota(e^a) built entrywise, rank by elimination.
    std::vector<std::vector<Rational>> rows;
    for (int a = 0; a < n; ++a) {
      HomTensor<Rational> c(n, Rational(0));
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          if (i == a) c.at(j, i, j) = 1;
          if (j == a) c.at(i, i, j) = -1;
        }
      }
      rows.push_back(c.coords());
    }
    const int oracle = testing::rank_of(rows);
    o.require(s.dim() == n && oracle == n,
              "n=" + std::to_string(n) + ": dim " + std::to_string(s.dim()) + ", oracle " + std::to_string(oracle));
  }
  if (o.passed) o.detail = "dim = n for n = 3..6";
  return o;
}

Outcome c2_iota_identity() {
  Outcome o;
  std::mt19937_64 rng(2024);
  int ok = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + trial % 2;
    Coframe omega = testing::random_coframe(rng, n, 2);
    std::vector<Rational> eta(n);
    for (auto& x : eta) x = testing::small_rational(rng);
    HomTensor<Rational> c = iota(std::span<const Rational>(eta));
    StructureFunction sigma(n, RatFunc(n));
    for (std::size_t i = 0; i < c.coords().size(); ++i) sigma.coords()[i] = RatFunc(n, c.coords()[i]);
    auto lhs = reconstruct_exterior_derivative(sigma, omega).coords();
    auto rhs = testing::eta_wedge_omega(eta, omega);
    bool same = lhs.size() == rhs.size();
    for (std::size_t i = 0; same && i < lhs.size(); ++i) same = lhs[i] == rhs[i];
    if (same) ++ok;
  }
  o.require(ok == 50, std::to_string(ok) + "/50 pairs");
  if (o.passed) o.detail = "50/50 pairs exact";
  return o;
}

Outcome c3_identity_suite() {
  Outcome o;
  int ok = 0;
  for (int c = 0; c < 25; ++c) {
    const std::uint64_t seed = splitmix64(1000 + c);
    Coframe omega = random_polynomial_coframe(3, 2, seed);
    SampleConfig sc;
    sc.seed = seed;
    sc.count = 3;
    std::vector<std::string> bad;
    VValuedForm2 w = exterior_derivative(omega);
    if (w.coords() != oracle_d(omega)) bad.push_back("d omega");
    for (const auto& x : oracle_dd(w.coords(), 3)) {
      if (!x.is_zero()) {
        bad.push_back("dd");
        break;
      }
    }
    for (const auto& x : exterior_derivative(w)) {
      if (!x.is_zero()) {
        bad.push_back("dd (library)");
        break;
      }
    }
    if (reconstruct_exterior_derivative(structure_function(omega), omega).coords() != w.coords()) {
      bad.push_back("reconstruction");
    }
    if (!verify_induced_structure(omega, sc).passed()) bad.push_back("sigma^Omega");
    if (!verify_dual_relations(omega, sc).passed()) bad.push_back("dual relations");
    if (!verify_geodesic_flow(omega, sc).passed()) bad.push_back("gamma identities");
    // d pi(gamma_v) = v on coordinates.
    VectorField g = geodesic_flow(omega);
    for (int i = 0; i < 3; ++i) {
      if (g.comps[i] != RatFunc::variable(6, 3 + i)) bad.push_back("d pi(gamma) = v");
    }
    if (bad.empty()) {
      ++ok;
    } else {
      o.require(false, "case " + std::to_string(c) + ": " + bad.front());
    }
  }
  if (o.passed) o.detail = std::to_string(ok) + "/25 coframes, all identities exact";
  return o;
}

Outcome c4_geodesic_tangency() {
  Outcome o;
  const std::vector<std::pair<std::string, Coframe>> models = {
      {"flat", model_flat(3)}, {"rescaled", model_rescaled("1/(1-x1)", 3)}, {"twisted", model_twisted_default(3)}};
  for (const auto& [name, omega] : models) {
    ConeStructure cs = adapted_cone(omega, fermat());
    o.require(geodesic_tangency_check(cs).passed, name + ": library check");
    // gamma(F) by the chain rule over the tangent chart coordinates.
    VectorField g = geodesic_flow(omega);
    RatFunc gf(2 * 3);
    for (int v = 0; v < 6; ++v) gf += g.comps[v] * cs.cone_equation.diff(v);
    o.require(gf.is_zero(), name + ": gamma(F) != 0");
  }
  if (o.passed) o.detail = "gamma(f o mu) = 0 identically for flat, rescaled, twisted";
  return o;
}

Outcome c5_xi_z_fermat() {
  Outcome o;
  const XiZResult& r = fermat_xi();
  o.require(r.dim == 3 && r.dim_xi_V == 3, "dim " + std::to_string(r.dim));
  o.require(r.primes.size() == 2 && r.primes[0] > (1ULL << 30) && r.primes[1] > (1ULL << 30), "primes");
  for (int d : r.prime_dims) o.require(d == 3, "prime dim " + std::to_string(d));
  o.require(r.stable, "unstable");
  XiConfig fc;
  fc.backend = EvalMode::Float;
  XiZResult f = xi_Z(fermat(), fc);
  o.require(f.float_dim == 3, "float dim " + std::to_string(f.float_dim));
  // Xi_V containment, exact over the prime field.
  const std::uint64_t p = r.subspace.field.prime;
  o.require(r.subspace.field.kind == FieldKind::Prime, "subspace not over a prime field");
  double worst = 0.0;
  for (const auto& b : xi_V(3).rational_basis) {
    HomTensor<std::uint64_t> c(3, 0);
    for (std::size_t i = 0; i < b.size(); ++i) c.coords()[i] = modp::from_rational(b[i], p);
    worst = std::max(worst, membership(c, p, r.subspace).residual);
  }
  o.require(worst == 0.0, "containment residual " + std::to_string(worst));
  const int oracle = testing::oracle_xiZ_dim({1, 1, 1}, 4, 10007);
  o.require(oracle == 3, "brute-force oracle dim " + std::to_string(oracle));
  if (o.passed) {
    o.detail = "dim 3 over primes " + std::to_string(r.primes[0]) + ", " + std::to_string(r.primes[1]) +
               " and float; containment residual 0; oracle mod 10007 = 3";
  }
  return o;
}

Outcome c6_tangent_lines() {
  Outcome o;
  RankResult t = tangent_lines_nondegenerate(fermat(), XiConfig{});
  const int oracle = testing::oracle_tangent_line_rank({1, 1, 1}, 4, 10007);
  o.require(t.ok && t.rank == 3 && t.expected == 3, "rank " + std::to_string(t.rank));
  o.require(oracle == 3, "oracle rank " + std::to_string(oracle));
  if (o.passed) o.detail = "rank 3 = C(3,2); oracle mod 10007 agrees";
  return o;
}

Outcome c7_conformal_flatness() {
  Outcome o;
  Coframe resc = model_rescaled("1/(1-x1)", 3);
  ClosednessVerdict v = conformal_closedness_test(resc);
  o.require(v.kind == Closedness::ConformallyClosed, "verdict " + to_string(v.kind));
  FlattenCertificate c = certify(adapted_cone(resc, fermat()), fermat_xi());
  o.require(c.status == CertStatus::ConformallyFlat, "status " + to_string(c.status));
  o.require(c.f && c.f->rational && c.f->f == R("1-x1"), "f != 1 - x1");
  o.require(c.closure && c.closure->exact && c.closure->passed, "closure not exact");
  for (const auto& x : testing::d_of_scaled(resc, R("1-x1"))) o.require(x.is_zero(), "oracle d(f omega) != 0");

  Coframe heis = model_heisenberg(3);
  ClosednessVerdict h = conformal_closedness_test(heis);
  o.require(h.kind == Closedness::NotConformallyClosed, "Heisenberg verdict " + to_string(h.kind));
  o.require(h.residual > 0.0, "Heisenberg residual 0");
  o.require(testing::min_jet_rank(heis) == 4, "jet oracle admits a factor for Heisenberg");
  if (o.passed) {
    std::ostringstream s;
    s << "rescaled: f = 1 - x1, d(f omega) = 0 exact; Heisenberg: not_conformally_closed, residual " << h.residual;
    o.detail = s.str();
  }
  return o;
}

Outcome c8_double_bracket() {
  Outcome o;
  constexpr std::uint64_t kP = 2147483647ULL;
  ConeStructure resc = adapted_cone(model_rescaled("1/(1-x1)", 3), fermat());
  ConeSampling ms;
  ms.count = 50;
  ms.seed = 5;
  ms.field = FieldTag::modp(kP);
  ConeSampleSet samples = sample_cone(resc, ms);
  BracketReport r = double_bracket_check(resc, samples);
  o.require(r.passed && r.symbolic && r.max_residual == 0.0, "rescaled exact check");
  o.require(r.entries.size() == 100, "entries " + std::to_string(r.entries.size()));
  // sigma = iota(e^1): sigma(u, v) = u_1 v - v_1 u, u = y / (1 - x1).
  std::size_t idx = 0;
  for (const auto& pt : samples.points) {
    const std::uint64_t s = modp::inv(modp::sub(1, pt.x_mod[0], kP), kP);
    std::vector<std::uint64_t> u(3), g(3);
    for (int i = 0; i < 3; ++i) u[i] = modp::mul(s, pt.y_mod[i], kP);
    for (int i = 0; i < 3; ++i) g[i] = modp::mul(4, modp::pow(u[i], 3, kP), kP);
    int m = 0;
    while (g[m] == 0) ++m;
    for (int i = 0; i < 3 && idx < r.entries.size(); ++i) {
      if (i == m) continue;
      std::vector<std::uint64_t> v(3, 0);
      v[i] = 1;
      v[m] = modp::neg(modp::mul(g[i], modp::inv(g[m], kP), kP), kP);
      std::vector<std::uint64_t> expected(3);
      for (int k = 0; k < 3; ++k) expected[k] = modp::sub(modp::mul(u[0], v[k], kP), modp::mul(v[0], u[k], kP), kP);
      o.require(r.entries[idx].lhs == fmt_modp(expected), "sample " + std::to_string(idx) + " lhs");
      ++idx;
    }
  }
  std::mt19937_64 rng(23);
  Coframe omega = testing::random_coframe(rng, 3, 1, 2);
  ConeStructure cs = adapted_cone(omega, fermat());
  ConeSampling fs;
  fs.count = 25;
  fs.seed = 3;
  fs.field = FieldTag::floating();
  BracketReport fr = double_bracket_check(cs, sample_cone(cs, fs), 1e-8);
  o.require(fr.passed && fr.max_residual < 1e-8, "float residual " + std::to_string(fr.max_residual));
  if (o.passed) {
    std::ostringstream s;
    s << "rescaled: 50 samples exact, matching u1 v - v1 u; random coframe float residual " << fr.max_residual;
    o.detail = s.str();
  }
  return o;
}

Outcome c9_pipeline() {
  Outcome o;
  CertifyConfig cfg;
  FlattenCertificate flat = certify(adapted_cone(model_flat(3), fermat()), fermat_xi(), cfg);
  o.require(flat.status == CertStatus::Flat, "flat status " + to_string(flat.status));
  if (flat.zeta) {
    o.require(flat.zeta->symbolic, "flat zeta not symbolic");
    for (int k = 0; k < 3 && flat.zeta->symbolic; ++k) {
      o.require(flat.zeta->components[k].logs.empty() && flat.zeta->components[k].rational == RatFunc::variable(3, k),
                "flat zeta not the translation");
    }
  }

  const Coframe resc_omega = model_rescaled("1/(1-x1)", 3);
  FlattenCertificate resc = certify(adapted_cone(resc_omega, fermat()), fermat_xi(), cfg);
  o.require(resc.status == CertStatus::ConformallyFlat, "rescaled status " + to_string(resc.status));
  o.require(resc.product && resc.product->samples == 100 && resc.product->max_deviation < 1e-9,
            "rescaled cone-product deviation");
  // Oracle: f A = I, so d zeta is the identity and zeta maps cones to cones.
  if (resc.zeta && resc.zeta->symbolic) {
    for (int k = 0; k < 3; ++k) {
      auto grad = resc.zeta->components[k].gradient();
      for (int j = 0; j < 3; ++j) {
        o.require(grad[j] == R("1-x1") * resc_omega.matrix()(k, j), "d zeta != f A");
      }
    }
  }

  FlattenCertificate tw = certify(adapted_cone(model_twisted_default(3), fermat()), fermat_xi(), cfg);
  o.require(tw.status == CertStatus::Rejected && tw.stage == "characteristic_check",
            "twisted " + to_string(tw.status) + " at " + tw.stage);
  double witness = 0.0;
  if (tw.characteristic && tw.characteristic->witness) witness = tw.characteristic->witness->residual;
  // sigma has the single entry c^2_13, orthogonal to Xi_V: relative residual 1.
  o.require(witness > 10 * cfg.membership_tol && std::abs(witness - 1.0) < 1e-12,
            "twisted witness residual " + std::to_string(witness));
  if (o.passed) {
    std::ostringstream s;
    s << "flat: zeta = x; rescaled: deviation " << resc.product->max_deviation
      << " over 100 samples; twisted: rejected, witness residual " << witness;
    o.detail = s.str();
  }
  return o;
}

Outcome c10_round_trip() {
  Outcome o;
  std::mt19937_64 rng(97);
  int ok = 0;
  for (int trial = 0; trial < 10; ++trial) {
    MultiPoly p = testing::random_poly(rng, 3, 2, 3);
    p -= MultiPoly(3, p.constant_term());
    MultiPoly q = testing::random_poly(rng, 3, 1, 2);
    q -= MultiPoly(3, q.constant_term());
    RatFunc f = RatFunc::quotient(MultiPoly(3, Rational(1)) + p, MultiPoly(3, Rational(1)) + q);
    // zeta = L x + b with L invertible.
    std::vector<std::vector<Rational>> l;
    do {
      l.assign(3, std::vector<Rational>(3));
      for (int k = 0; k < 3; ++k) {
        for (int j = 0; j < 3; ++j) l[k][j] = (k == j ? Rational(2) : Rational(0)) + testing::small_rational(rng, 3);
      }
    } while (testing::rank_of(l) < 3);
    RatMatrix a(3, 3, RatFunc(3));
    for (int k = 0; k < 3; ++k) {
      for (int j = 0; j < 3; ++j) a(k, j) = RatFunc(3, l[k][j]) / f;
    }
    Coframe omega(Chart::standard(3), a);
    FlattenCertificate c = certify(adapted_cone(omega, fermat()), fermat_xi());
    bool good = c.status == CertStatus::ConformallyFlat && c.f && c.f->rational;
    if (good) {
      // Recovered factor over the true one must be a constant.
      RatFunc ratio = c.f->f / f;
      for (int v = 0; v < 3; ++v) good = good && ratio.diff(v).is_zero();
    }
    if (good) {
      ++ok;
    } else {
      o.require(false, "trial " + std::to_string(trial) + " f = " + f.to_string(default_names(3)));
    }
  }
  if (o.passed) o.detail = "10/10 factors recovered exactly up to a constant";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_seconds;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "Xi_V dimension", 1, c1_xi_v_dimension},
      {2, "iota defining identity", 30, c2_iota_identity},
      {3, "exact identity suite", 300, c3_identity_suite},
      {4, "geodesic tangency", 60, c4_geodesic_tangency},
      {5, "Xi_Z of the Fermat quartic", 60, c5_xi_z_fermat},
      {6, "tangent-line span", 30, c6_tangent_lines},
      {7, "conformal flatness both directions", 60, c7_conformal_flatness},
      {8, "double-bracket identity", 120, c8_double_bracket},
      {9, "end-to-end pipeline", 300, c9_pipeline},
      {10, "round-trip recovery", 120, c10_round_trip},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.passed = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.limit_seconds;
    const bool pass = o.passed && in_time;
    if (!pass) ++failures;
    std::printf("%s  %2d  %-36s  %7.2fs (limit %gs)  %s%s\n", pass ? "PASS" : "FAIL", c.id, c.name, secs,
                c.limit_seconds, o.detail.c_str(), in_time ? "" : " [over time limit]");
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
