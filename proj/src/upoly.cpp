#include "ccc/upoly.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>

#include "ccc/errors.hpp"

namespace ccc {

namespace {

void trim(UPolyModP& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

UPolyModP poly_mod(UPolyModP a, const UPolyModP& b, std::uint64_t p) {
  trim(a);
  std::uint64_t inv = modp::inv(b.back(), p);
  while (a.size() >= b.size()) {
    std::uint64_t factor = modp::mul(a.back(), inv, p);
    std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = modp::sub(a[shift + i], modp::mul(factor, b[i], p), p);
    trim(a);
  }
  return a;
}

UPolyModP poly_mulmod(const UPolyModP& a, const UPolyModP& b, const UPolyModP& m, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  UPolyModP prod(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) prod[i + j] = modp::add(prod[i + j], modp::mul(a[i], b[j], p), p);
  }
  return poly_mod(std::move(prod), m, p);
}

UPolyModP poly_powmod(UPolyModP base, std::uint64_t e, const UPolyModP& m, std::uint64_t p) {
  UPolyModP result = {1};
  base = poly_mod(std::move(base), m, p);
  while (e > 0) {
    if (e & 1) result = poly_mulmod(result, base, m, p);
    base = poly_mulmod(base, base, m, p);
    e >>= 1;
  }
  return poly_mod(std::move(result), m, p);
}

UPolyModP make_monic(UPolyModP f, std::uint64_t p) {
  trim(f);
  if (f.empty()) return f;
  std::uint64_t inv = modp::inv(f.back(), p);
  for (auto& c : f) c = modp::mul(c, inv, p);
  return f;
}

UPolyModP poly_gcd(UPolyModP a, UPolyModP b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    UPolyModP r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(std::move(a), p);
}

UPolyModP poly_divide(UPolyModP a, const UPolyModP& b, std::uint64_t p) {
  trim(a);
  std::uint64_t inv = modp::inv(b.back(), p);
  if (a.size() < b.size()) return {};
  UPolyModP q(a.size() - b.size() + 1, 0);
  while (a.size() >= b.size()) {
    std::uint64_t factor = modp::mul(a.back(), inv, p);
    std::size_t shift = a.size() - b.size();
    q[shift] = factor;
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = modp::sub(a[shift + i], modp::mul(factor, b[i], p), p);
    trim(a);
    if (a.size() < b.size()) break;
  }
  return q;
}

// g is monic and a product of distinct linear factors.
void split(const UPolyModP& g, std::uint64_t p, std::mt19937_64& rng, std::vector<std::uint64_t>& out) {
  if (g.size() <= 1) return;
  if (g.size() == 2) {
    out.push_back(modp::neg(g[0], p));
    return;
  }
  std::uniform_int_distribution<std::uint64_t> dist(0, p - 1);
  for (int attempt = 0; attempt < 200; ++attempt) {
    UPolyModP shifted = {dist(rng), 1};
    UPolyModP h = poly_powmod(shifted, (p - 1) / 2, g, p);
    if (h.empty()) h = {0};
    h[0] = modp::sub(h[0], 1, p);
    UPolyModP d = poly_gcd(g, h, p);
    if (d.size() > 1 && d.size() < g.size()) {
      split(d, p, rng, out);
      split(poly_divide(g, d, p), p, rng, out);
      return;
    }
  }
  throw SamplingError("root splitting did not converge");
}

}  // namespace

std::vector<std::uint64_t> roots_mod_p(UPolyModP f, std::uint64_t p, std::mt19937_64& rng) {
  f = make_monic(std::move(f), p);
  std::vector<std::uint64_t> roots;
  if (f.size() <= 1) return roots;
  if (p < 2000) {
    for (std::uint64_t x = 0; x < p; ++x) {
      std::uint64_t v = 0;
      for (auto it = f.rbegin(); it != f.rend(); ++it) v = modp::add(modp::mul(v, x, p), *it, p);
      if (v == 0) roots.push_back(x);
    }
    return roots;
  }
  UPolyModP xp = poly_powmod({0, 1}, p, f, p);
  if (xp.size() < 2) xp.resize(2, 0);
  xp[1] = modp::sub(xp[1], 1, p);
  UPolyModP g = poly_gcd(f, xp, p);
  split(g, p, rng, roots);
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::vector<Complex> roots_complex(std::vector<Complex> coeffs) {
  while (!coeffs.empty() && std::abs(coeffs.back()) == 0.0) coeffs.pop_back();
  const int deg = static_cast<int>(coeffs.size()) - 1;
  if (deg < 1) return {};
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -coeffs[i] / coeffs[deg];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  std::vector<Complex> roots(solver.eigenvalues().data(), solver.eigenvalues().data() + deg);
  for (auto& z : roots) {
    for (int it = 0; it < 3; ++it) {
      Complex v = 0.0, dv = 0.0;
      for (int k = deg; k >= 0; --k) {
        dv = dv * z + v;
        v = v * z + coeffs[k];
      }
      if (std::abs(dv) == 0.0) break;
      z -= v / dv;
    }
  }
  return roots;
}

}  // namespace ccc
