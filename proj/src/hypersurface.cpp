#include "ccc/hypersurface.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ccc/report.hpp"
#include "ccc/upoly.hpp"

namespace ccc {

Hypersurface::Hypersurface(MultiPoly poly) : n(poly.nvars()), f(std::move(poly)) {
  if (n < 3) throw ConfigError("hypersurfaces need n >= 3 variables");
  if (f.is_zero() || !f.is_homogeneous()) throw ConfigError("hypersurface equation must be a nonzero homogeneous form");
  degree = f.total_degree();
  if (degree < 2) throw ConfigError("hypersurface degree must be at least 2 (Z is not linear)");
  for (int i = 0; i < n; ++i) gradient.push_back(f.diff(i));
}

std::string to_string(SmoothStatus s) {
  switch (s) {
    case SmoothStatus::Smooth:
      return "smooth";
    case SmoothStatus::Singular:
      return "singular";
    case SmoothStatus::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

std::uint64_t next_prime(std::uint64_t from) {
  std::uint64_t p = from | 1ULL;
  if (from <= 2) return 2;
  while (!modp::is_prime(p)) p += 2;
  return p;
}

namespace {

bool is_diagonal(const Hypersurface& z) {
  if (static_cast<int>(z.f.size()) != z.n) return false;
  std::vector<bool> seen(z.n, false);
  for (const auto& [m, c] : z.f.terms()) {
    int var = -1;
    for (int v = 0; v < z.n; ++v) {
      if (m.e[v] == 0) continue;
      if (var >= 0) return false;
      var = v;
    }
    if (var < 0 || seen[var]) return false;
    seen[var] = true;
  }
  return true;
}

// Calls visit(point) for one representative of every projective point of
// (Z/p)^n: last nonzero coordinate 1. visit returns false to stop.
template <class Visit>
void for_each_projective_point(int n, std::uint64_t p, Visit&& visit) {
  std::vector<std::uint64_t> u(n, 0);
  for (int lead = n - 1; lead >= 0; --lead) {
    std::fill(u.begin(), u.end(), 0);
    u[lead] = 1;
    while (true) {
      if (!visit(u)) return;
      int i = lead - 1;
      while (i >= 0 && u[i] == p - 1) u[i--] = 0;
      if (i < 0) break;
      ++u[i];
    }
  }
}

std::vector<PolyModP> reduce_all(const std::vector<MultiPoly>& polys, std::uint64_t p) {
  std::vector<PolyModP> out;
  for (const auto& q : polys) out.push_back(reduce_mod_prime(q, p));
  return out;
}

// Coefficients (low to high) of f as a polynomial in `var`, with the other
// coordinates taken from u.
UPolyModP univariate_image(const std::vector<PolyModP>& coeffs, std::span<const std::uint64_t> u) {
  UPolyModP out;
  for (const auto& c : coeffs) out.push_back(c.evaluate(u));
  while (!out.empty() && out.back() == 0) out.pop_back();
  return out;
}

template <class Field>
std::vector<std::vector<typename Field::value_type>> tangent_basis(const Hypersurface& z, const Field& field,
                                                                   std::vector<typename Field::value_type> g) {
  using T = typename Field::value_type;
  int m = -1;
  double best = -1.0;
  for (int i = 0; i < z.n; ++i) {
    if (field.is_zero(g[i])) continue;
    if constexpr (std::is_same_v<T, Complex>) {
      if (std::abs(g[i]) > best) {
        best = std::abs(g[i]);
        m = i;
      }
    } else if (m < 0) {
      m = i;
    }
  }
  if (m < 0) throw SingularError("gradient vanishes at the cone point");
  std::vector<std::vector<T>> basis;
  T inv = field.inv(g[m]);
  for (int i = 0; i < z.n; ++i) {
    if (i == m) continue;
    std::vector<T> v(z.n, field.zero());
    v[i] = field.one();
    v[m] = field.neg(field.mul(g[i], inv));
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace

SmoothResult smooth_check(const Hypersurface& z) {
  SmoothResult out;
  if (is_diagonal(z)) {
    out.status = SmoothStatus::Smooth;
    out.method = "closed_form";
    out.detail = "diagonal form: the partials d a_i x_i^(d-1) vanish together only at the origin";
    return out;
  }
  out.method = "prime_search";
  // Small primes keep the enumeration near a million points.
  std::uint64_t start = z.n <= 3 ? 101 : z.n == 4 ? 53 : z.n == 5 ? 23 : 11;
  std::uint64_t p1 = next_prime(start);
  std::uint64_t p2 = next_prime(p1 + 1);
  out.primes = {p1, p2};
  bool unlifted = false;
  for (std::uint64_t p : out.primes) {
    std::vector<PolyModP> grad;
    try {
      grad = reduce_all(z.gradient, p);
    } catch (const BadPrimeError&) {
      unlifted = true;
      continue;
    }
    bool found_mod_p = false;
    for_each_projective_point(z.n, p, [&](const std::vector<std::uint64_t>& u) {
      for (const auto& g : grad) {
        if (g.evaluate(u) != 0) return true;
      }
      found_mod_p = true;
      std::vector<Rational> lift(z.n);
      for (int i = 0; i < z.n; ++i) lift[i] = Rational(static_cast<long>(modp::lift(u[i], p)));
      bool singular = true;
      for (const auto& g : z.gradient) {
        if (sgn(g.evaluate(std::span<const Rational>(lift))) != 0) {
          singular = false;
          break;
        }
      }
      if (!singular) return true;
      out.witness = lift;
      return false;
    });
    if (!out.witness.empty()) {
      out.status = SmoothStatus::Singular;
      out.detail = "common zero of all partials";
      return out;
    }
    if (found_mod_p) unlifted = true;
  }
  if (unlifted) {
    out.status = SmoothStatus::Inconclusive;
    out.detail = "partials share zeros modulo the search primes that do not lift to Q";
  } else {
    out.status = SmoothStatus::Smooth;
    out.detail = "no common zero of the partials over either search prime";
  }
  return out;
}

std::vector<std::vector<std::uint64_t>> sample_cone_points_modp(const Hypersurface& z, int count, std::uint64_t seed,
                                                                std::uint64_t p, bool require_smooth) {
  std::mt19937_64 rng(splitmix64(seed ^ splitmix64(p)));
  std::vector<int> solvable;
  for (int v = 0; v < z.n; ++v) {
    if (z.f.depends_on(v)) solvable.push_back(v);
  }
  std::vector<std::vector<PolyModP>> coeffs(z.n);
  for (int v : solvable) coeffs[v] = reduce_all(z.f.coefficients_in(v), p);
  std::vector<PolyModP> grad = reduce_all(z.gradient, p);
  std::uniform_int_distribution<std::uint64_t> coord(0, p - 1);
  std::vector<std::vector<std::uint64_t>> out;
  const int max_attempts = 50 * std::max(count, 1);
  for (int attempt = 0; attempt < max_attempts && static_cast<int>(out.size()) < count; ++attempt) {
    int var = solvable[rng() % solvable.size()];
    std::vector<std::uint64_t> u(z.n);
    for (auto& x : u) x = coord(rng);
    u[var] = 0;
    UPolyModP image = univariate_image(coeffs[var], u);
    if (image.size() < 2) continue;
    auto roots = roots_mod_p(image, p, rng);
    if (roots.empty()) continue;
    u[var] = roots[rng() % roots.size()];
    bool zero_point = std::all_of(u.begin(), u.end(), [](std::uint64_t x) { return x == 0; });
    if (zero_point) continue;
    if (require_smooth) {
      bool singular = std::all_of(grad.begin(), grad.end(), [&](const PolyModP& g) { return g.evaluate(u) == 0; });
      if (singular) continue;
    }
    out.push_back(std::move(u));
  }
  if (static_cast<int>(out.size()) < count) {
    throw SamplingError("found only " + std::to_string(out.size()) + " of " + std::to_string(count) +
                        " cone points over Z/" + std::to_string(p));
  }
  return out;
}

std::vector<std::vector<Complex>> sample_cone_points_complex(const Hypersurface& z, int count, std::uint64_t seed) {
  std::mt19937_64 rng(splitmix64(seed ^ 0xC0FFEEULL));
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<int> solvable;
  for (int v = 0; v < z.n; ++v) {
    if (z.f.depends_on(v)) solvable.push_back(v);
  }
  std::vector<std::vector<MultiPoly>> coeffs(z.n);
  for (int v : solvable) coeffs[v] = z.f.coefficients_in(v);
  std::vector<std::vector<Complex>> out;
  const int max_attempts = 50 * std::max(count, 1);
  for (int attempt = 0; attempt < max_attempts && static_cast<int>(out.size()) < count; ++attempt) {
    int var = solvable[rng() % solvable.size()];
    std::vector<Complex> u(z.n);
    for (auto& x : u) x = Complex(gauss(rng), gauss(rng));
    u[var] = 0.0;
    std::vector<Complex> image;
    for (const auto& c : coeffs[var]) image.push_back(c.evaluate(std::span<const Complex>(u)));
    auto roots = roots_complex(image);
    if (roots.empty()) continue;
    u[var] = roots[rng() % roots.size()];
    double norm = 0.0;
    for (const auto& x : u) norm += std::norm(x);
    norm = std::sqrt(norm);
    if (norm == 0.0) continue;
    for (auto& x : u) x /= norm;
    double gnorm = 0.0;
    for (const auto& g : z.gradient) gnorm += std::norm(g.evaluate(std::span<const Complex>(u)));
    if (std::sqrt(gnorm) < 1e-8) continue;
    if (std::abs(z.f.evaluate(std::span<const Complex>(u))) > 1e-10) continue;
    out.push_back(std::move(u));
  }
  if (static_cast<int>(out.size()) < count) {
    throw SamplingError("found only " + std::to_string(out.size()) + " complex cone points");
  }
  return out;
}

std::vector<std::vector<std::uint64_t>> tangent_basis_modp(const Hypersurface& z, std::span<const std::uint64_t> u,
                                                           std::uint64_t p) {
  std::vector<std::uint64_t> g;
  for (const auto& d : z.gradient) g.push_back(d.evaluate_mod(u, p));
  return tangent_basis(z, PrimeField(p), std::move(g));
}

std::vector<std::vector<Complex>> tangent_basis_complex(const Hypersurface& z, std::span<const Complex> u) {
  std::vector<Complex> g;
  for (const auto& d : z.gradient) g.push_back(d.evaluate(u));
  return tangent_basis(z, ComplexField{}, std::move(g));
}

std::vector<std::vector<Rational>> tangent_basis_rational(const Hypersurface& z, std::span<const Rational> u) {
  std::vector<Rational> g;
  for (const auto& d : z.gradient) g.push_back(d.evaluate(u));
  return tangent_basis(z, RationalField{}, std::move(g));
}

std::vector<std::vector<std::uint64_t>> enumerate_projective_points(const Hypersurface& z, std::uint64_t p) {
  std::mt19937_64 rng(p);
  std::vector<std::vector<std::uint64_t>> out;
  PolyModP fp = reduce_mod_prime(z.f, p);
  std::vector<std::uint64_t> u(z.n, 0);
  u[0] = 1;
  if (fp.evaluate(u) == 0) out.push_back(u);
  // lead = index of the last nonzero coordinate (set to 1); coordinate
  // lead - 1 is solved for, the ones before it run over Z/p.
  for (int lead = 1; lead < z.n; ++lead) {
    const int var = lead - 1;
    std::vector<PolyModP> coeffs = reduce_all(z.f.coefficients_in(var), p);
    std::fill(u.begin(), u.end(), 0);
    u[lead] = 1;
    while (true) {
      u[var] = 0;
      UPolyModP image = univariate_image(coeffs, u);
      if (image.empty()) {
        for (std::uint64_t r = 0; r < p; ++r) {
          u[var] = r;
          out.push_back(u);
        }
      } else if (image.size() >= 2) {
        for (std::uint64_t r : roots_mod_p(image, p, rng)) {
          u[var] = r;
          out.push_back(u);
        }
      }
      u[var] = 0;
      int i = var - 1;
      while (i >= 0 && u[i] == p - 1) u[i--] = 0;
      if (i < 0) break;
      ++u[i];
    }
  }
  return out;
}

}  // namespace ccc
