#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ccc/poly.hpp"

namespace ccc {

// Z = {f = 0} in P(V) for a homogeneous f of degree d >= 2 in n >= 3
// variables; the cone over Z is {f = 0} in V.
struct Hypersurface {
  int n = 0;
  int degree = 0;
  MultiPoly f;
  std::vector<MultiPoly> gradient;

  Hypersurface() = default;
  // Throws ConfigError unless f is homogeneous of degree >= 2 and n >= 3.
  explicit Hypersurface(MultiPoly f);
};

enum class SmoothStatus { Smooth, Singular, Inconclusive };
std::string to_string(SmoothStatus s);

struct SmoothResult {
  SmoothStatus status = SmoothStatus::Inconclusive;
  std::string method;              // "closed_form", "prime_search"
  std::vector<Rational> witness;   // singular point when status == Singular
  std::vector<std::uint64_t> primes;
  std::string detail;
};

// (a) diagonal forms sum a_i x_i^d with all a_i != 0 are smooth; (b)
// otherwise every projective point over two small primes is checked for a
// common zero of the partials. A mod-p common zero is reported as Singular
// only after its centered lift is verified to be singular over Q; an unlifted
// one leaves the result Inconclusive. No common zero over either prime is
// reported as Smooth with method "prime_search".
SmoothResult smooth_check(const Hypersurface& z);

// Points u of the cone over Z over Z/p: n-1 coordinates random, the last
// solved by root finding. With require_smooth, points with grad f(u) = 0 are
// rejected. Throws SamplingError after 50 * count failed attempts.
std::vector<std::vector<std::uint64_t>> sample_cone_points_modp(const Hypersurface& z, int count,
                                                                std::uint64_t seed, std::uint64_t p,
                                                                bool require_smooth = true);

// Complex points of unit norm on the cone, Newton-polished.
std::vector<std::vector<Complex>> sample_cone_points_complex(const Hypersurface& z, int count, std::uint64_t seed);

// Basis of ker grad f(u) (n - 1 vectors): e_i - (g_i / g_m) e_m, where m is
// the first index with g_m != 0.
std::vector<std::vector<std::uint64_t>> tangent_basis_modp(const Hypersurface& z, std::span<const std::uint64_t> u,
                                                           std::uint64_t p);
std::vector<std::vector<Complex>> tangent_basis_complex(const Hypersurface& z, std::span<const Complex> u);
std::vector<std::vector<Rational>> tangent_basis_rational(const Hypersurface& z, std::span<const Rational> u);

// Every point of the cone over Z over Z/p, one representative per
// projective point (last nonzero coordinate 1). Intended for small p.
std::vector<std::vector<std::uint64_t>> enumerate_projective_points(const Hypersurface& z, std::uint64_t p);

std::uint64_t next_prime(std::uint64_t from);

}  // namespace ccc
