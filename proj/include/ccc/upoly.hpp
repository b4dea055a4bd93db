#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ccc/scalar.hpp"

namespace ccc {

// Dense univariate polynomials, coefficients from low to high degree.
using UPolyModP = std::vector<std::uint64_t>;

// All distinct roots in Z/pZ (p an odd prime), sorted ascending.
// Uses gcd(f, x^p - x) followed by Cantor-Zassenhaus splitting.
std::vector<std::uint64_t> roots_mod_p(UPolyModP f, std::uint64_t p, std::mt19937_64& rng);

// Complex roots via companion-matrix eigenvalues, polished by Newton steps.
std::vector<Complex> roots_complex(std::vector<Complex> coeffs);

}  // namespace ccc
