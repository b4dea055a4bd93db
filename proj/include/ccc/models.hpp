#pragma once

#include <string>
#include <vector>

#include <cstdint>

#include "ccc/coframe.hpp"
#include "ccc/hypersurface.hpp"

namespace ccc {

// Coframe from entry strings A(k, j) over the chart's variables.
Coframe coframe_from_strings(const std::vector<std::vector<std::string>>& rows, const Chart& chart);
Coframe coframe_from_strings(const std::vector<std::vector<std::string>>& rows);

// Translation-invariant model omega = dx.
Coframe model_flat(int n);
// omega = s dx; SingularError when s vanishes at the base point.
Coframe model_rescaled(const RatFunc& s, const Chart& chart);
Coframe model_rescaled(const std::string& s, int n);
// omega = A dx for an arbitrary invertible A; the default twist is
// A = I + x1 E_23.
Coframe model_twisted(const RatMatrix& a, const Chart& chart);
Coframe model_twisted_default(int n);

// Heisenberg-type coframe: identity with A(3, 2) = x1.
Coframe model_heisenberg(int n);

// I + P with P(0) = 0: each entry is zero with probability 1/2, otherwise a
// few random monomials of degree 1..degree with small rational coefficients.
// Deterministic in seed.
Coframe random_polynomial_coframe(int n, int degree, std::uint64_t seed);

// Fermat hypersurface x1^d + ... + xn^d.
Hypersurface fermat_hypersurface(int n, int degree);

}  // namespace ccc
