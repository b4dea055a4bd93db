#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ccc/coframe.hpp"
#include "ccc/hypersurface.hpp"
#include "ccc/xi.hpp"

namespace ccc {

// The Z-isotrivial cone structure C_x = {[y] : f(A(x) y) = 0} carried onto
// Z by the adapted coframe omega.
struct ConeStructure {
  Coframe omega;
  Hypersurface z;
  InducedCoframe induced;
  StructureFunction sigma;
  RatFunc cone_equation;  // F = f o mu on the tangent chart

  int n() const { return z.n; }
};

// Throws DimensionError when omega and Z live in different dimensions.
ConeStructure adapted_cone(const Coframe& omega, const Hypersurface& z);

// A point (x, y) of the cone over C with F(x, y) = 0. Only the coordinates
// of the sampling field are filled.
struct ConeSample {
  std::vector<std::uint64_t> x_mod, y_mod;
  std::vector<Complex> x_c, y_c;
};

struct ConeSampleSet {
  FieldTag field;
  std::vector<ConeSample> points;
};

struct ConeSampling {
  int count = 20;
  std::uint64_t seed = 1;
  FieldTag field = FieldTag::modp(2147483647ULL);
  double box_radius = 0.25;  // float samples: |x_i - base_i| <= box_radius
};

// Prime field: x uniform mod p, mu = A(x) y drawn on the cone over Z, exact.
// Float: x real in a box around the base point, mu a unit complex cone point,
// y polished by one Newton step so that |F| < 1e-12. Points with grad_y F = 0
// are rejected. A rational tag throws ConfigError: use a prime field for exact
// sampling. Throws SamplingError after 50 * count failed attempts.
ConeSampleSet sample_cone(const ConeStructure& cs, const ConeSampling& cfg);

struct SampleEntry {
  std::string point;
  std::string lhs;
  std::string rhs;
  double residual = 0.0;
};

// Shared by the tangency and double-bracket checks. Passes iff every residual
// is exactly zero (exact modes) or below tol (float).
struct SampleReport {
  std::string name;
  EvalMode mode = EvalMode::Rational;
  bool passed = false;
  bool symbolic = false;  // the identity held as rational functions
  std::vector<SampleEntry> entries;
  double max_residual = 0.0;
  std::string detail;
};
using TangencyReport = SampleReport;
using BracketReport = SampleReport;

// gamma(F) computed symbolically; passes iff it is the zero rational function.
TangencyReport geodesic_tangency_check(const ConeStructure& cs);

// Projected double bracket omega(d pi [[v~, gamma], gamma]) against
// sigma(u, v) at each sample, where u = mu(x, y), v runs over a basis of
// ker grad f(u) and v~ = v # D_lambda is the constant-coefficient vertical
// field. The identity is first verified symbolically for v = e_b. For prime
// field samples both sides are compared exactly; for float samples by the
// relative discrepancy against tol.
BracketReport double_bracket_check(const ConeStructure& cs, const ConeSampleSet& samples, double tol = 1e-8);

struct CharacteristicReport {
  bool passed = false;
  FieldTag field;
  int samples = 0;
  double max_residual = 0.0;
  std::vector<SampleEntry> entries;
  std::optional<SampleEntry> witness;  // first sample with sigma outside the subspace
  std::vector<Rational> witness_point;  // when the subspace is rational
  std::string detail;
};

// sigma^omega evaluated at sample points x and tested for membership in
// xi_z. Points are drawn in the subspace's field: small rational offsets of
// the base point (the base point first), residues mod p, or real points near
// the base point.
CharacteristicReport characteristic_check(const ConeStructure& cs, const TensorSubspace& xi_z, int samples,
                                          std::uint64_t seed);

}  // namespace ccc
