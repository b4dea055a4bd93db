#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ccc/cone.hpp"
#include "ccc/coframe.hpp"
#include "ccc/xi.hpp"

namespace ccc {

// ------------------------------------------------------------ verdict

enum class Closedness { Closed, ConformallyClosed, NotConformallyClosed };
std::string to_string(Closedness c);

struct ClosednessVerdict {
  Closedness kind = Closedness::NotConformallyClosed;
  std::vector<RatFunc> xi;  // sigma = iota(xi); zero for closed coframes
  std::vector<RatFunc> alpha;  // xi # omega in the dx basis
  std::vector<Rational> witness;  // point where sigma leaves Xi_V
  double residual = 0.0;          // Xi_V membership residual there
  std::string detail;
};

// sigma^omega against Xi_V via the trace formula; for conformally closed
// coframes d omega = (xi # omega) ^ omega is verified exactly, then that
// xi # omega is closed (InternalIdentityError otherwise).
ClosednessVerdict conformal_closedness_test(const Coframe& omega);

// ------------------------------------------------------- log functions

// q log|p(x) / p(base)|.
struct LogTerm {
  Rational coeff;
  MultiPoly arg;
  Rational arg_at_base;
};

// r(x) + sum q_i log|p_i(x) / p_i(base)| with r(base) = 0, so the function
// vanishes at the base point.
struct LogForm {
  int nvars = 0;
  RatFunc rational;
  std::vector<LogTerm> logs;

  bool is_zero() const;
  double evaluate(std::span<const double> x) const;
  // Exact gradient as rational functions.
  std::vector<RatFunc> gradient() const;
  std::string to_string(std::span<const std::string> names) const;
};

// Antiderivative of a closed rational 1-form by the ansatz r + sum q log p,
// with log arguments drawn from the denominator factors of the components and
// r = N / D for D = prod p^(e - 1). Returns nullopt when the ansatz has no
// solution. Throws IndexError on a component count mismatch.
std::optional<LogForm> integrate_closed_rational(std::span<const RatFunc> beta, std::span<const Rational> base);

// ---------------------------------------------------------- quadrature

using FormEvaluator = std::function<std::vector<double>(std::span<const double>)>;

struct PathIntegral {
  std::vector<double> value;      // along the first admissible path
  double path_discrepancy = 0.0;  // max difference to the second path
  int paths = 0;
};

// Integral of a 1-form (components per coordinate, possibly several forms at
// once: m forms give m * n entries, form-major) from base to x along
// axis-aligned polylines, adaptive Simpson with tolerance tol. Coordinate
// orders are tried until two paths avoid poles; PoleError if none does.
PathIntegral integrate_along_paths(const FormEvaluator& form, int forms, std::span<const double> base,
                                   std::span<const double> x, double tol = 1e-10);

// --------------------------------------------------------------- h, f, zeta

struct HFunction {
  bool symbolic = false;
  LogForm form;                    // when symbolic
  std::vector<RatFunc> alpha;      // dh, always available
  std::vector<Rational> base;
  double tol = 1e-10;

  double evaluate(std::span<const double> x) const;
  // Quadrature value and the two-path discrepancy, regardless of mode.
  PathIntegral quadrature(std::span<const double> x) const;
};

// dh = xi # omega; symbolic via integrate_closed_rational unless
// force_quadrature, otherwise path quadrature.
HFunction integrate_h(const Coframe& omega, const ClosednessVerdict& verdict, bool force_quadrature = false);

struct ConformalFactor {
  bool rational = false;  // f collapsed to an exact rational function
  RatFunc f;              // when rational
  HFunction h;

  double evaluate(std::span<const double> x) const;
  std::string to_string(std::span<const std::string> names) const;
};

// f = e^-h normalized to f(base) = 1.
ConformalFactor conformal_factor(const HFunction& h);

struct ClosureCheck {
  bool exact = false;
  bool passed = false;
  double max_residual = 0.0;
  int samples = 0;
};

// d(f omega) = 0: exact when f is rational, otherwise at real sample points
// within tol, using the exact gradient of the symbolic h or dh = alpha.
ClosureCheck verify_closure(const Coframe& omega, const ConformalFactor& f, int samples, std::uint64_t seed,
                            double tol = 1e-9);

struct FlatChart {
  bool symbolic = false;
  std::vector<LogForm> components;  // when symbolic; zeta(base) = 0
  RatMatrix a;
  ConformalFactor factor;
  double tol = 1e-10;

  std::vector<double> evaluate(std::span<const double> x) const;
  // d zeta_x = f(x) A(x), row k the differential of zeta^k.
  std::vector<std::vector<double>> jacobian(std::span<const double> x) const;
};

// zeta^k = integral of (f omega)^k from the base point. Symbolic when f is
// rational and every component integrates in closed form.
FlatChart flat_coordinates(const Coframe& omega, const ConformalFactor& f);

struct ProductDeviation {
  double max_deviation = 0.0;  // max |f_Z(d zeta_x y)| / |d zeta_x y|^d
  int samples = 0;
};

// Cone points (x, y) from float sampling pushed through (zeta(x), d zeta_x y).
ProductDeviation cone_product_deviation(const ConeStructure& cs, const FlatChart& zeta, int samples,
                                        std::uint64_t seed);

// --------------------------------------------------------------- certify

struct CertifyConfig {
  int characteristic_samples = 10;
  int validation_samples = 100;
  std::uint64_t seed = 1;
  double membership_tol = 1e-8;
  double quadrature_tol = 1e-10;
  double validation_tol = 1e-9;
  bool force_quadrature = false;
};

enum class CertStatus { Flat, ConformallyFlat, Rejected, Error };
std::string to_string(CertStatus s);

struct FlattenCertificate {
  CertStatus status = CertStatus::Error;
  std::string stage;  // last stage reached; the failing one unless status is flat / conformally_flat
  std::optional<ClosednessVerdict> verdict;
  std::optional<CharacteristicReport> characteristic;
  std::optional<HFunction> h;
  std::optional<ConformalFactor> f;
  std::optional<FlatChart> zeta;
  std::optional<ClosureCheck> closure;
  std::optional<ProductDeviation> product;
  double two_path_discrepancy = 0.0;
  bool fully_symbolic = false;
  int dim_xi_z = 0;
  int dim_xi_v = 0;
  std::vector<std::string> notes;
  std::string error;
  bool internal_error = false;  // an identity the theory guarantees failed
};

// characteristic_check -> conformal_closedness_test -> integrate_h ->
// conformal_factor -> flat_coordinates -> validation. When dim Xi_Z equals
// dim Xi_V the characteristic check runs exactly against the rational Xi_V.
// Stage errors are caught and reported with the stage name.
FlattenCertificate certify(const ConeStructure& cs, const XiZResult& xi_z, const CertifyConfig& cfg = {});

}  // namespace ccc
