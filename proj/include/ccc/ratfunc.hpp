#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ccc/poly.hpp"

namespace ccc {

// One factor base^exponent of a factored denominator. Bases are primitive
// integer polynomials with positive leading coefficient and are never
// constant.
struct DenFactor {
  MultiPoly base;
  int exponent = 0;
  friend bool operator==(const DenFactor&, const DenFactor&) = default;
};

// Exact rational function num / prod(base_i^exponent_i).
//
// Denominators stay factored. New divisors are split into square-free
// factors, and after every operation the numerator is trial-divided by each
// denominator base, so common factors that are visible as bases cancel.
// This is not a full gcd normal form; equality is decided by
// cross-multiplication (operator==), and normalized() applies gcd-based
// cancellation when a canonical representative matters.
class RatFunc {
 public:
  RatFunc() = default;
  explicit RatFunc(int nvars);
  RatFunc(int nvars, const Rational& c);
  RatFunc(MultiPoly numerator);  // NOLINT(google-explicit-constructor)

  static RatFunc variable(int nvars, int index) { return RatFunc(MultiPoly::variable(nvars, index)); }
  // num / den; throws SingularError for den == 0.
  static RatFunc quotient(const MultiPoly& num, const MultiPoly& den);

  int nvars() const { return num_.nvars(); }
  const MultiPoly& numerator() const { return num_; }
  const std::vector<DenFactor>& denominator_factors() const { return den_; }
  MultiPoly denominator() const;

  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.empty(); }
  bool is_constant() const { return den_.empty() && num_.is_constant(); }
  Rational constant_value() const { return num_.constant_term(); }

  RatFunc operator-() const;
  RatFunc& operator+=(const RatFunc& other);
  RatFunc& operator-=(const RatFunc& other);
  RatFunc& operator*=(const RatFunc& other);
  RatFunc& operator/=(const RatFunc& other);
  friend RatFunc operator+(RatFunc a, const RatFunc& b) { return a += b; }
  friend RatFunc operator-(RatFunc a, const RatFunc& b) { return a -= b; }
  friend RatFunc operator*(RatFunc a, const RatFunc& b) { return a *= b; }
  friend RatFunc operator/(RatFunc a, const RatFunc& b) { return a /= b; }
  friend RatFunc operator*(RatFunc a, const Rational& c) {
    a.num_ *= c;
    if (a.num_.is_zero()) a.den_.clear();
    return a;
  }
  friend RatFunc operator*(const Rational& c, RatFunc a) { return std::move(a) * c; }
  // Exact equality of rational functions (cross-multiplication).
  friend bool operator==(const RatFunc& a, const RatFunc& b);

  RatFunc inverse() const;
  RatFunc pow(unsigned exponent) const;
  RatFunc diff(int var) const;

  // gcd-based cancellation of every common factor between numerator and the
  // denominator bases.
  RatFunc normalized() const;

  RatFunc embed(int nvars, int offset = 0) const;

  // Throws PoleError when a denominator base vanishes at the point.
  Rational evaluate(std::span<const Rational> point) const;
  double evaluate(std::span<const double> point) const;
  Complex evaluate(std::span<const Complex> point) const;
  std::uint64_t evaluate_mod(std::span<const std::uint64_t> point, std::uint64_t p) const;

  std::string to_string(std::span<const std::string> names) const;
  std::string to_string() const;

 private:
  void reduce();
  void set_denominator(std::vector<DenFactor> den);

  MultiPoly num_;
  std::vector<DenFactor> den_;  // sorted by base, strictly positive exponents
};

// f(values) for a polynomial f with values in a common field of fractions.
RatFunc compose(const MultiPoly& f, std::span<const RatFunc> values);

bool poly_less(const MultiPoly& a, const MultiPoly& b);

}  // namespace ccc
