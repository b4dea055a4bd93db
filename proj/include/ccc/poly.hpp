#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ccc/errors.hpp"
#include "ccc/scalar.hpp"

namespace ccc {

inline constexpr int kMaxVars = 16;

// Exponent vector. Unused trailing slots stay zero, so comparison is
// independent of the ring the monomial lives in.
struct Monomial {
  std::array<std::uint8_t, kMaxVars> e{};

  auto operator<=>(const Monomial&) const = default;

  int degree() const;
  bool divides(const Monomial& other) const;
  Monomial operator*(const Monomial& other) const;
  // Requires divides(other).
  Monomial quotient(const Monomial& divisor) const;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept;
};

// Polynomial size guard. Defaults to 100000 terms; the CCC_MAX_TERMS
// environment variable overrides the default at first use.
std::size_t max_terms();
void set_max_terms(std::size_t bound);

// Sparse multivariate polynomial with rational coefficients. Terms are kept
// sorted by descending lex order (variable 0 most significant) with no zero
// coefficients.
class MultiPoly {
 public:
  using Term = std::pair<Monomial, Rational>;

  MultiPoly() = default;
  explicit MultiPoly(int nvars);
  MultiPoly(int nvars, const Rational& c);

  static MultiPoly variable(int nvars, int index);
  static MultiPoly monomial(int nvars, const Monomial& m, const Rational& c);
  // Takes unsorted terms, merges duplicates, drops zeros.
  static MultiPoly from_terms(int nvars, std::vector<Term> terms);

  int nvars() const { return nvars_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  // Coefficient of the constant monomial.
  Rational constant_term() const;
  const Term& leading() const { return terms_.front(); }
  int total_degree() const;
  int degree_in(int var) const;
  bool depends_on(int var) const { return degree_in(var) > 0; }
  bool is_homogeneous() const;

  MultiPoly operator-() const;
  MultiPoly& operator+=(const MultiPoly& other);
  MultiPoly& operator-=(const MultiPoly& other);
  MultiPoly& operator*=(const MultiPoly& other);
  MultiPoly& operator*=(const Rational& c);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator*(MultiPoly a, const Rational& c) { return a *= c; }
  friend MultiPoly operator*(const Rational& c, MultiPoly a) { return a *= c; }
  friend bool operator==(const MultiPoly& a, const MultiPoly& b);

  MultiPoly pow(unsigned exponent) const;
  MultiPoly diff(int var) const;

  // Exact division; nullopt when `divisor` does not divide *this.
  std::optional<MultiPoly> divide_exact(const MultiPoly& divisor) const;
  std::optional<MultiPoly> divide_exact(const Monomial& m) const;

  // Positive rational c such that *this / c has coprime integer coefficients
  // and a positive leading coefficient. Zero for the zero polynomial.
  Rational content() const;
  MultiPoly primitive() const;
  Monomial monomial_gcd() const;

  // Coefficients with respect to `var`: result[k] multiplies var^k.
  std::vector<MultiPoly> coefficients_in(int var) const;

  // Replaces variable i by values[i]; all values must share one ring.
  MultiPoly substitute(std::span<const MultiPoly> values) const;
  // Embeds into a ring with `nvars` variables, shifting indices by `offset`.
  MultiPoly embed(int nvars, int offset = 0) const;

  template <class Field>
  typename Field::value_type evaluate(std::span<const typename Field::value_type> point,
                                      const Field& field) const;
  Rational evaluate(std::span<const Rational> point) const;
  double evaluate(std::span<const double> point) const;
  Complex evaluate(std::span<const Complex> point) const;
  std::uint64_t evaluate_mod(std::span<const std::uint64_t> point, std::uint64_t p) const;

  std::string to_string(std::span<const std::string> names) const;
  std::string to_string() const;

 private:
  void check_ring(const MultiPoly& other) const;
  void check_size() const;

  int nvars_ = 0;
  std::vector<Term> terms_;
};

std::vector<std::string> default_names(int nvars, const std::string& prefix = "x");

// Greatest common divisor over Q, normalized as a primitive integer
// polynomial with positive leading coefficient. gcd(0, 0) = 0.
MultiPoly gcd(const MultiPoly& a, const MultiPoly& b);

// Necessary condition for divisor | poly, tested on a univariate
// specialization modulo a large prime. false means "certainly not a divisor".
bool maybe_divides(const MultiPoly& divisor, const MultiPoly& poly);

// Square-free decomposition: a = c * prod factors[i].first^factors[i].second
// with pairwise coprime square-free primitive factors.
std::vector<std::pair<MultiPoly, int>> squarefree_decomposition(const MultiPoly& a);

// Polynomial over Z/pZ, produced by reduce_mod_prime.
class PolyModP {
 public:
  using Term = std::pair<Monomial, std::uint64_t>;

  PolyModP(int nvars, std::uint64_t p) : nvars_(nvars), p_(p) {}
  static PolyModP from_terms(int nvars, std::uint64_t p, std::vector<Term> terms);

  int nvars() const { return nvars_; }
  std::uint64_t prime() const { return p_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  PolyModP operator+(const PolyModP& other) const;
  PolyModP operator*(const PolyModP& other) const;
  friend bool operator==(const PolyModP& a, const PolyModP& b) {
    return a.nvars_ == b.nvars_ && a.p_ == b.p_ && a.terms_ == b.terms_;
  }
  PolyModP diff(int var) const;
  std::uint64_t evaluate(std::span<const std::uint64_t> point) const;

 private:
  int nvars_;
  std::uint64_t p_;
  std::vector<Term> terms_;
};

// Coefficient-wise reduction. Throws BadPrimeError if p divides a
// coefficient denominator.
PolyModP reduce_mod_prime(const MultiPoly& poly, std::uint64_t p);

// ---------------------------------------------------------------------------

template <class Field>
typename Field::value_type MultiPoly::evaluate(std::span<const typename Field::value_type> point,
                                               const Field& field) const {
  using T = typename Field::value_type;
  if (static_cast<int>(point.size()) != nvars_) {
    throw IndexError("evaluation point has " + std::to_string(point.size()) +
                     " coordinates, polynomial has " + std::to_string(nvars_) + " variables");
  }
  std::vector<std::vector<T>> powers(nvars_);
  for (int v = 0; v < nvars_; ++v) {
    int d = degree_in(v);
    powers[v].reserve(d + 1);
    powers[v].push_back(field.one());
    for (int k = 1; k <= d; ++k) powers[v].push_back(field.mul(powers[v].back(), point[v]));
  }
  T total = field.zero();
  for (const auto& [mono, coeff] : terms_) {
    T term = field.from_rational(coeff);
    for (int v = 0; v < nvars_; ++v) {
      if (mono.e[v] != 0) term = field.mul(term, powers[v][mono.e[v]]);
    }
    total = field.add(total, term);
  }
  return total;
}

}  // namespace ccc
