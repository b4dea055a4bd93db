#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>

namespace ccc {

using Rational = mpq_class;
using Integer = mpz_class;
using Complex = std::complex<double>;

// Parses "3", "-2", "1/2". Throws ParseError on anything else.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

inline Rational make_rational(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// Arithmetic in Z/pZ for primes below 2^63.
namespace modp {

inline std::uint64_t add(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  std::uint64_t s = a + b;
  return (s >= p || s < a) ? s - p : s;
}
inline std::uint64_t sub(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return a >= b ? a - b : a + (p - b);
}
inline std::uint64_t mul(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}
inline std::uint64_t neg(std::uint64_t a, std::uint64_t p) { return a == 0 ? 0 : p - a; }
std::uint64_t pow(std::uint64_t base, std::uint64_t exp, std::uint64_t p);
// Throws BadPrimeError when a == 0 mod p.
std::uint64_t inv(std::uint64_t a, std::uint64_t p);
std::uint64_t from_integer(const Integer& z, std::uint64_t p);
// Throws BadPrimeError when p divides the denominator.
std::uint64_t from_rational(const Rational& q, std::uint64_t p);
// Symmetric lift into (-p/2, p/2].
long long lift(std::uint64_t a, std::uint64_t p);
bool is_prime(std::uint64_t n);

}  // namespace modp

// Field descriptors used by the generic linear algebra and evaluation code.
struct RationalField {
  using value_type = Rational;
  Rational zero() const { return 0; }
  Rational one() const { return 1; }
  Rational add(const Rational& a, const Rational& b) const { return a + b; }
  Rational sub(const Rational& a, const Rational& b) const { return a - b; }
  Rational mul(const Rational& a, const Rational& b) const { return a * b; }
  Rational neg(const Rational& a) const { return -a; }
  Rational inv(const Rational& a) const { return 1 / a; }
  bool is_zero(const Rational& a) const { return sgn(a) == 0; }
  Rational from_rational(const Rational& q) const { return q; }
};

struct PrimeField {
  using value_type = std::uint64_t;
  std::uint64_t p;
  explicit PrimeField(std::uint64_t prime) : p(prime) {}
  std::uint64_t zero() const { return 0; }
  std::uint64_t one() const { return 1; }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return modp::add(a, b, p); }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return modp::sub(a, b, p); }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return modp::mul(a, b, p); }
  std::uint64_t neg(std::uint64_t a) const { return modp::neg(a, p); }
  std::uint64_t inv(std::uint64_t a) const { return modp::inv(a, p); }
  bool is_zero(std::uint64_t a) const { return a == 0; }
  std::uint64_t from_rational(const Rational& q) const { return modp::from_rational(q, p); }
};

struct ComplexField {
  using value_type = Complex;
  Complex zero() const { return 0.0; }
  Complex one() const { return 1.0; }
  Complex add(Complex a, Complex b) const { return a + b; }
  Complex sub(Complex a, Complex b) const { return a - b; }
  Complex mul(Complex a, Complex b) const { return a * b; }
  Complex neg(Complex a) const { return -a; }
  Complex inv(Complex a) const { return 1.0 / a; }
  bool is_zero(Complex a) const { return a == 0.0; }
  Complex from_rational(const Rational& q) const { return q.get_d(); }
};

struct RealField {
  using value_type = double;
  double zero() const { return 0.0; }
  double one() const { return 1.0; }
  double add(double a, double b) const { return a + b; }
  double sub(double a, double b) const { return a - b; }
  double mul(double a, double b) const { return a * b; }
  double neg(double a) const { return -a; }
  double inv(double a) const { return 1.0 / a; }
  bool is_zero(double a) const { return a == 0.0; }
  double from_rational(const Rational& q) const { return q.get_d(); }
};

}  // namespace ccc
