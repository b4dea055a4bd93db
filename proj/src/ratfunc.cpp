#include "ccc/ratfunc.hpp"

#include <algorithm>

namespace ccc {

bool poly_less(const MultiPoly& a, const MultiPoly& b) {
  if (a.nvars() != b.nvars()) return a.nvars() < b.nvars();
  return std::lexicographical_compare(
      a.terms().begin(), a.terms().end(), b.terms().begin(), b.terms().end(),
      [](const MultiPoly::Term& x, const MultiPoly::Term& y) {
        if (x.first != y.first) return x.first < y.first;
        return cmp(x.second, y.second) < 0;
      });
}

namespace {

void sort_and_merge(std::vector<DenFactor>& den) {
  std::sort(den.begin(), den.end(), [](const DenFactor& a, const DenFactor& b) { return poly_less(a.base, b.base); });
  std::vector<DenFactor> out;
  for (auto& f : den) {
    if (f.exponent == 0) continue;
    if (!out.empty() && out.back().base == f.base) {
      out.back().exponent += f.exponent;
    } else {
      out.push_back(std::move(f));
    }
  }
  den = std::move(out);
}

// Divides `num` by base as often as possible, at most `limit` times.
int cancel(MultiPoly& num, const MultiPoly& base, int limit) {
  int count = 0;
  while (count < limit && !num.is_zero() && maybe_divides(base, num)) {
    auto q = num.divide_exact(base);
    if (!q) break;
    num = std::move(*q);
    ++count;
  }
  return count;
}

MultiPoly expand(const std::vector<DenFactor>& den, int nvars) {
  MultiPoly out(nvars, Rational(1));
  for (const auto& f : den) out *= f.base.pow(static_cast<unsigned>(f.exponent));
  return out;
}

template <class Field>
typename Field::value_type evaluate_ratfunc(const MultiPoly& num, const std::vector<DenFactor>& den,
                                            std::span<const typename Field::value_type> point,
                                            const Field& field) {
  auto denominator = field.one();
  for (const auto& f : den) {
    auto v = f.base.evaluate(point, field);
    if (field.is_zero(v)) throw PoleError("denominator factor " + f.base.to_string() + " vanishes at the point");
    for (int k = 0; k < f.exponent; ++k) denominator = field.mul(denominator, v);
  }
  return field.mul(num.evaluate(point, field), field.inv(denominator));
}

}  // namespace

RatFunc::RatFunc(int nvars) : num_(nvars) {}
RatFunc::RatFunc(int nvars, const Rational& c) : num_(nvars, c) {}
RatFunc::RatFunc(MultiPoly numerator) : num_(std::move(numerator)) {}

RatFunc RatFunc::quotient(const MultiPoly& num, const MultiPoly& den) { return RatFunc(num) / RatFunc(den); }

MultiPoly RatFunc::denominator() const { return expand(den_, nvars()); }

void RatFunc::set_denominator(std::vector<DenFactor> den) {
  sort_and_merge(den);
  den_ = std::move(den);
  reduce();
}

void RatFunc::reduce() {
  if (num_.is_zero()) {
    den_.clear();
    return;
  }
  for (auto& f : den_) f.exponent -= cancel(num_, f.base, f.exponent);
  std::erase_if(den_, [](const DenFactor& f) { return f.exponent == 0; });
}

RatFunc RatFunc::operator-() const {
  RatFunc r = *this;
  r.num_ = -r.num_;
  return r;
}

RatFunc& RatFunc::operator+=(const RatFunc& other) {
  if (other.is_zero()) return *this;
  if (is_zero()) return *this = other;
  if (den_ == other.den_) {
    num_ += other.num_;
    reduce();
    return *this;
  }
  // Least common multiple of the two factored denominators.
  std::vector<DenFactor> lcm;
  std::vector<DenFactor> mine_missing, theirs_missing;
  auto a = den_.begin();
  auto b = other.den_.begin();
  while (a != den_.end() || b != other.den_.end()) {
    if (b == other.den_.end() || (a != den_.end() && poly_less(a->base, b->base))) {
      lcm.push_back(*a);
      theirs_missing.push_back(*a);
      ++a;
    } else if (a == den_.end() || poly_less(b->base, a->base)) {
      lcm.push_back(*b);
      mine_missing.push_back(*b);
      ++b;
    } else {
      int e = std::max(a->exponent, b->exponent);
      lcm.push_back({a->base, e});
      if (e > a->exponent) mine_missing.push_back({a->base, e - a->exponent});
      if (e > b->exponent) theirs_missing.push_back({a->base, e - b->exponent});
      ++a;
      ++b;
    }
  }
  int n = nvars();
  num_ = num_ * expand(mine_missing, n) + other.num_ * expand(theirs_missing, n);
  den_ = std::move(lcm);
  reduce();
  return *this;
}

RatFunc& RatFunc::operator-=(const RatFunc& other) { return *this += -other; }

RatFunc& RatFunc::operator*=(const RatFunc& other) {
  if (is_zero() || other.is_zero()) {
    *this = RatFunc(nvars());
    return *this;
  }
  MultiPoly theirs = other.num_;
  std::vector<DenFactor> my_den = den_;
  std::vector<DenFactor> their_den = other.den_;
  for (auto& f : their_den) f.exponent -= cancel(num_, f.base, f.exponent);
  for (auto& f : my_den) f.exponent -= cancel(theirs, f.base, f.exponent);
  num_ *= theirs;
  my_den.insert(my_den.end(), their_den.begin(), their_den.end());
  sort_and_merge(my_den);
  den_ = std::move(my_den);
  return *this;
}

RatFunc& RatFunc::operator/=(const RatFunc& other) { return *this *= other.inverse(); }

RatFunc RatFunc::inverse() const {
  if (is_zero()) throw SingularError("division by the zero rational function");
  int n = nvars();
  RatFunc r(expand(den_, n) * (1 / num_.content()));
  std::vector<DenFactor> den;
  for (auto& [factor, mult] : squarefree_decomposition(num_)) den.push_back({std::move(factor), mult});
  r.set_denominator(std::move(den));
  return r;
}

bool operator==(const RatFunc& a, const RatFunc& b) {
  if (a.nvars() != b.nvars()) return false;
  if (a.den_ == b.den_) return a.num_ == b.num_;
  return (a - b).is_zero();
}

RatFunc RatFunc::pow(unsigned exponent) const {
  RatFunc result(nvars(), Rational(1));
  RatFunc base = *this;
  while (exponent > 0) {
    if (exponent & 1U) result *= base;
    exponent >>= 1U;
    if (exponent > 0) base *= base;
  }
  return result;
}

RatFunc RatFunc::diff(int var) const {
  if (den_.empty()) return RatFunc(num_.diff(var));
  int n = nvars();
  // d(N/D) = (N' P - N sum_i e_i p_i' P/p_i) / (D P), P = product of the
  // bases that depend on var.
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < den_.size(); ++i) {
    if (den_[i].base.depends_on(var)) active.push_back(i);
  }
  if (active.empty()) {
    RatFunc r = *this;
    r.num_ = num_.diff(var);
    r.reduce();
    return r;
  }
  MultiPoly product(n, Rational(1));
  for (auto i : active) product *= den_[i].base;
  MultiPoly top = num_.diff(var) * product;
  for (auto i : active) {
    MultiPoly others(n, Rational(1));
    for (auto j : active) {
      if (j != i) others *= den_[j].base;
    }
    top -= num_ * den_[i].base.diff(var) * others * Rational(den_[i].exponent);
  }
  RatFunc r(std::move(top));
  std::vector<DenFactor> den = den_;
  for (auto i : active) ++den[i].exponent;
  r.den_ = std::move(den);
  r.reduce();
  return r;
}

RatFunc RatFunc::normalized() const {
  RatFunc r = *this;
  if (r.is_zero()) return r;
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<DenFactor> split;
    for (const auto& f : r.den_) {
      MultiPoly g = gcd(r.num_, f.base);
      if (g.is_constant() || g == f.base) {
        split.push_back(f);
        continue;
      }
      auto rest = f.base.divide_exact(g);
      if (!rest) throw InternalIdentityError("gcd does not divide its argument");
      split.push_back({g, f.exponent});
      split.push_back({rest->primitive(), f.exponent});
      changed = true;
    }
    r.set_denominator(std::move(split));
  }
  return r;
}

RatFunc RatFunc::embed(int nvars, int offset) const {
  RatFunc r(num_.embed(nvars, offset));
  std::vector<DenFactor> den;
  for (const auto& f : den_) den.push_back({f.base.embed(nvars, offset), f.exponent});
  sort_and_merge(den);
  r.den_ = std::move(den);
  return r;
}

Rational RatFunc::evaluate(std::span<const Rational> point) const {
  return evaluate_ratfunc(num_, den_, point, RationalField{});
}
double RatFunc::evaluate(std::span<const double> point) const {
  return evaluate_ratfunc(num_, den_, point, RealField{});
}
Complex RatFunc::evaluate(std::span<const Complex> point) const {
  return evaluate_ratfunc(num_, den_, point, ComplexField{});
}
std::uint64_t RatFunc::evaluate_mod(std::span<const std::uint64_t> point, std::uint64_t p) const {
  return evaluate_ratfunc(num_, den_, point, PrimeField(p));
}

std::string RatFunc::to_string(std::span<const std::string> names) const {
  if (den_.empty()) return num_.to_string(names);
  std::string den;
  for (const auto& f : den_) {
    if (!den.empty()) den += "*";
    den += "(" + f.base.to_string(names) + ")";
    if (f.exponent > 1) den += "^" + std::to_string(f.exponent);
  }
  return "(" + num_.to_string(names) + ")/(" + den + ")";
}

std::string RatFunc::to_string() const { return to_string(default_names(nvars())); }

RatFunc compose(const MultiPoly& f, std::span<const RatFunc> values) {
  if (static_cast<int>(values.size()) != f.nvars()) {
    throw IndexError("composition needs " + std::to_string(f.nvars()) + " values");
  }
  int target = values.empty() ? 0 : values[0].nvars();
  std::vector<std::vector<RatFunc>> powers(f.nvars());
  for (int v = 0; v < f.nvars(); ++v) {
    powers[v].push_back(RatFunc(target, Rational(1)));
    for (int k = 1; k <= f.degree_in(v); ++k) powers[v].push_back(powers[v].back() * values[v]);
  }
  RatFunc result(target);
  for (const auto& [m, c] : f.terms()) {
    RatFunc term(target, c);
    for (int v = 0; v < f.nvars(); ++v) {
      if (m.e[v] != 0) term *= powers[v][m.e[v]];
    }
    result += term;
  }
  return result;
}

}  // namespace ccc
