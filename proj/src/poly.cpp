#include "ccc/poly.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <unordered_map>

namespace ccc {

// ----------------------------------------------------------------- Monomial

int Monomial::degree() const {
  int d = 0;
  for (auto x : e) d += x;
  return d;
}

bool Monomial::divides(const Monomial& other) const {
  for (int i = 0; i < kMaxVars; ++i) {
    if (e[i] > other.e[i]) return false;
  }
  return true;
}

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial r;
  for (int i = 0; i < kMaxVars; ++i) {
    int s = int(e[i]) + int(other.e[i]);
    if (s > 255) throw SizeLimitError("exponent overflow (per-variable degree > 255)");
    r.e[i] = static_cast<std::uint8_t>(s);
  }
  return r;
}

Monomial Monomial::quotient(const Monomial& divisor) const {
  Monomial r;
  for (int i = 0; i < kMaxVars; ++i) r.e[i] = static_cast<std::uint8_t>(e[i] - divisor.e[i]);
  return r;
}

std::size_t MonomialHash::operator()(const Monomial& m) const noexcept {
  std::uint64_t a, b;
  std::memcpy(&a, m.e.data(), 8);
  std::memcpy(&b, m.e.data() + 8, 8);
  std::uint64_t h = a * 0x9E3779B97F4A7C15ULL ^ (b + 0x7F4A7C159E3779B9ULL + (a << 6) + (a >> 2));
  return static_cast<std::size_t>(h ^ (h >> 31));
}

// --------------------------------------------------------------- size guard

namespace {

std::size_t initial_max_terms() {
  if (const char* env = std::getenv("CCC_MAX_TERMS")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  return 100000;
}

std::atomic<std::size_t>& max_terms_slot() {
  static std::atomic<std::size_t> slot{initial_max_terms()};
  return slot;
}

bool lex_greater(const MultiPoly::Term& a, const MultiPoly::Term& b) { return a.first > b.first; }

}  // namespace

std::size_t max_terms() { return max_terms_slot().load(std::memory_order_relaxed); }
void set_max_terms(std::size_t bound) { max_terms_slot().store(bound, std::memory_order_relaxed); }

// ---------------------------------------------------------------- MultiPoly

MultiPoly::MultiPoly(int nvars) : nvars_(nvars) {
  if (nvars < 0 || nvars > kMaxVars) {
    throw IndexError("number of variables must be in [0, " + std::to_string(kMaxVars) + "]");
  }
}

MultiPoly::MultiPoly(int nvars, const Rational& c) : MultiPoly(nvars) {
  if (sgn(c) != 0) terms_.emplace_back(Monomial{}, c);
}

MultiPoly MultiPoly::variable(int nvars, int index) {
  if (index < 0 || index >= nvars) throw IndexError("variable index " + std::to_string(index) + " out of range");
  MultiPoly p(nvars);
  Monomial m;
  m.e[index] = 1;
  p.terms_.emplace_back(m, Rational(1));
  return p;
}

MultiPoly MultiPoly::monomial(int nvars, const Monomial& m, const Rational& c) {
  MultiPoly p(nvars);
  if (sgn(c) != 0) p.terms_.emplace_back(m, c);
  return p;
}

MultiPoly MultiPoly::from_terms(int nvars, std::vector<Term> terms) {
  MultiPoly p(nvars);
  std::sort(terms.begin(), terms.end(), lex_greater);
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().first == t.first) {
      p.terms_.back().second += t.second;
    } else {
      if (!p.terms_.empty() && sgn(p.terms_.back().second) == 0) p.terms_.pop_back();
      p.terms_.push_back(std::move(t));
    }
  }
  if (!p.terms_.empty() && sgn(p.terms_.back().second) == 0) p.terms_.pop_back();
  p.check_size();
  return p;
}

bool MultiPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].first == Monomial{});
}

Rational MultiPoly::constant_term() const {
  if (!terms_.empty() && terms_.back().first == Monomial{}) return terms_.back().second;
  return 0;
}

int MultiPoly::total_degree() const {
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, t.first.degree());
  return terms_.empty() ? -1 : d;
}

int MultiPoly::degree_in(int var) const {
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, int(t.first.e[var]));
  return d;
}

bool MultiPoly::is_homogeneous() const {
  if (terms_.empty()) return true;
  int d = terms_.front().first.degree();
  return std::all_of(terms_.begin(), terms_.end(), [d](const Term& t) { return t.first.degree() == d; });
}

void MultiPoly::check_ring(const MultiPoly& other) const {
  if (nvars_ != other.nvars_) {
    throw IndexError("polynomial ring mismatch: " + std::to_string(nvars_) + " vs " +
                     std::to_string(other.nvars_) + " variables");
  }
}

void MultiPoly::check_size() const {
  if (terms_.size() > max_terms()) {
    throw SizeLimitError("polynomial with " + std::to_string(terms_.size()) +
                         " terms exceeds the term bound " + std::to_string(max_terms()));
  }
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly r = *this;
  for (auto& t : r.terms_) t.second = -t.second;
  return r;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& other) {
  check_ring(other);
  if (other.terms_.empty()) return *this;
  std::vector<Term> merged;
  merged.reserve(terms_.size() + other.terms_.size());
  auto a = terms_.begin();
  auto b = other.terms_.begin();
  while (a != terms_.end() || b != other.terms_.end()) {
    if (b == other.terms_.end() || (a != terms_.end() && a->first > b->first)) {
      merged.push_back(std::move(*a++));
    } else if (a == terms_.end() || b->first > a->first) {
      merged.push_back(*b++);
    } else {
      Rational s = a->second + b->second;
      if (sgn(s) != 0) merged.emplace_back(a->first, std::move(s));
      ++a;
      ++b;
    }
  }
  terms_ = std::move(merged);
  check_size();
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& other) { return *this += -other; }

MultiPoly& MultiPoly::operator*=(const MultiPoly& other) {
  *this = *this * other;
  return *this;
}

MultiPoly& MultiPoly::operator*=(const Rational& c) {
  if (sgn(c) == 0) {
    terms_.clear();
  } else {
    for (auto& t : terms_) t.second *= c;
  }
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  a.check_ring(b);
  MultiPoly r(a.nvars_);
  if (a.terms_.empty() || b.terms_.empty()) return r;
  if (b.terms_.size() == 1) {
    const auto& [m, c] = b.terms_[0];
    r.terms_.reserve(a.terms_.size());
    for (const auto& t : a.terms_) r.terms_.emplace_back(t.first * m, t.second * c);
    return r;
  }
  if (a.terms_.size() == 1) return b * a;
  std::unordered_map<Monomial, Rational, MonomialHash> acc;
  acc.reserve(a.terms_.size() * b.terms_.size());
  Rational prod;
  for (const auto& ta : a.terms_) {
    for (const auto& tb : b.terms_) {
      prod = ta.second * tb.second;
      auto [it, inserted] = acc.try_emplace(ta.first * tb.first, prod);
      if (!inserted) it->second += prod;
    }
  }
  r.terms_.reserve(acc.size());
  for (auto& [m, c] : acc) {
    if (sgn(c) != 0) r.terms_.emplace_back(m, std::move(c));
  }
  std::sort(r.terms_.begin(), r.terms_.end(), lex_greater);
  r.check_size();
  return r;
}

bool operator==(const MultiPoly& a, const MultiPoly& b) {
  return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
}

MultiPoly MultiPoly::pow(unsigned exponent) const {
  MultiPoly result(nvars_, Rational(1));
  MultiPoly base = *this;
  while (exponent > 0) {
    if (exponent & 1U) result *= base;
    exponent >>= 1U;
    if (exponent > 0) base = base * base;
  }
  return result;
}

MultiPoly MultiPoly::diff(int var) const {
  if (var < 0 || var >= nvars_) {
    throw IndexError("derivative index " + std::to_string(var) + " out of range for " +
                     std::to_string(nvars_) + " variables");
  }
  MultiPoly r(nvars_);
  for (const auto& [m, c] : terms_) {
    if (m.e[var] == 0) continue;
    Monomial dm = m;
    --dm.e[var];
    r.terms_.emplace_back(dm, c * m.e[var]);
  }
  // Decrementing the same exponent keeps lex order.
  return r;
}

std::optional<MultiPoly> MultiPoly::divide_exact(const MultiPoly& divisor) const {
  check_ring(divisor);
  if (divisor.is_zero()) throw SingularError("division by the zero polynomial");
  if (is_zero()) return MultiPoly(nvars_);
  if (divisor.terms_.size() == 1) {
    auto q = divide_exact(divisor.terms_[0].first);
    if (q) *q *= 1 / divisor.terms_[0].second;
    return q;
  }
  const auto& [lm, lc] = divisor.leading();
  // Quick degree rejection.
  for (int v = 0; v < nvars_; ++v) {
    if (divisor.degree_in(v) > degree_in(v)) return std::nullopt;
  }
  if (divisor.total_degree() > total_degree()) return std::nullopt;
  MultiPoly remainder = *this;
  std::vector<Term> quotient;
  Rational inv_lc = 1 / lc;
  while (!remainder.is_zero()) {
    const auto& [rm, rc] = remainder.leading();
    if (!lm.divides(rm)) return std::nullopt;
    Term t{rm.quotient(lm), rc * inv_lc};
    remainder -= MultiPoly::monomial(nvars_, t.first, t.second) * divisor;
    quotient.push_back(std::move(t));
  }
  return from_terms(nvars_, std::move(quotient));
}

std::optional<MultiPoly> MultiPoly::divide_exact(const Monomial& m) const {
  MultiPoly r(nvars_);
  r.terms_.reserve(terms_.size());
  for (const auto& [tm, c] : terms_) {
    if (!m.divides(tm)) return std::nullopt;
    r.terms_.emplace_back(tm.quotient(m), c);
  }
  return r;
}

Rational MultiPoly::content() const {
  if (terms_.empty()) return 0;
  Integer num_gcd = 0;
  Integer den_lcm = 1;
  for (const auto& [m, c] : terms_) {
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num_mpz_t());
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
  }
  Rational r(num_gcd, den_lcm);
  r.canonicalize();
  if (sgn(terms_.front().second) < 0) r = -r;
  return r;
}

MultiPoly MultiPoly::primitive() const {
  if (terms_.empty()) return *this;
  return *this * (1 / content());
}

Monomial MultiPoly::monomial_gcd() const {
  if (terms_.empty()) return {};
  Monomial g = terms_.front().first;
  for (const auto& [m, c] : terms_) {
    for (int i = 0; i < kMaxVars; ++i) g.e[i] = std::min(g.e[i], m.e[i]);
  }
  return g;
}

std::vector<MultiPoly> MultiPoly::coefficients_in(int var) const {
  std::vector<std::vector<Term>> buckets(degree_in(var) + 1);
  for (const auto& [m, c] : terms_) {
    Monomial rest = m;
    rest.e[var] = 0;
    buckets[m.e[var]].emplace_back(rest, c);
  }
  std::vector<MultiPoly> out;
  out.reserve(buckets.size());
  for (auto& b : buckets) out.push_back(from_terms(nvars_, std::move(b)));
  if (terms_.empty()) out.assign(1, MultiPoly(nvars_));
  return out;
}

MultiPoly MultiPoly::substitute(std::span<const MultiPoly> values) const {
  if (static_cast<int>(values.size()) != nvars_) {
    throw IndexError("substitution needs " + std::to_string(nvars_) + " values");
  }
  int target = values.empty() ? 0 : values[0].nvars();
  std::vector<std::vector<MultiPoly>> powers(nvars_);
  for (int v = 0; v < nvars_; ++v) {
    values[v].check_ring(values[0]);
    powers[v].push_back(MultiPoly(target, Rational(1)));
    for (int k = 1; k <= degree_in(v); ++k) powers[v].push_back(powers[v].back() * values[v]);
  }
  MultiPoly result(target);
  for (const auto& [m, c] : terms_) {
    MultiPoly term(target, c);
    for (int v = 0; v < nvars_; ++v) {
      if (m.e[v] != 0) term *= powers[v][m.e[v]];
    }
    result += term;
  }
  return result;
}

MultiPoly MultiPoly::embed(int nvars, int offset) const {
  if (offset < 0 || offset + nvars_ > nvars) throw IndexError("embedding does not fit the target ring");
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& [m, c] : terms_) {
    Monomial shifted;
    for (int v = 0; v < nvars_; ++v) shifted.e[v + offset] = m.e[v];
    out.emplace_back(shifted, c);
  }
  return from_terms(nvars, std::move(out));
}

Rational MultiPoly::evaluate(std::span<const Rational> point) const {
  return evaluate<RationalField>(point, RationalField{});
}
double MultiPoly::evaluate(std::span<const double> point) const {
  return evaluate<RealField>(point, RealField{});
}
Complex MultiPoly::evaluate(std::span<const Complex> point) const {
  return evaluate<ComplexField>(point, ComplexField{});
}
std::uint64_t MultiPoly::evaluate_mod(std::span<const std::uint64_t> point, std::uint64_t p) const {
  return evaluate<PrimeField>(point, PrimeField(p));
}

std::vector<std::string> default_names(int nvars, const std::string& prefix) {
  std::vector<std::string> names;
  for (int i = 0; i < nvars; ++i) names.push_back(prefix + std::to_string(i + 1));
  return names;
}

std::string MultiPoly::to_string(std::span<const std::string> names) const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Rational mag = abs(c);
    if (sgn(c) < 0) {
      out += first ? "-" : " - ";
    } else if (!first) {
      out += " + ";
    }
    first = false;
    std::string factors;
    for (int v = 0; v < nvars_; ++v) {
      if (m.e[v] == 0) continue;
      if (!factors.empty()) factors += "*";
      factors += names[v];
      if (m.e[v] > 1) factors += "^" + std::to_string(m.e[v]);
    }
    if (factors.empty()) {
      out += mag.get_str();
    } else if (mag == 1) {
      out += factors;
    } else {
      out += mag.get_str() + "*" + factors;
    }
  }
  return out;
}

std::string MultiPoly::to_string() const { return to_string(default_names(nvars_)); }

// ---------------------------------------------------------------------- gcd

namespace {

MultiPoly leading_coefficient_in(const MultiPoly& p, int var) { return p.coefficients_in(var).back(); }

MultiPoly content_in(const MultiPoly& p, int var) {
  MultiPoly g(p.nvars());
  for (const auto& c : p.coefficients_in(var)) {
    if (c.is_zero()) continue;
    g = gcd(g, c);
    if (g.is_constant()) break;
  }
  return g;
}

MultiPoly exact(const std::optional<MultiPoly>& q, const char* where) {
  if (!q) throw InternalIdentityError(std::string("inexact division in ") + where);
  return *q;
}

// Pseudo-remainder of a by b with respect to var.
MultiPoly pseudo_remainder(MultiPoly a, const MultiPoly& b, int var) {
  int db = b.degree_in(var);
  MultiPoly lcb = leading_coefficient_in(b, var);
  while (!a.is_zero() && a.degree_in(var) >= db) {
    int da = a.degree_in(var);
    MultiPoly lca = leading_coefficient_in(a, var);
    Monomial shift;
    shift.e[var] = static_cast<std::uint8_t>(da - db);
    a = lcb * a - lca * MultiPoly::monomial(a.nvars(), shift, 1) * b;
  }
  return a;
}

int pick_variable(const MultiPoly& a, const MultiPoly& b) {
  int best = -1, best_deg = 0;
  for (int v = 0; v < a.nvars(); ++v) {
    int d = std::max(a.degree_in(v), b.degree_in(v));
    if (d > best_deg) {
      best = v;
      best_deg = d;
    }
  }
  return best;
}

}  // namespace

namespace {

constexpr std::uint64_t kSpecialPrime = 2305843009213693951ULL;  // 2^61 - 1

std::vector<std::uint64_t> specialization_point(int n, std::uint64_t seed) {
  std::vector<std::uint64_t> point(n);
  std::uint64_t state = 0x243F6A8885A308D3ULL ^ (seed * 0x9E3779B97F4A7C15ULL);
  for (int v = 0; v < n; ++v) {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    point[v] = state % kSpecialPrime;
  }
  return point;
}

// Image of q in (Z/p)[var] after substituting `point` for the other
// variables. False when a coefficient denominator vanishes mod p.
bool specialize(const MultiPoly& q, int var, const std::vector<std::uint64_t>& point,
                std::vector<std::uint64_t>& out) {
  const std::uint64_t p = kSpecialPrime;
  out.assign(q.degree_in(var) + 1, 0);
  for (const auto& [m, c] : q.terms()) {
    if (mpz_fdiv_ui(c.get_den_mpz_t(), p) == 0) return false;
    std::uint64_t t = modp::from_rational(c, p);
    for (int v = 0; v < q.nvars(); ++v) {
      if (v != var && m.e[v] != 0) t = modp::mul(t, modp::pow(point[v], m.e[v], p), p);
    }
    out[m.e[var]] = modp::add(out[m.e[var]], t, p);
  }
  while (!out.empty() && out.back() == 0) out.pop_back();
  return true;
}

std::vector<std::uint64_t> upoly_rem(std::vector<std::uint64_t> a, const std::vector<std::uint64_t>& b) {
  const std::uint64_t p = kSpecialPrime;
  std::uint64_t lead_inv = modp::inv(b.back(), p);
  while (a.size() >= b.size()) {
    std::uint64_t factor = modp::mul(a.back(), lead_inv, p);
    std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = modp::sub(a[shift + i], modp::mul(factor, b[i], p), p);
    while (!a.empty() && a.back() == 0) a.pop_back();
  }
  return a;
}

int upoly_gcd_degree(std::vector<std::uint64_t> a, std::vector<std::uint64_t> b) {
  while (!b.empty()) {
    auto r = upoly_rem(std::move(a), b);
    a = std::move(b);
    b = std::move(r);
  }
  return static_cast<int>(a.size()) - 1;
}

// Upper bound for deg_var gcd(a, b), or -1 if no specialization kept both
// leading coefficients. Since gcd(a, b) divides a, a nonvanishing leading
// coefficient of a at the point keeps the degree of the gcd's image, which
// divides the gcd of the images.
int gcd_degree_bound(const MultiPoly& a, const MultiPoly& b, int var) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto point = specialization_point(a.nvars(), seed);
    std::vector<std::uint64_t> ia, ib;
    if (!specialize(a, var, point, ia) || !specialize(b, var, point, ib)) continue;
    if (static_cast<int>(ia.size()) - 1 != a.degree_in(var)) continue;
    if (static_cast<int>(ib.size()) - 1 != b.degree_in(var)) continue;
    return upoly_gcd_degree(std::move(ia), std::move(ib));
  }
  return -1;
}

}  // namespace

MultiPoly gcd(const MultiPoly& a, const MultiPoly& b) {
  if (a.nvars() != b.nvars()) throw IndexError("gcd of polynomials from different rings");
  if (a.is_zero()) return b.primitive();
  if (b.is_zero()) return a.primitive();
  int n = a.nvars();
  if (a.is_constant() || b.is_constant()) return MultiPoly(n, Rational(1));
  // Pull out common monomial factors first; they are cheap and frequent.
  Monomial ma = a.monomial_gcd(), mb = b.monomial_gcd(), mg;
  for (int i = 0; i < kMaxVars; ++i) mg.e[i] = std::min(ma.e[i], mb.e[i]);
  if (mg != Monomial{}) {
    return (gcd(exact(a.divide_exact(mg), "gcd"), exact(b.divide_exact(mg), "gcd")) *
            MultiPoly::monomial(n, mg, 1))
        .primitive();
  }
  // Variables the gcd provably does not involve reduce the problem to
  // contents, which are smaller.
  for (int v = 0; v < n; ++v) {
    bool da = a.depends_on(v), db = b.depends_on(v);
    if (!da && !db) continue;
    if (da && db && gcd_degree_bound(a, b, v) != 0) continue;
    MultiPoly ca = da ? content_in(a, v) : a;
    MultiPoly cb = db ? content_in(b, v) : b;
    return gcd(ca, cb);
  }
  int var = pick_variable(a, b);
  // A candidate whose degree matches the bound is the gcd if it divides the other.
  {
    const MultiPoly& small = a.degree_in(var) <= b.degree_in(var) ? a : b;
    const MultiPoly& large = a.degree_in(var) <= b.degree_in(var) ? b : a;
    if (gcd_degree_bound(large, small, var) == small.degree_in(var) && maybe_divides(small, large) &&
        large.divide_exact(small)) {
      return small.primitive();
    }
  }

  MultiPoly ca = content_in(a, var), cb = content_in(b, var);
  MultiPoly r0 = exact(a.divide_exact(ca), "gcd").primitive();
  MultiPoly r1 = exact(b.divide_exact(cb), "gcd").primitive();
  MultiPoly c = gcd(ca, cb);
  if (r0.degree_in(var) < r1.degree_in(var)) std::swap(r0, r1);
  while (true) {
    MultiPoly r = pseudo_remainder(r0, r1, var);
    if (r.is_zero()) break;
    if (!r.depends_on(var)) {
      r1 = MultiPoly(n, Rational(1));
      break;
    }
    r = exact(r.divide_exact(content_in(r, var)), "gcd").primitive();
    r0 = std::move(r1);
    r1 = std::move(r);
  }
  MultiPoly g = exact(r1.divide_exact(content_in(r1, var)), "gcd");
  return (c * g).primitive();
}

std::vector<std::pair<MultiPoly, int>> squarefree_decomposition(const MultiPoly& a) {
  std::vector<std::pair<MultiPoly, int>> out;
  if (a.is_constant()) return out;
  int n = a.nvars();
  auto add = [&](const MultiPoly& f, int m) {
    if (f.is_constant()) return;
    MultiPoly pf = f.primitive();
    for (auto& e : out) {
      if (e.first == pf) {
        e.second += m;
        return;
      }
    }
    out.emplace_back(pf, m);
  };
  Monomial mono = a.monomial_gcd();
  for (int v = 0; v < n; ++v) {
    if (mono.e[v] > 0) add(MultiPoly::variable(n, v), mono.e[v]);
  }
  MultiPoly rest = exact(a.divide_exact(mono), "squarefree").primitive();
  // Yun's algorithm with respect to one variable at a time; the content in
  // that variable is decomposed recursively.
  for (int v = 0; v < n && !rest.is_constant(); ++v) {
    if (!rest.depends_on(v)) continue;
    MultiPoly cont = content_in(rest, v);
    MultiPoly f = exact(rest.divide_exact(cont), "squarefree");
    MultiPoly fd = f.diff(v);
    MultiPoly g = gcd(f, fd);
    MultiPoly b = exact(f.divide_exact(g), "squarefree");
    MultiPoly c = exact(fd.divide_exact(g), "squarefree");
    MultiPoly d = c - b.diff(v);
    for (int i = 1; !b.is_constant(); ++i) {
      MultiPoly ai = gcd(b, d);
      add(ai, i);
      MultiPoly nb = exact(b.divide_exact(ai), "squarefree");
      c = exact(d.divide_exact(ai), "squarefree");
      b = std::move(nb);
      d = c - b.diff(v);
    }
    rest = cont;
  }
  return out;
}

bool maybe_divides(const MultiPoly& divisor, const MultiPoly& poly) {
  if (divisor.is_constant() || poly.is_zero()) return true;
  int var = 0;
  while (!divisor.depends_on(var)) ++var;
  auto point = specialization_point(poly.nvars(), 0);
  std::vector<std::uint64_t> a, b;
  if (!specialize(poly, var, point, a) || !specialize(divisor, var, point, b)) return true;
  if (b.size() <= 1) return true;
  return upoly_rem(std::move(a), b).empty();
}

// ----------------------------------------------------------------- PolyModP

PolyModP PolyModP::from_terms(int nvars, std::uint64_t p, std::vector<Term> terms) {
  PolyModP r(nvars, p);
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.first > b.first; });
  for (auto& t : terms) {
    if (!r.terms_.empty() && r.terms_.back().first == t.first) {
      r.terms_.back().second = modp::add(r.terms_.back().second, t.second, p);
    } else {
      if (!r.terms_.empty() && r.terms_.back().second == 0) r.terms_.pop_back();
      r.terms_.push_back(t);
    }
  }
  if (!r.terms_.empty() && r.terms_.back().second == 0) r.terms_.pop_back();
  return r;
}

PolyModP PolyModP::operator+(const PolyModP& other) const {
  std::vector<Term> all = terms_;
  all.insert(all.end(), other.terms_.begin(), other.terms_.end());
  return from_terms(nvars_, p_, std::move(all));
}

PolyModP PolyModP::operator*(const PolyModP& other) const {
  std::vector<Term> all;
  all.reserve(terms_.size() * other.terms_.size());
  for (const auto& a : terms_) {
    for (const auto& b : other.terms_) all.emplace_back(a.first * b.first, modp::mul(a.second, b.second, p_));
  }
  return from_terms(nvars_, p_, std::move(all));
}

PolyModP PolyModP::diff(int var) const {
  if (var < 0 || var >= nvars_) throw IndexError("derivative index out of range");
  std::vector<Term> out;
  for (const auto& [m, c] : terms_) {
    if (m.e[var] == 0) continue;
    Monomial dm = m;
    --dm.e[var];
    out.emplace_back(dm, modp::mul(c, m.e[var] % p_, p_));
  }
  return from_terms(nvars_, p_, std::move(out));
}

std::uint64_t PolyModP::evaluate(std::span<const std::uint64_t> point) const {
  if (static_cast<int>(point.size()) != nvars_) throw IndexError("evaluation point has wrong length");
  std::uint64_t total = 0;
  for (const auto& [m, c] : terms_) {
    std::uint64_t t = c;
    for (int v = 0; v < nvars_; ++v) {
      if (m.e[v] != 0) t = modp::mul(t, modp::pow(point[v], m.e[v], p_), p_);
    }
    total = modp::add(total, t, p_);
  }
  return total;
}

PolyModP reduce_mod_prime(const MultiPoly& poly, std::uint64_t p) {
  std::vector<PolyModP::Term> out;
  out.reserve(poly.size());
  for (const auto& [m, c] : poly.terms()) out.emplace_back(m, modp::from_rational(c, p));
  return PolyModP::from_terms(poly.nvars(), p, std::move(out));
}

}  // namespace ccc
