#include "ccc/models.hpp"

#include <random>

#include "ccc/errors.hpp"
#include "ccc/parse.hpp"
#include "ccc/report.hpp"

namespace ccc {

Coframe coframe_from_strings(const std::vector<std::vector<std::string>>& rows, const Chart& chart) {
  const int n = chart.n;
  if (static_cast<int>(rows.size()) != n) throw DimensionError("coframe needs " + std::to_string(n) + " rows");
  RatMatrix a(n, n, RatFunc(n));
  for (int r = 0; r < n; ++r) {
    if (static_cast<int>(rows[r].size()) != n) {
      throw DimensionError("coframe row " + std::to_string(r + 1) + " needs " + std::to_string(n) + " entries");
    }
    for (int c = 0; c < n; ++c) a(r, c) = parse_ratfunc(rows[r][c], chart.variables);
  }
  return Coframe(chart, std::move(a));
}

Coframe coframe_from_strings(const std::vector<std::vector<std::string>>& rows) {
  return coframe_from_strings(rows, Chart::standard(static_cast<int>(rows.size())));
}

Coframe model_flat(int n) { return Coframe(Chart::standard(n), identity_matrix(n, n)); }

Coframe model_rescaled(const RatFunc& s, const Chart& chart) {
  const int n = chart.n;
  RatMatrix a(n, n, RatFunc(n));
  for (int i = 0; i < n; ++i) a(i, i) = s;
  return Coframe(chart, std::move(a));
}

Coframe model_rescaled(const std::string& s, int n) {
  Chart chart = Chart::standard(n);
  return model_rescaled(parse_ratfunc(s, chart.variables), chart);
}

Coframe model_twisted(const RatMatrix& a, const Chart& chart) { return Coframe(chart, a); }

Coframe model_twisted_default(int n) {
  RatMatrix a = identity_matrix(n, n);
  a(1, 2) = RatFunc::variable(n, 0);
  return Coframe(Chart::standard(n), std::move(a));
}

Coframe model_heisenberg(int n) {
  RatMatrix a = identity_matrix(n, n);
  a(2, 1) = RatFunc::variable(n, 0);
  return Coframe(Chart::standard(n), std::move(a));
}

Coframe random_polynomial_coframe(int n, int degree, std::uint64_t seed) {
  std::mt19937_64 rng(splitmix64(seed ^ 0xC0F4A3EULL));
  std::uniform_int_distribution<int> num(-3, 3), den(1, 3), deg(1, degree), var(0, n - 1);
  std::bernoulli_distribution keep(0.5);
  RatMatrix a = identity_matrix(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      if (!keep(rng)) continue;
      std::vector<MultiPoly::Term> terms;
      for (int t = 0; t < 3; ++t) {
        Monomial m;
        const int d = deg(rng);
        for (int k = 0; k < d; ++k) ++m.e[var(rng)];
        terms.emplace_back(m, make_rational(num(rng), den(rng)));
      }
      a(r, c) += RatFunc(MultiPoly::from_terms(n, std::move(terms)));
    }
  }
  return Coframe(Chart::standard(n), std::move(a));
}

Hypersurface fermat_hypersurface(int n, int degree) {
  MultiPoly f(n);
  for (int i = 0; i < n; ++i) f += MultiPoly::variable(n, i).pow(static_cast<unsigned>(degree));
  return Hypersurface(std::move(f));
}

}  // namespace ccc
