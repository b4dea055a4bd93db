#include "ccc/report.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace ccc {

std::string to_string(EvalMode mode) {
  switch (mode) {
    case EvalMode::Rational:
      return "rational";
    case EvalMode::Float:
      return "float";
    case EvalMode::ModP:
      return "modp";
  }
  return "?";
}

EvalMode parse_eval_mode(const std::string& text) {
  if (text == "rational") return EvalMode::Rational;
  if (text == "float") return EvalMode::Float;
  if (text == "modp") return EvalMode::ModP;
  throw ConfigError("unknown backend '" + text + "' (expected modp, float or rational)");
}

bool Report::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::vector<Rational> sample_rational_point(int nvars, std::uint64_t seed, std::uint64_t index, int attempt) {
  std::mt19937_64 rng(splitmix64(seed ^ splitmix64(index * 1000003ULL + static_cast<std::uint64_t>(attempt))));
  std::uniform_int_distribution<int> num(-10, 10);
  std::uniform_int_distribution<int> den(1, 10);
  std::vector<Rational> p(nvars);
  for (auto& x : p) x = make_rational(num(rng), den(rng));
  return p;
}

namespace {

constexpr int kMaxAttempts = 200;

}  // namespace

CheckResult check_identity(std::string name, std::span<const RatFunc> lhs, std::span<const RatFunc> rhs,
                           const SampleConfig& cfg) {
  CheckResult out;
  out.name = std::move(name);
  if (lhs.size() != rhs.size()) {
    out.detail = "size mismatch";
    return out;
  }
  out.symbolic = true;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    if (!(lhs[i] == rhs[i])) {
      out.symbolic = false;
      out.detail = "component " + std::to_string(i) + " differs symbolically";
      break;
    }
  }
  int nvars = lhs.empty() ? 0 : lhs[0].nvars();
  bool pointwise = true;
  for (int s = 0; s < cfg.count && !lhs.empty(); ++s) {
    bool done = false;
    for (int attempt = 0; attempt < kMaxAttempts && !done; ++attempt) {
      auto point = sample_rational_point(nvars, cfg.seed, static_cast<std::uint64_t>(s), attempt);
      try {
        double worst = 0.0;
        for (std::size_t i = 0; i < lhs.size(); ++i) {
          if (cfg.mode == EvalMode::Rational) {
            Rational diff = lhs[i].evaluate(point) - rhs[i].evaluate(point);
            worst = std::max(worst, std::abs(diff.get_d()));
            if (sgn(diff) != 0) pointwise = false;
          } else if (cfg.mode == EvalMode::Float) {
            std::vector<double> pd(point.size());
            for (std::size_t k = 0; k < point.size(); ++k) pd[k] = point[k].get_d();
            double a = lhs[i].evaluate(std::span<const double>(pd));
            double b = rhs[i].evaluate(std::span<const double>(pd));
            double r = std::abs(a - b) / std::max(1.0, std::abs(b));
            worst = std::max(worst, r);
            if (!(r <= cfg.tol)) pointwise = false;
          } else {
            std::vector<std::uint64_t> pm(point.size());
            for (std::size_t k = 0; k < point.size(); ++k) pm[k] = modp::from_rational(point[k], cfg.prime);
            if (lhs[i].evaluate_mod(pm, cfg.prime) != rhs[i].evaluate_mod(pm, cfg.prime)) {
              pointwise = false;
              worst = std::max(worst, 1.0);
            }
          }
        }
        out.max_residual = std::max(out.max_residual, worst);
        ++out.samples;
        done = true;
      } catch (const PoleError&) {
      } catch (const BadPrimeError&) {
      }
    }
    if (!done) {
      pointwise = false;
      out.detail = "no admissible sample point found for sample " + std::to_string(s);
      break;
    }
  }
  out.passed = out.symbolic && pointwise;
  if (out.passed) out.detail = "identity holds";
  return out;
}

CheckResult check_zero(std::string name, std::span<const RatFunc> values, const SampleConfig& cfg) {
  std::vector<RatFunc> zeros;
  zeros.reserve(values.size());
  for (const auto& v : values) zeros.emplace_back(v.nvars());
  return check_identity(std::move(name), values, zeros, cfg);
}

}  // namespace ccc
