#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ccc/ratfunc.hpp"

namespace ccc {

enum class EvalMode { Rational, Float, ModP };
std::string to_string(EvalMode mode);
EvalMode parse_eval_mode(const std::string& text);

// Pointwise verification settings. Sample i is drawn from its own stream
// seeded by (seed, i), so results do not depend on evaluation order.
struct SampleConfig {
  std::uint64_t seed = 1;
  int count = 20;
  EvalMode mode = EvalMode::Rational;
  double tol = 1e-8;
  std::uint64_t prime = 2147483647ULL;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  bool symbolic = false;  // identity verified as rational functions
  int samples = 0;
  double max_residual = 0.0;
  std::string detail;
};

struct Report {
  std::string title;
  std::uint64_t seed = 0;
  std::string mode;
  std::vector<CheckResult> checks;

  bool passed() const;
  void add(CheckResult r) { checks.push_back(std::move(r)); }
};

std::uint64_t splitmix64(std::uint64_t x);

// Small rationals a/b with |a| <= 10 and 1 <= b <= 10.
std::vector<Rational> sample_rational_point(int nvars, std::uint64_t seed, std::uint64_t index, int attempt);

// lhs[i] == rhs[i] exactly as rational functions, then at cfg.count
// sample points in cfg.mode. Samples landing on a pole are redrawn.
CheckResult check_identity(std::string name, std::span<const RatFunc> lhs, std::span<const RatFunc> rhs,
                           const SampleConfig& cfg);
CheckResult check_zero(std::string name, std::span<const RatFunc> values, const SampleConfig& cfg);

}  // namespace ccc
