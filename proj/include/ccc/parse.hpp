#pragma once

#include <span>
#include <string>
#include <string_view>

#include "ccc/poly.hpp"
#include "ccc/ratfunc.hpp"

namespace ccc {

// Expression grammar:
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' integer)?
//   primary := integer | name | '(' expr ')'
// Whitespace is insignificant and multiplication must be explicit.
//
// parse_poly accepts '/' only with a nonzero constant divisor, which covers
// rational literals such as 1/2.
MultiPoly parse_poly(std::string_view text, std::span<const std::string> variables);
RatFunc parse_ratfunc(std::string_view text, std::span<const std::string> variables);

}  // namespace ccc
