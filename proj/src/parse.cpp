#include "ccc/parse.hpp"

#include <cctype>

namespace ccc {

namespace {

class Parser {
 public:
  Parser(std::string_view text, std::span<const std::string> variables, bool polynomial_only)
      : text_(text), vars_(variables), poly_only_(polynomial_only) {
    if (vars_.size() > static_cast<std::size_t>(kMaxVars)) {
      throw ParseError("too many variables", 0);
    }
  }

  RatFunc parse() {
    skip();
    if (pos_ == text_.size()) throw ParseError("empty expression", pos_);
    RatFunc value = expr();
    skip();
    if (pos_ != text_.size()) fail_unexpected();
    return value;
  }

 private:
  int nvars() const { return static_cast<int>(vars_.size()); }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  [[noreturn]] void fail_unexpected() {
    if (pos_ >= text_.size()) throw ParseError("unexpected end of expression", pos_);
    char c = text_[pos_];
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '(') {
      throw ParseError("implicit multiplication is not allowed; write '*'", pos_);
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  RatFunc expr() {
    RatFunc value = term();
    while (true) {
      if (peek('+')) {
        ++pos_;
        value += term();
      } else if (peek('-')) {
        ++pos_;
        value -= term();
      } else {
        return value;
      }
    }
  }

  RatFunc term() {
    RatFunc value = unary();
    while (true) {
      if (peek('*')) {
        ++pos_;
        value *= unary();
      } else if (peek('/')) {
        std::size_t at = pos_++;
        RatFunc divisor = unary();
        if (divisor.is_zero()) throw ParseError("division by zero", at);
        if (poly_only_ && !divisor.is_constant()) {
          throw ParseError("division by a non-constant expression in a polynomial", at);
        }
        value /= divisor;
      } else {
        return value;
      }
    }
  }

  RatFunc unary() {
    if (peek('-')) {
      ++pos_;
      return -unary();
    }
    if (peek('+')) {
      ++pos_;
      return unary();
    }
    return power();
  }

  RatFunc power() {
    RatFunc base = primary();
    if (peek('^')) {
      ++pos_;
      skip();
      std::size_t start = pos_;
      if (pos_ < text_.size() && text_[pos_] == '-') {
        throw ParseError("negative exponents are not allowed", pos_);
      }
      Integer e = integer_literal();
      if (e > 1000) throw ParseError("exponent too large", start);
      return base.pow(static_cast<unsigned>(e.get_ui()));
    }
    return base;
  }

  Integer integer_literal() {
    skip();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) throw ParseError("expected an integer", start);
    return Integer(std::string(text_.substr(start, pos_ - start)), 10);
  }

  RatFunc primary() {
    skip();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of expression", pos_);
    char c = text_[pos_];
    if (c == '(') {
      std::size_t open = pos_++;
      RatFunc value = expr();
      if (!peek(')')) {
        if (pos_ >= text_.size()) throw ParseError("unbalanced parenthesis opened", open);
        fail_unexpected();
      }
      ++pos_;
      return value;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      return RatFunc(nvars(), Rational(integer_literal()));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      std::string name(text_.substr(start, pos_ - start));
      for (int i = 0; i < nvars(); ++i) {
        if (vars_[i] == name) return RatFunc::variable(nvars(), i);
      }
      throw ParseError("unknown variable '" + name + "'", start);
    }
    fail_unexpected();
  }

  std::string_view text_;
  std::span<const std::string> vars_;
  bool poly_only_;
  std::size_t pos_ = 0;
};

}  // namespace

MultiPoly parse_poly(std::string_view text, std::span<const std::string> variables) {
  RatFunc r = Parser(text, variables, true).parse();
  return r.numerator();
}

RatFunc parse_ratfunc(std::string_view text, std::span<const std::string> variables) {
  return Parser(text, variables, false).parse();
}

}  // namespace ccc
