#pragma once

// Element expressions for the command line.
//
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' integer)?
//   atom   := integer | 'sN' | '(' expr ')' | name '(' expr (',' expr)* ')'
//
// sN is the square root of N; N must be r^2 p_I for some basis radicand p_I.
// Functions: tr, norm, charpoly, tp, integral, conj(x, t).

#include <cctype>
#include <string>
#include <variant>
#include <vector>

#include "mqf/field.hpp"
#include "mqf/integers.hpp"

namespace mqf {

struct Polynomial {
  std::vector<Rational> coeffs;  // ascending
};

using ExprValue = std::variant<FieldElement, Polynomial, bool>;

inline std::string to_string(const Polynomial& p) {
  std::string s;
  for (std::size_t e = p.coeffs.size(); e-- > 0;) {
    const Rational& c = p.coeffs[e];
    if (c == 0) continue;
    Rational mag = abs(c);
    if (s.empty()) {
      if (c < 0) s += "-";
    } else {
      s += c < 0 ? " - " : " + ";
    }
    if (e == 0) {
      s += mag.get_str();
      continue;
    }
    if (mag != 1) s += mag.get_str() + "*";
    s += e == 1 ? std::string("T") : "T^" + std::to_string(e);
  }
  return s.empty() ? "0" : s;
}

inline std::string to_string(const ExprValue& v) {
  if (const auto* x = std::get_if<FieldElement>(&v)) return to_string(*x);
  if (const auto* p = std::get_if<Polynomial>(&v)) return to_string(*p);
  return std::get<bool>(v) ? "true" : "false";
}

namespace detail {

struct Token {
  enum Kind { Number, Root, Name, Symbol, End } kind;
  std::string text;
  std::size_t begin;
  std::size_t end;
};

inline std::vector<Token> tokenize(const std::string& src) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < src.size()) {
    const unsigned char ch = static_cast<unsigned char>(src[i]);
    if (std::isspace(ch)) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isdigit(ch)) {
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
      out.push_back({Token::Number, src.substr(start, i - start), start, i});
    } else if (std::isalpha(ch)) {
      while (i < src.size() && std::isalnum(static_cast<unsigned char>(src[i]))) ++i;
      std::string word = src.substr(start, i - start);
      const bool root = word.size() > 1 && word[0] == 's' &&
                        word.find_first_not_of("0123456789", 1) == std::string::npos;
      out.push_back({root ? Token::Root : Token::Name, word, start, i});
    } else if (std::string("+-*/^(),").find(static_cast<char>(ch)) != std::string::npos) {
      ++i;
      out.push_back({Token::Symbol, std::string(1, static_cast<char>(ch)), start, i});
    } else {
      throw Error(ErrorKind::Parse, "unexpected character '" + std::string(1, static_cast<char>(ch)) +
                                        "' at column " + std::to_string(start + 1));
    }
  }
  out.push_back({Token::End, "", src.size(), src.size()});
  return out;
}

class ExprParser {
 public:
  ExprParser(const MultiquadField& f, const std::string& src) : f_(f), toks_(tokenize(src)) {}

  ExprValue parse() {
    ExprValue v = expr();
    if (peek().kind != Token::End) fail(peek(), "trailing input");
    return v;
  }

 private:
  const MultiquadField& f_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }

  [[noreturn]] static void fail(const Token& t, const std::string& why) {
    std::string shown = t.kind == Token::End ? "end of input" : "'" + t.text + "'";
    throw Error(ErrorKind::Parse, why + " at columns " + std::to_string(t.begin + 1) + "-" +
                                      std::to_string(t.end > t.begin ? t.end : t.begin + 1) + ": " + shown);
  }

  bool accept(const char* sym) {
    if (peek().kind == Token::Symbol && peek().text == sym) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(const char* sym) {
    if (!accept(sym)) fail(peek(), std::string("expected '") + sym + "'");
  }

  FieldElement element(const ExprValue& v, const Token& at) const {
    if (const auto* x = std::get_if<FieldElement>(&v)) return *x;
    fail(at, "expected a field element");
  }

  ExprValue expr() {
    const Token& first = peek();
    ExprValue v = term();
    for (;;) {
      const Token& op = peek();
      if (accept("+")) {
        v = element(v, first) + element(term(), op);
      } else if (accept("-")) {
        v = element(v, first) - element(term(), op);
      } else {
        return v;
      }
    }
  }

  ExprValue term() {
    const Token& first = peek();
    ExprValue v = unary();
    for (;;) {
      const Token& op = peek();
      if (accept("*")) {
        v = element(v, first) * element(unary(), op);
      } else if (accept("/")) {
        FieldElement d = element(unary(), op);
        if (d.is_zero()) fail(op, "division by zero");
        v = element(v, first) * inverse(d);
      } else {
        return v;
      }
    }
  }

  ExprValue unary() {
    const Token& op = peek();
    if (accept("-")) return -element(unary(), op);
    return power();
  }

  ExprValue power() {
    const Token& first = peek();
    ExprValue base = atom();
    if (!accept("^")) return base;
    const Token& e = next();
    if (e.kind != Token::Number) fail(e, "exponent must be a nonnegative integer");
    Integer n = parse_integer(e.text);
    if (n > 1000) fail(e, "exponent too large");
    return pow(element(base, first), static_cast<unsigned>(n.get_ui()));
  }

  FieldElement root(const Token& t) const {
    Integer n = parse_integer(t.text.substr(1));
    if (n == 0) return FieldElement(f_);
    for (Mask I = 0; I < f_.degree(); ++I) {
      const Integer& p = f_.radicand(I);
      if (n % p != 0) continue;
      Integer r2 = n / p;
      if (!is_perfect_square(r2)) continue;
      return FieldElement::basis(f_, I) * Rational(isqrt(r2));
    }
    fail(t, "square root not in " + f_.describe());
  }

  ExprValue atom() {
    const Token& t = next();
    switch (t.kind) {
      case Token::Number: return FieldElement::rational(f_, Rational(parse_integer(t.text)));
      case Token::Root: return root(t);
      case Token::Symbol:
        if (t.text == "(") {
          ExprValue v = expr();
          expect(")");
          return v;
        }
        fail(t, "unexpected symbol");
      case Token::Name: return call(t);
      case Token::End: fail(t, "unexpected end of input");
    }
    fail(t, "unexpected token");
  }

  ExprValue call(const Token& name) {
    expect("(");
    std::vector<std::pair<ExprValue, Token>> args;
    do {
      Token at = peek();
      args.emplace_back(expr(), at);
    } while (accept(","));
    expect(")");
    const std::string& fn = name.text;
    auto arity = [&](std::size_t n) {
      if (args.size() != n) fail(name, fn + " takes " + std::to_string(n) + " argument(s)");
    };
    auto arg = [&](std::size_t i) { return element(args[i].first, args[i].second); };
    if (fn == "tr") {
      arity(1);
      return FieldElement::rational(f_, trace(arg(0)));
    }
    if (fn == "norm") {
      arity(1);
      return FieldElement::rational(f_, norm(arg(0)));
    }
    if (fn == "charpoly") {
      arity(1);
      return Polynomial{char_poly(arg(0))};
    }
    if (fn == "tp") {
      arity(1);
      return is_totally_positive(arg(0));
    }
    if (fn == "integral") {
      arity(1);
      return is_algebraic_integer(arg(0));
    }
    if (fn == "conj") {
      arity(2);
      FieldElement t = arg(1);
      if (!t.is_rational() || !is_integer(t[0]) || t[0] < 0 || t[0] >= Integer(static_cast<unsigned long>(f_.degree()))) {
        fail(args[1].second, "embedding mask must be an integer in [0, 2^k)");
      }
      return conjugate(arg(0), static_cast<Mask>(t[0].get_num().get_ui()));
    }
    fail(name, "unknown function");
  }
};

}  // namespace detail

inline ExprValue evaluate(const MultiquadField& f, const std::string& src) {
  return detail::ExprParser(f, src).parse();
}

inline FieldElement parse_element(const MultiquadField& f, const std::string& src) {
  ExprValue v = evaluate(f, src);
  if (const auto* x = std::get_if<FieldElement>(&v)) return *x;
  throw Error(ErrorKind::Parse, "expression is not a field element: " + src);
}

}  // namespace mqf
