#ifndef PROJUNIQ_IO_EXPR_HPP
#define PROJUNIQ_IO_EXPR_HPP

#include <cctype>
#include <stdexcept>
#include <string>
#include <vector>

#include "projuniq/exact/scalar.hpp"
#include "projuniq/projgeom.hpp"

namespace projuniq::io {

namespace detail {

class Cursor {
 public:
  explicit Cursor(const std::string& s) : s_(s) {}
  void ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  char peek() {
    ws();
    return i_ < s_.size() ? s_[i_] : '\0';
  }
  bool eat(char c) {
    if (peek() != c) return false;
    ++i_;
    return true;
  }
  bool eat_word(const std::string& w) {
    ws();
    if (s_.compare(i_, w.size(), w) != 0) return false;
    i_ += w.size();
    return true;
  }
  std::string digits(bool allow_dot = false) {
    ws();
    std::string out;
    while (i_ < s_.size() &&
           (std::isdigit(static_cast<unsigned char>(s_[i_])) || (allow_dot && s_[i_] == '.'))) out += s_[i_++];
    return out;
  }
  bool done() {
    ws();
    return i_ == s_.size();
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument(what + " at position " + std::to_string(i_) + " in \"" + s_ + "\"");
  }

 private:
  const std::string& s_;
  std::size_t i_ = 0;
};

inline unsigned long exponent(Cursor& c) {
  const std::string e = c.digits();
  if (e.empty()) c.fail("expected exponent");
  if (e.size() > 4) c.fail("exponent too large");
  return std::stoul(e);
}

// Grammar: sum := term (('+'|'-') term)*, term := unary ('*' unary)*,
// unary := '-' unary | power, power := atom ('^' int)?, atom := int | x | '(' sum ')'.
inline IntPolynomial poly_sum(Cursor& c);

inline IntPolynomial poly_atom(Cursor& c) {
  if (c.eat('(')) {
    IntPolynomial p = poly_sum(c);
    if (!c.eat(')')) c.fail("expected ')'");
    return p;
  }
  if (c.eat('x')) return IntPolynomial::x();
  const std::string d = c.digits();
  if (d.empty()) c.fail("expected integer, x or '('");
  return IntPolynomial::constant(Integer(d));
}

inline IntPolynomial poly_power(Cursor& c) {
  IntPolynomial base = poly_atom(c);
  if (!c.eat('^')) return base;
  IntPolynomial r = IntPolynomial::constant(1);
  for (unsigned long k = exponent(c); k > 0; --k) r = r * base;
  return r;
}

inline IntPolynomial poly_unary(Cursor& c) {
  if (c.eat('-')) return -poly_unary(c);
  if (c.eat('+')) return poly_unary(c);
  return poly_power(c);
}

inline IntPolynomial poly_term(Cursor& c) {
  IntPolynomial p = poly_unary(c);
  while (c.eat('*')) p = p * poly_unary(c);
  return p;
}

inline IntPolynomial poly_sum(Cursor& c) {
  IntPolynomial p = poly_term(c);
  while (true) {
    if (c.eat('+')) p = p + poly_term(c);
    else if (c.eat('-')) p = p - poly_term(c);
    else return p;
  }
}

}  // namespace detail

/// Integer-coefficient polynomial in x, e.g. "x^2-2" or "(x+1)*(x-3)".
inline IntPolynomial parse_polynomial(const std::string& text) {
  detail::Cursor c(text);
  IntPolynomial p = detail::poly_sum(c);
  if (!c.done()) c.fail("unexpected character");
  return p;
}

/// "x^2-2:[1,2]" — a polynomial with exactly one root in the interval.
inline FieldPtr parse_field(const std::string& spec) {
  const auto colon = spec.rfind(':');
  if (colon == std::string::npos) throw std::invalid_argument("field spec needs ':[lo,hi]': " + spec);
  IntPolynomial p = parse_polynomial(spec.substr(0, colon));
  std::string iv = projuniq::detail::trim(spec.substr(colon + 1));
  if (iv.size() < 5 || iv.front() != '[' || iv.back() != ']') throw std::invalid_argument("bad interval: " + iv);
  auto ends = projuniq::detail::split(iv.substr(1, iv.size() - 2), ',');
  if (ends.size() != 2) throw std::invalid_argument("bad interval: " + iv);
  std::vector<Integer> c;
  for (int k = 0; k <= p.degree(); ++k) c.push_back(p.coeff(static_cast<std::size_t>(k)));
  return intern_field(IntPolynomial(c), projuniq::detail::parse_rational(ends[0]),
                      projuniq::detail::parse_rational(ends[1]));
}

namespace detail {

/// Positive square root of n as an element of `field` (or a fresh Q(√n) if none).
inline Scalar sqrt_of(long n, FieldPtr& field, Cursor& c) {
  if (n < 0) c.fail("sqrt of a negative number");
  Integer r;
  mpz_sqrt(r.get_mpz_t(), Integer(n).get_mpz_t());
  if (r * r == n) return Scalar(r);
  if (!field) field = intern_field(IntPolynomial{-n, 0, 1}, Rational(r), Rational(r + 1));
  // θ² rational ⇒ √n = θ·s with s² = n/θ².
  const Scalar t = Scalar::generator(field);
  const Scalar t2 = t * t;
  if (t2.is_rational() && t2.rational() > 0) {
    Rational q = Rational(n) / t2.rational();
    q.canonicalize();
    Integer a, b;
    mpz_sqrt(a.get_mpz_t(), q.get_num_mpz_t());
    mpz_sqrt(b.get_mpz_t(), q.get_den_mpz_t());
    if (a * a == q.get_num() && b * b == q.get_den()) {
      Scalar s = t * Scalar(Rational(a, b));
      return s.sign() < 0 ? -s : s;
    }
  }
  c.fail("sqrt" + std::to_string(n) + " is not in the given field");
}

inline Scalar val_sum(Cursor& c, FieldPtr& f);

inline Scalar val_atom(Cursor& c, FieldPtr& f) {
  if (c.eat('(')) {
    Scalar v = val_sum(c, f);
    if (!c.eat(')')) c.fail("expected ')'");
    return v;
  }
  if (c.eat_word("sqrt")) {
    const bool paren = c.eat('(');
    const std::string d = c.digits();
    if (d.empty()) c.fail("expected integer after sqrt");
    if (paren && !c.eat(')')) c.fail("expected ')'");
    return sqrt_of(std::stol(d), f, c);
  }
  if (c.eat('t')) {
    if (!f) c.fail("generator t needs --field");
    return Scalar::generator(f);
  }
  const std::string d = c.digits(true);
  if (d.empty()) c.fail("expected number, sqrtN, t or '('");
  return Scalar(projuniq::detail::parse_rational(d));
}

inline Scalar val_power(Cursor& c, FieldPtr& f) {
  Scalar base = val_atom(c, f);
  if (!c.eat('^')) return base;
  Scalar r(1);
  for (unsigned long k = exponent(c); k > 0; --k) r *= base;
  return r;
}

inline Scalar val_unary(Cursor& c, FieldPtr& f) {
  if (c.eat('-')) return -val_unary(c, f);
  if (c.eat('+')) return val_unary(c, f);
  return val_power(c, f);
}

inline Scalar val_term(Cursor& c, FieldPtr& f) {
  Scalar v = val_unary(c, f);
  while (true) {
    if (c.eat('*')) {
      v *= val_unary(c, f);
    } else if (c.eat('/')) {
      Scalar w = val_unary(c, f);
      if (w.is_zero()) c.fail("division by zero");
      v /= w;
    } else {
      return v;
    }
  }
}

inline Scalar val_sum(Cursor& c, FieldPtr& f) {
  Scalar v = val_term(c, f);
  while (true) {
    if (c.eat('+')) v += val_term(c, f);
    else if (c.eat('-')) v -= val_term(c, f);
    else return v;
  }
}

}  // namespace detail

/// Exact value of "3/4", "0.25", "sqrt2", "1+sqrt2/2", "t^2-1" (t the field generator).
/// Without a field, sqrtN creates Q(√N) and stores it back into `field`.
inline Scalar parse_value(const std::string& text, FieldPtr& field) {
  detail::Cursor c(text);
  Scalar v = detail::val_sum(c, field);
  if (!c.done()) c.fail("unexpected character");
  return v;
}

inline Scalar parse_value(const std::string& text) {
  FieldPtr f;
  return parse_value(text, f);
}

/// Comma-separated coordinates, e.g. "sqrt2,1,1".
inline Point parse_point(const std::string& text, FieldPtr field = nullptr) {
  Point p;
  for (const auto& part : projuniq::detail::split(text, ',')) p.push_back(parse_value(part, field));
  return p;
}

}  // namespace projuniq::io

#endif  // PROJUNIQ_IO_EXPR_HPP
