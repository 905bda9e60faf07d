#ifndef PROJUNIQ_EXACT_SCALAR_PARSE_HPP
#define PROJUNIQ_EXACT_SCALAR_PARSE_HPP

#include <cctype>
#include <stdexcept>
#include <string>
#include <vector>

#include "projuniq/exact/scalar.hpp"

namespace projuniq {

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

/// "3", "-3/4", "0.125", "-1.5e0" is not supported (no exponents).
inline Rational parse_rational(const std::string& raw) {
  std::string s = trim(raw);
  if (s.empty()) throw std::invalid_argument("empty rational");
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    bool neg = s[0] == '-';
    std::string digits = s.substr(neg || s[0] == '+' ? 1 : 0);
    dot = digits.find('.');
    std::string ip = digits.substr(0, dot), fp = digits.substr(dot + 1);
    for (char c : ip + fp)
      if (!std::isdigit(static_cast<unsigned char>(c))) throw std::invalid_argument("bad decimal: " + raw);
    Integer num(ip.empty() ? std::string("0") : ip);
    Integer scale = 1;
    for (char c : fp) {
      num = num * 10 + (c - '0');
      scale *= 10;
    }
    Rational r(num, scale);
    r.canonicalize();
    return neg ? Rational(-r) : r;
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '/' || ((c == '-' || c == '+') && i == 0)))
      throw std::invalid_argument("bad rational: " + raw);
  }
  if (s[0] == '+') s = s.substr(1);
  Rational r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + raw);
  if (r.get_den() == 0) throw std::domain_error("zero denominator: " + raw);
  r.canonicalize();
  return r;
}

/// Parses "c0 + c1*t - 2*t^2" (integer coefficients) into a coefficient vector.
inline std::vector<Rational> parse_theta_poly(const std::string& s) {
  std::vector<Rational> c;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  };
  auto add = [&](std::size_t k, const Integer& v) {
    if (c.size() <= k) c.resize(k + 1);
    c[k] += v;
  };
  bool first = true;
  while (true) {
    skip();
    if (i >= s.size()) break;
    int sg = 1;
    if (s[i] == '+' || s[i] == '-') {
      if (s[i] == '-') sg = -1;
      ++i;
      skip();
    } else if (!first) {
      throw std::invalid_argument("bad field element: " + s);
    }
    first = false;
    Integer coef = 1;
    bool have_num = false;
    std::string digits;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) digits += s[i++];
    if (!digits.empty()) {
      coef = Integer(digits);
      have_num = true;
    }
    skip();
    std::size_t power = 0;
    if (i < s.size() && s[i] == '*') {
      ++i;
      skip();
    }
    if (i < s.size() && s[i] == 't') {
      ++i;
      power = 1;
      skip();
      if (i < s.size() && s[i] == '^') {
        ++i;
        std::string p;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) p += s[i++];
        if (p.empty()) throw std::invalid_argument("bad exponent: " + s);
        power = std::stoul(p);
      }
    } else if (!have_num) {
      throw std::invalid_argument("bad field element: " + s);
    }
    add(power, coef * sg);
  }
  return c;
}

}  // namespace detail

inline Scalar parse_scalar(const std::string& text) {
  const auto at = text.find('@');
  if (at == std::string::npos) return Scalar(detail::parse_rational(text));
  std::string value = detail::trim(text.substr(0, at));
  std::string fspec = detail::trim(text.substr(at + 1));
  if (fspec.rfind("field:", 0) != 0) throw std::invalid_argument("bad field spec: " + text);
  fspec = fspec.substr(6);
  auto parts = detail::split(fspec, ':');
  if (parts.size() != 2) throw std::invalid_argument("bad field spec: " + text);
  std::vector<Integer> mc;
  for (const auto& x : detail::split(parts[0], ',')) mc.emplace_back(detail::trim(x));
  auto ends = detail::split(parts[1], ',');
  if (ends.size() != 2) throw std::invalid_argument("bad field interval: " + text);
  FieldPtr f = intern_field(IntPolynomial(mc), detail::parse_rational(ends[0]), detail::parse_rational(ends[1]));

  Integer den = 1;
  std::string body = value;
  if (!body.empty() && body.front() == '(') {
    auto close = body.rfind(')');
    if (close == std::string::npos) throw std::invalid_argument("unbalanced parentheses: " + text);
    std::string tail = detail::trim(body.substr(close + 1));
    body = body.substr(1, close - 1);
    if (!tail.empty()) {
      if (tail[0] != '/') throw std::invalid_argument("bad denominator: " + text);
      den = Integer(detail::trim(tail.substr(1)));
      if (den == 0) throw std::domain_error("zero denominator: " + text);
    }
  }
  auto coeffs = detail::parse_theta_poly(body);
  for (auto& x : coeffs) {
    x /= den;
    x.canonicalize();
  }
  return Scalar(f, std::move(coeffs));
}

}  // namespace projuniq

#endif  // PROJUNIQ_EXACT_SCALAR_PARSE_HPP
