#ifndef PROJUNIQ_EXACT_SCALAR_HPP
#define PROJUNIQ_EXACT_SCALAR_HPP

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "projuniq/exact/number_field.hpp"

namespace projuniq {

/// Exact real number: a rational, or an element of a single real number field
/// Q(θ) represented as a polynomial in θ reduced modulo the minimal polynomial.
///
/// Values that reduce to a constant are stored as plain rationals, so rational
/// and field values mix freely. Two different fields in one expression throw.
class Scalar {
 public:
  Scalar() = default;
  Scalar(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  Scalar(int v) : q_(v) {}   // NOLINT(google-explicit-constructor)
  Scalar(const Rational& q) : q_(q) { q_.canonicalize(); }  // NOLINT(google-explicit-constructor)
  Scalar(const Integer& z) : q_(z) {}                        // NOLINT(google-explicit-constructor)
  Scalar(long num, long den) : q_(num, den) {
    if (den == 0) throw std::domain_error("zero denominator");
    q_.canonicalize();
  }

  /// Element of `field` with coefficients (low-to-high) in θ.
  Scalar(FieldPtr field, std::vector<Rational> coeffs) { assign(std::move(field), RatPolynomial(std::move(coeffs))); }

  /// θ itself.
  static Scalar generator(FieldPtr field) { return Scalar(std::move(field), {Rational(0), Rational(1)}); }

  bool is_rational() const { return field_ == nullptr; }
  const Rational& rational() const {
    if (!is_rational()) throw std::logic_error("scalar is not rational");
    return q_;
  }
  const FieldPtr& field() const { return field_; }
  /// Coefficients in θ (length 1 for rationals).
  std::vector<Rational> coefficients() const { return is_rational() ? std::vector<Rational>{q_} : c_; }

  int sign() const {
    if (is_rational()) return sgn(q_);
    const RatPolynomial p(c_);
    for (unsigned bits = NumberField::kCachedBits;; bits *= 2) {
      auto [a, b] = field_->interval(bits);
      auto [lo, hi] = evaluate_interval(p, a, b);
      if (lo > 0) return 1;
      if (hi < 0) return -1;
      if (bits == NumberField::kCachedBits && field_->vanishes_at_theta(p)) return 0;
    }
  }
  bool is_zero() const { return sign() == 0; }

  /// Rational enclosure [lo, hi] of the value, tightened with `bits`.
  std::pair<Rational, Rational> enclosure(unsigned bits = 64) const {
    if (is_rational()) return {q_, q_};
    auto [a, b] = field_->interval(std::max(bits, NumberField::kCachedBits));
    return evaluate_interval(RatPolynomial(c_), a, b);
  }

  double to_double() const {
    if (is_rational()) return q_.get_d();
    auto [lo, hi] = enclosure(64);
    return Rational((lo + hi) / 2).get_d();
  }

  friend Scalar operator+(const Scalar& a, const Scalar& b) {
    if (a.is_rational() && b.is_rational()) return Scalar(Rational(a.q_ + b.q_));
    FieldPtr f = common_field(a, b);
    Scalar r;
    r.assign(f, a.poly() + b.poly());
    return r;
  }
  friend Scalar operator-(const Scalar& a, const Scalar& b) {
    if (a.is_rational() && b.is_rational()) return Scalar(Rational(a.q_ - b.q_));
    FieldPtr f = common_field(a, b);
    Scalar r;
    r.assign(f, a.poly() - b.poly());
    return r;
  }
  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    if (a.is_rational() && b.is_rational()) return Scalar(Rational(a.q_ * b.q_));
    FieldPtr f = common_field(a, b);
    Scalar r;
    if (a.is_rational() || b.is_rational()) {
      const Rational& k = a.is_rational() ? a.q_ : b.q_;
      std::vector<Rational> c = a.is_rational() ? b.c_ : a.c_;
      for (auto& x : c) x *= k;
      r.assign(f, RatPolynomial(std::move(c)));
    } else {
      r.assign(f, f->reduce(a.poly() * b.poly()));
    }
    return r;
  }
  friend Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inverse(); }
  Scalar operator-() const {
    if (is_rational()) return Scalar(Rational(-q_));
    Scalar r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

  Scalar inverse() const {
    if (is_rational()) {
      if (q_ == 0) throw std::domain_error("division by zero");
      return Scalar(Rational(1 / q_));
    }
    // Extended Euclid against the minimal polynomial; if it is reducible,
    // continue modulo the cofactor that still vanishes at θ.
    RatPolynomial a(c_);
    RatPolynomial m = field_->minimal_polynomial_q();
    while (true) {
      auto [g, s, t] = RatPolynomial::xgcd(a, m);
      if (g.degree() == 0) {
        Scalar r;
        r.assign(field_, field_->reduce(s));
        return r;
      }
      if (field_->vanishes_at_theta(g)) {
        // g(θ) = 0 and g | a, so a(θ) = 0 — unless θ is a root of m/g too,
        // which cannot happen as m is squarefree.
        throw std::domain_error("division by zero");
      }
      m = RatPolynomial::divmod(m, g).first;
      a = RatPolynomial::divmod(a, m).second;
    }
  }

  friend bool operator==(const Scalar& a, const Scalar& b) {
    if (a.is_rational() && b.is_rational()) return a.q_ == b.q_;
    return (a - b).sign() == 0;
  }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }
  friend bool operator<(const Scalar& a, const Scalar& b) {
    if (a.is_rational() && b.is_rational()) return a.q_ < b.q_;
    return (a - b).sign() < 0;
  }
  friend bool operator>(const Scalar& a, const Scalar& b) { return b < a; }
  friend bool operator<=(const Scalar& a, const Scalar& b) { return !(b < a); }
  friend bool operator>=(const Scalar& a, const Scalar& b) { return !(a < b); }

  /// Strict weak order on representations (for deduplication maps).
  static bool repr_less(const Scalar& a, const Scalar& b) {
    if (a.is_rational() != b.is_rational()) return a.is_rational();
    if (a.is_rational()) return a.q_ < b.q_;
    if (a.c_.size() != b.c_.size()) return a.c_.size() < b.c_.size();
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      if (a.c_[i] != b.c_[i]) return a.c_[i] < b.c_[i];
    return false;
  }

  /// Text form: "p/q" for rationals; "(c0 + c1*t ...)/d @ field:<coeffs>:<lo>,<hi>" otherwise.
  std::string to_string() const {
    if (is_rational()) return q_.get_str();
    Integer den = 1;
    for (const auto& x : c_) den = lcm(den, x.get_den());
    std::string body;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      Integer num = c_[i].get_num() * (den / c_[i].get_den());
      if (num == 0) continue;
      Integer mag = abs(num);
      if (body.empty()) {
        if (num < 0) body += "-";
      } else {
        body += num < 0 ? " - " : " + ";
      }
      if (i == 0) {
        body += mag.get_str();
      } else {
        if (mag != 1) body += mag.get_str() + "*";
        body += "t";
        if (i > 1) body += "^" + std::to_string(i);
      }
    }
    std::string out = "(" + body + ")";
    if (den != 1) out += "/" + den.get_str();
    return out + " @ field:" + field_->spec();
  }

  friend std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.to_string(); }

 private:
  static FieldPtr common_field(const Scalar& a, const Scalar& b) {
    if (a.is_rational()) return b.field_;
    if (b.is_rational()) return a.field_;
    if (!a.field_->same_as(*b.field_)) throw std::invalid_argument("scalars from different number fields");
    return a.field_;
  }

  RatPolynomial poly() const { return is_rational() ? RatPolynomial({q_}) : RatPolynomial(c_); }

  void assign(FieldPtr f, RatPolynomial p) {
    if (f) p = f->reduce(p);
    if (!f || p.degree() <= 0) {
      field_ = nullptr;
      c_.clear();
      q_ = p.is_zero() ? Rational(0) : p.coeff(0);
      return;
    }
    field_ = std::move(f);
    c_ = p.coefficients();
    q_ = 0;
  }

  FieldPtr field_;
  Rational q_ = 0;
  std::vector<Rational> c_;
};

inline int sign(const Scalar& s) { return s.sign(); }
inline Scalar abs(const Scalar& s) { return s.sign() < 0 ? -s : s; }

/// Parses the text form written by Scalar::to_string (also accepts plain
/// integers, "p/q" and decimals like "0.25").
Scalar parse_scalar(const std::string& text);

}  // namespace projuniq

#include "projuniq/exact/scalar_parse.hpp"

#endif  // PROJUNIQ_EXACT_SCALAR_HPP
