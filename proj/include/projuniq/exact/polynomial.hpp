#ifndef PROJUNIQ_EXACT_POLYNOMIAL_HPP
#define PROJUNIQ_EXACT_POLYNOMIAL_HPP

#include <gmpxx.h>

#include <algorithm>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace projuniq {

using Integer = mpz_class;
using Rational = mpq_class;

inline int sign_of(const Rational& q) { return sgn(q); }
inline int sign_of(const Integer& z) { return sgn(z); }

/// Univariate polynomial with rational coefficients, low-to-high degree.
/// Used internally for division and gcd; the public surface is IntPolynomial.
class RatPolynomial {
 public:
  RatPolynomial() = default;
  explicit RatPolynomial(std::vector<Rational> c) : c_(std::move(c)) { trim(); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rational>& coefficients() const { return c_; }
  Rational coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Rational(0); }
  const Rational& leading() const { return c_.back(); }

  Rational evaluate(const Rational& x) const {
    Rational acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  RatPolynomial derivative() const {
    std::vector<Rational> d;
    for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * static_cast<long>(i));
    return RatPolynomial(std::move(d));
  }

  RatPolynomial monic() const {
    if (is_zero()) return *this;
    std::vector<Rational> m = c_;
    const Rational lead = c_.back();
    for (auto& x : m) x /= lead;
    return RatPolynomial(std::move(m));
  }

  friend RatPolynomial operator+(const RatPolynomial& a, const RatPolynomial& b) {
    std::vector<Rational> r(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.coeff(i) + b.coeff(i);
    return RatPolynomial(std::move(r));
  }
  friend RatPolynomial operator-(const RatPolynomial& a, const RatPolynomial& b) {
    std::vector<Rational> r(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.coeff(i) - b.coeff(i);
    return RatPolynomial(std::move(r));
  }
  friend RatPolynomial operator*(const RatPolynomial& a, const RatPolynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> r(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return RatPolynomial(std::move(r));
  }
  RatPolynomial operator-() const {
    std::vector<Rational> r = c_;
    for (auto& x : r) x = -x;
    return RatPolynomial(std::move(r));
  }
  friend bool operator==(const RatPolynomial& a, const RatPolynomial& b) { return a.c_ == b.c_; }

  /// Euclidean division: returns (quotient, remainder).
  static std::pair<RatPolynomial, RatPolynomial> divmod(const RatPolynomial& a, const RatPolynomial& b) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    std::vector<Rational> rem = a.c_;
    const int db = b.degree();
    if (a.degree() < db) return {RatPolynomial(), a};
    std::vector<Rational> quo(static_cast<std::size_t>(a.degree() - db + 1));
    for (int k = a.degree(); k >= db; --k) {
      const Rational f = rem[static_cast<std::size_t>(k)] / b.leading();
      if (f == 0) continue;
      quo[static_cast<std::size_t>(k - db)] = f;
      for (int j = 0; j <= db; ++j) rem[static_cast<std::size_t>(k - db + j)] -= f * b.c_[static_cast<std::size_t>(j)];
    }
    rem.resize(static_cast<std::size_t>(db));
    return {RatPolynomial(std::move(quo)), RatPolynomial(std::move(rem))};
  }

  /// Monic gcd (zero if both are zero).
  static RatPolynomial gcd(RatPolynomial a, RatPolynomial b) {
    while (!b.is_zero()) {
      RatPolynomial r = divmod(a, b).second;
      a = std::move(b);
      b = std::move(r);
    }
    return a.monic();
  }

  /// Extended Euclid: returns (g, s, t) with s*a + t*b = g, g monic.
  static std::tuple<RatPolynomial, RatPolynomial, RatPolynomial> xgcd(const RatPolynomial& a, const RatPolynomial& b) {
    RatPolynomial r0 = a, r1 = b;
    RatPolynomial s0(std::vector<Rational>{1}), s1;
    RatPolynomial t0, t1(std::vector<Rational>{1});
    while (!r1.is_zero()) {
      auto [q, r] = divmod(r0, r1);
      RatPolynomial s2 = s0 - q * s1;
      RatPolynomial t2 = t0 - q * t1;
      r0 = std::move(r1);
      r1 = std::move(r);
      s0 = std::move(s1);
      s1 = std::move(s2);
      t0 = std::move(t1);
      t1 = std::move(t2);
    }
    if (r0.is_zero()) return {r0, s0, t0};
    const Rational lead = r0.leading();
    std::vector<Rational> sc = s0.coefficients(), tc = t0.coefficients();
    for (auto& x : sc) x /= lead;
    for (auto& x : tc) x /= lead;
    return {r0.monic(), RatPolynomial(std::move(sc)), RatPolynomial(std::move(tc))};
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Rational> c_;
};

/// Integer-coefficient univariate polynomial, coefficients low-to-high.
class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<Integer> c) : c_(std::move(c)) { trim(); }
  IntPolynomial(std::initializer_list<long> c) {
    for (long x : c) c_.emplace_back(x);
    trim();
  }

  static IntPolynomial x() { return IntPolynomial{0, 1}; }
  static IntPolynomial constant(const Integer& a) { return IntPolynomial(std::vector<Integer>{a}); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Integer>& coefficients() const { return c_; }
  Integer coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Integer(0); }
  const Integer& leading() const { return c_.back(); }

  Rational evaluate(const Rational& x) const {
    Rational acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + Rational(*it);
    return acc;
  }
  int sign_at(const Rational& x) const { return sgn(evaluate(x)); }

  IntPolynomial derivative() const {
    std::vector<Integer> d;
    for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * static_cast<unsigned long>(i));
    return IntPolynomial(std::move(d));
  }

  Integer content() const {
    Integer g = 0;
    for (const auto& a : c_) g = gcd(g, a);
    return g;
  }

  /// Content removed and leading coefficient made positive.
  IntPolynomial primitive() const {
    if (is_zero()) return *this;
    Integer g = content();
    if (leading() < 0) g = -g;
    std::vector<Integer> r = c_;
    for (auto& a : r) a /= g;
    return IntPolynomial(std::move(r));
  }

  RatPolynomial to_rational() const {
    std::vector<Rational> r(c_.begin(), c_.end());
    return RatPolynomial(std::move(r));
  }

  /// Multiplies by the positive lcm of the denominators.
  static IntPolynomial clear_denominators(const RatPolynomial& p) {
    Integer l = 1;
    for (const auto& a : p.coefficients()) l = lcm(l, a.get_den());
    std::vector<Integer> r;
    r.reserve(p.coefficients().size());
    for (const auto& a : p.coefficients()) r.push_back(a.get_num() * (l / a.get_den()));
    return IntPolynomial(std::move(r));
  }

  friend IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b) {
    std::vector<Integer> r(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.coeff(i) + b.coeff(i);
    return IntPolynomial(std::move(r));
  }
  friend IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b) {
    std::vector<Integer> r(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.coeff(i) - b.coeff(i);
    return IntPolynomial(std::move(r));
  }
  friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Integer> r(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return IntPolynomial(std::move(r));
  }
  IntPolynomial operator-() const {
    std::vector<Integer> r = c_;
    for (auto& a : r) a = -a;
    return IntPolynomial(std::move(r));
  }
  friend bool operator==(const IntPolynomial& a, const IntPolynomial& b) { return a.c_ == b.c_; }

  /// Human-readable form in the variable `var`, e.g. "x^2 - 2".
  std::string to_string(const std::string& var = "x") const {
    if (is_zero()) return "0";
    std::string out;
    for (int k = degree(); k >= 0; --k) {
      const Integer& a = c_[static_cast<std::size_t>(k)];
      if (a == 0) continue;
      Integer mag = abs(a);
      if (out.empty()) {
        if (a < 0) out += "-";
      } else {
        out += a < 0 ? " - " : " + ";
      }
      const bool unit = (mag == 1 && k > 0);
      if (!unit) out += mag.get_str();
      if (k > 0) {
        if (!unit) out += "*";
        out += var;
        if (k > 1) out += "^" + std::to_string(k);
      }
    }
    return out;
  }

  /// Comma-separated coefficient list, low-to-high (used by the field text format).
  std::string coefficient_list() const {
    std::string out;
    if (is_zero()) return "0";
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (i) out += ",";
      out += c_[i].get_str();
    }
    return out;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Integer> c_;
};

/// Squarefree part p / gcd(p, p'), primitive with positive leading coefficient.
inline IntPolynomial squarefree_part(const IntPolynomial& p) {
  if (p.degree() <= 0) return p.primitive();
  RatPolynomial rp = p.to_rational();
  RatPolynomial g = RatPolynomial::gcd(rp, rp.derivative());
  RatPolynomial q = RatPolynomial::divmod(rp, g).first;
  return IntPolynomial::clear_denominators(q).primitive();
}

inline bool is_squarefree(const IntPolynomial& p) {
  if (p.degree() <= 0) return true;
  RatPolynomial rp = p.to_rational();
  return RatPolynomial::gcd(rp, rp.derivative()).degree() == 0;
}

/// Sturm chain p, p', -rem(p, p'), ... with denominators cleared by positive factors.
inline std::vector<IntPolynomial> sturm_sequence(const IntPolynomial& p) {
  if (p.is_zero()) throw std::invalid_argument("sturm_sequence: zero polynomial");
  std::vector<IntPolynomial> seq{p};
  IntPolynomial d = p.derivative();
  if (d.is_zero()) return seq;
  seq.push_back(d);
  while (true) {
    const auto& a = seq[seq.size() - 2];
    const auto& b = seq.back();
    RatPolynomial r = RatPolynomial::divmod(a.to_rational(), b.to_rational()).second;
    if (r.is_zero()) break;
    seq.push_back(IntPolynomial::clear_denominators(-r));
  }
  return seq;
}

inline int sign_variations(const std::vector<int>& signs) {
  int count = 0, last = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

inline int sign_variations_at(const std::vector<IntPolynomial>& chain, const Rational& x) {
  std::vector<int> s;
  s.reserve(chain.size());
  for (const auto& q : chain) s.push_back(q.sign_at(x));
  return sign_variations(s);
}

/// Number of distinct real roots in (a, b]; exact count for a < b.
inline int sturm_count(const std::vector<IntPolynomial>& chain, const Rational& a, const Rational& b) {
  return sign_variations_at(chain, a) - sign_variations_at(chain, b);
}

inline int count_real_roots(const IntPolynomial& p, const Rational& a, const Rational& b) {
  return sturm_count(sturm_sequence(p), a, b);
}

struct RootInterval {
  Rational lo;
  Rational hi;
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
};

/// Smallest power of two strictly exceeding every root magnitude (Cauchy bound).
inline Rational root_bound(const IntPolynomial& p) {
  Rational m = 0;
  const Rational lead = abs(Rational(p.leading()));
  for (int i = 0; i < p.degree(); ++i) {
    Rational r = abs(Rational(p.coeff(static_cast<std::size_t>(i)))) / lead;
    if (r > m) m = r;
  }
  Rational b = 1 + m;
  Rational pow2 = 1;
  while (pow2 <= b) pow2 *= 2;
  return pow2;
}

/// Disjoint isolating intervals with rational endpoints, ascending, each of width at most 1.
/// The squarefree part of p is isolated; endpoints are never roots.
inline std::vector<RootInterval> isolate_roots(const IntPolynomial& p) {
  std::vector<RootInterval> out;
  if (p.degree() <= 0) return out;
  const IntPolynomial q = squarefree_part(p);
  const auto chain = sturm_sequence(q);
  const Rational bound = root_bound(q);

  struct Job {
    Rational a, b;
    int count;
  };
  std::vector<Job> stack;
  stack.push_back({-bound, bound, sturm_count(chain, -bound, bound)});
  std::vector<RootInterval> found;
  while (!stack.empty()) {
    Job job = stack.back();
    stack.pop_back();
    if (job.count == 0) continue;
    if (job.count == 1 && job.b - job.a <= 1) {
      found.push_back({job.a, job.b});
      continue;
    }
    Rational mid = (job.a + job.b) / 2;
    if (q.sign_at(mid) == 0) {
      Rational delta = (job.b - job.a) / 4;
      while (q.sign_at(mid - delta) == 0 || q.sign_at(mid + delta) == 0 ||
             sturm_count(chain, mid - delta, mid + delta) != 1)
        delta /= 2;
      found.push_back({mid - delta, mid + delta});
      stack.push_back({job.a, mid - delta, sturm_count(chain, job.a, mid - delta)});
      stack.push_back({mid + delta, job.b, sturm_count(chain, mid + delta, job.b)});
      continue;
    }
    stack.push_back({job.a, mid, sturm_count(chain, job.a, mid)});
    stack.push_back({mid, job.b, sturm_count(chain, mid, job.b)});
  }
  std::sort(found.begin(), found.end(), [](const RootInterval& x, const RootInterval& y) { return x.lo < y.lo; });
  return found;
}

/// Interval Horner evaluation of p over [lo, hi].
inline std::pair<Rational, Rational> evaluate_interval(const RatPolynomial& p, const Rational& lo, const Rational& hi) {
  if (p.is_zero()) return {Rational(0), Rational(0)};
  const auto& c = p.coefficients();
  Rational alo = c.back(), ahi = c.back();
  for (std::size_t k = c.size() - 1; k-- > 0;) {
    Rational p1 = alo * lo, p2 = alo * hi, p3 = ahi * lo, p4 = ahi * hi;
    Rational mn = std::min({p1, p2, p3, p4});
    Rational mx = std::max({p1, p2, p3, p4});
    alo = mn + c[k];
    ahi = mx + c[k];
  }
  return {alo, ahi};
}

}  // namespace projuniq

#endif  // PROJUNIQ_EXACT_POLYNOMIAL_HPP
