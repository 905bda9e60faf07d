#ifndef PROJUNIQ_EXACT_NUMBER_FIELD_HPP
#define PROJUNIQ_EXACT_NUMBER_FIELD_HPP

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "projuniq/exact/polynomial.hpp"

namespace projuniq {

/// A real number field Q(θ), θ pinned as the unique root of the minimal
/// polynomial inside a rational isolating interval.
///
/// Irreducibility is trusted; squarefreeness and the isolation are checked.
class NumberField {
 public:
  /// Refined interval width is at most 2^-kCachedBits.
  static constexpr unsigned kCachedBits = 64;

  NumberField(IntPolynomial minpoly, Rational lo, Rational hi)
      : minpoly_(minpoly.primitive()), lo_(std::move(lo)), hi_(std::move(hi)) {
    if (minpoly_.degree() < 1) throw std::invalid_argument("number field: minimal polynomial must have degree >= 1");
    if (!(lo_ < hi_)) throw std::invalid_argument("number field: empty isolating interval");
    if (!is_squarefree(minpoly_)) throw std::invalid_argument("number field: minimal polynomial is not squarefree");
    if (minpoly_.sign_at(lo_) == 0 || minpoly_.sign_at(hi_) == 0)
      throw std::invalid_argument("number field: interval endpoint is a root");
    chain_ = sturm_sequence(minpoly_);
    if (sturm_count(chain_, lo_, hi_) != 1)
      throw std::invalid_argument("number field: interval does not isolate exactly one root");
    rlo_ = lo_;
    rhi_ = hi_;
    bisect(rlo_, rhi_, kCachedBits);
    rational_ = minpoly_.to_rational();
  }

  /// Q(√n) with θ = +√n; n must not be a perfect square.
  static std::shared_ptr<const NumberField> quadratic(long n) {
    if (n <= 1) throw std::invalid_argument("quadratic field: need n > 1");
    Integer r;
    mpz_sqrt(r.get_mpz_t(), Integer(n).get_mpz_t());
    if (r * r == n) throw std::invalid_argument("quadratic field: n is a perfect square");
    return std::make_shared<const NumberField>(IntPolynomial{-n, 0, 1}, Rational(r), Rational(r + 1));
  }

  const IntPolynomial& minimal_polynomial() const { return minpoly_; }
  const RatPolynomial& minimal_polynomial_q() const { return rational_; }
  int degree() const { return minpoly_.degree(); }
  const Rational& lo() const { return lo_; }
  const Rational& hi() const { return hi_; }
  const std::vector<IntPolynomial>& sturm_chain() const { return chain_; }

  /// Isolating interval of width ≤ 2^-bits (fresh copy; the field stays immutable).
  std::pair<Rational, Rational> interval(unsigned bits) const {
    Rational a = rlo_, b = rhi_;
    if (bits > kCachedBits) bisect(a, b, bits);
    return {a, b};
  }

  /// Canonical textual key "<coeffs>:<lo>,<hi>".
  std::string spec() const { return minpoly_.coefficient_list() + ":" + lo_.get_str() + "," + hi_.get_str(); }

  /// True iff the polynomial g (dividing or not) has θ as a root, decided exactly.
  bool vanishes_at_theta(const RatPolynomial& g) const {
    RatPolynomial h = RatPolynomial::gcd(g, rational_);
    if (h.degree() < 1) return false;
    IntPolynomial hi = IntPolynomial::clear_denominators(h);
    // θ is the only root of the minimal polynomial in (lo, hi], and h divides it.
    return sturm_count(sturm_sequence(hi), lo_, hi_) >= 1;
  }

  RatPolynomial reduce(const RatPolynomial& p) const {
    if (p.degree() < degree()) return p;
    return RatPolynomial::divmod(p, rational_).second;
  }

  bool same_as(const NumberField& o) const { return this == &o || spec() == o.spec(); }

 private:
  void bisect(Rational& a, Rational& b, unsigned bits) const {
    Rational width = 1;
    mpq_div_2exp(width.get_mpq_t(), width.get_mpq_t(), bits);
    const int sa = minpoly_.sign_at(a);
    while (b - a > width) {
      Rational m = (a + b) / 2;
      int sm = minpoly_.sign_at(m);
      if (sm == 0) {
        // θ is rational: degenerate but valid (non-irreducible input).
        a = m;
        b = m;
        return;
      }
      if (sm == sa) a = m; else b = m;
    }
  }

  IntPolynomial minpoly_;
  Rational lo_, hi_;
  Rational rlo_, rhi_;
  std::vector<IntPolynomial> chain_;
  RatPolynomial rational_;
};

using FieldPtr = std::shared_ptr<const NumberField>;

/// Process-wide table so that equal field specs parse to one shared object.
inline FieldPtr intern_field(const IntPolynomial& minpoly, const Rational& lo, const Rational& hi) {
  static std::mutex mu;
  static std::map<std::string, FieldPtr> table;
  auto candidate = std::make_shared<const NumberField>(minpoly, lo, hi);
  std::lock_guard<std::mutex> lock(mu);
  auto [it, inserted] = table.emplace(candidate->spec(), candidate);
  return it->second;
}

}  // namespace projuniq

#endif  // PROJUNIQ_EXACT_NUMBER_FIELD_HPP
