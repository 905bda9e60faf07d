// Exact layer: polynomials, Sturm chains, root isolation, number fields, scalars.

#include <gtest/gtest.h>

#include <cmath>

#include "projuniq/exact/scalar.hpp"

using namespace projuniq;

namespace {

FieldPtr sqrt2_field() { return intern_field(IntPolynomial{-2, 0, 1}, Rational(1), Rational(2)); }

// Oracle: sign changes of p on a fine grid (valid when roots are well separated).
int grid_root_count(const IntPolynomial& p, double a, double b) {
  int n = 0;
  const int steps = 20000;
  double prev = 0;
  for (int i = 0; i <= steps; ++i) {
    const double x = a + (b - a) * i / steps;
    double v = 0;
    for (int k = p.degree(); k >= 0; --k) v = v * x + p.coeff(static_cast<std::size_t>(k)).get_d();
    if (i > 0 && ((prev < 0 && v > 0) || (prev > 0 && v < 0))) ++n;
    if (v != 0) prev = v;
  }
  return n;
}

}  // namespace

TEST(Sturm, ChainOfXSquaredMinusTwo) {
  const IntPolynomial p{-2, 0, 1};
  const auto chain = sturm_sequence(p);
  ASSERT_EQ(chain.size(), 3u);
  EXPECT_EQ(chain[0], p);
  // 2x and the constant remainder, up to positive scaling.
  EXPECT_EQ(chain[1].degree(), 1);
  EXPECT_GT(chain[1].coeff(1), 0);
  EXPECT_EQ(chain[2].degree(), 0);
  EXPECT_GT(chain[2].coeff(0), 0);
  EXPECT_EQ(sturm_count(chain, Rational(-2), Rational(2)), 2);
}

TEST(Sturm, LinearAndRootless) {
  EXPECT_EQ(count_real_roots(IntPolynomial{-1, 1}, Rational(0), Rational(2)), 1);
  EXPECT_EQ(count_real_roots(IntPolynomial{1, 0, 1}, Rational(-10), Rational(10)), 0);
}

TEST(Sturm, AgreesWithSignChangeOracle) {
  const std::vector<IntPolynomial> ps{{-2, 0, 1}, {6, -5, 1}, {-6, 11, -6, 1}, {1, 0, -3, 0, 1}, {-1, 0, 0, 1}};
  for (const auto& p : ps) EXPECT_EQ(count_real_roots(p, Rational(-5), Rational(5)), grid_root_count(p, -5, 5));
}

TEST(Isolation, XSquaredMinusTwo) {
  const auto iv = isolate_roots(IntPolynomial{-2, 0, 1});
  ASSERT_EQ(iv.size(), 2u);
  const double r[] = {-std::sqrt(2.0), std::sqrt(2.0)};
  for (int i = 0; i < 2; ++i) {
    EXPECT_LE(iv[static_cast<std::size_t>(i)].lo.get_d(), r[i]);
    EXPECT_GE(iv[static_cast<std::size_t>(i)].hi.get_d(), r[i]);
  }
}

TEST(Isolation, DoubleRootCollapses) {
  const IntPolynomial p{1, -2, 1};
  EXPECT_EQ(squarefree_part(p).degree(), 1);
  const auto iv = isolate_roots(p);
  ASSERT_EQ(iv.size(), 1u);
  EXPECT_TRUE(iv[0].contains(Rational(1)));
}

TEST(Isolation, RationalRoot) {
  const auto iv = isolate_roots(IntPolynomial{-3, 2});
  ASSERT_EQ(iv.size(), 1u);
  EXPECT_TRUE(iv[0].contains(Rational(3, 2)));
}

TEST(NumberField, RejectsBadIntervals) {
  EXPECT_THROW(intern_field(IntPolynomial{-2, 0, 1}, Rational(-2), Rational(2)), std::invalid_argument);
  EXPECT_THROW(intern_field(IntPolynomial{-2, 0, 1}, Rational(2), Rational(3)), std::invalid_argument);
  EXPECT_THROW(intern_field(IntPolynomial{1, -2, 1}, Rational(0), Rational(2)), std::invalid_argument);
}

TEST(NumberField, IntervalsShrinkAroundTheRoot) {
  auto f = sqrt2_field();
  for (unsigned bits : {64u, 100u, 200u}) {
    auto [a, b] = f->interval(bits);
    EXPECT_LE(a * a, 2);
    EXPECT_GE(b * b, 2);
    EXPECT_LE(Rational(b - a), Rational(1, 1) / Rational(Integer(1) << bits));
  }
}

TEST(Scalar, Signs) {
  auto f = sqrt2_field();
  const Scalar t = Scalar::generator(f);
  EXPECT_EQ((t - Scalar(3, 2)).sign(), -1);
  EXPECT_EQ((t * t - Scalar(2)).sign(), 0);
  EXPECT_EQ(Scalar(5, 3).sign(), 1);
  // Close to the root: √2 − 141421356/10^8 > 0.
  EXPECT_EQ((t - Scalar(Rational(141421356, 100000000))).sign(), 1);
  EXPECT_EQ((t - Scalar(Rational(141421357, 100000000))).sign(), -1);
}

TEST(Scalar, FieldArithmetic) {
  auto f = sqrt2_field();
  const Scalar t = Scalar::generator(f);
  EXPECT_EQ(t * t, Scalar(2));
  EXPECT_TRUE((t * t).is_rational());
  EXPECT_EQ((Scalar(1) + t).inverse(), t - Scalar(1));
  EXPECT_EQ(Scalar(2, 3) + Scalar(1, 6), Scalar(5, 6));
  EXPECT_EQ(t / t, Scalar(1));
  EXPECT_THROW(Scalar(0).inverse(), std::domain_error);
}

TEST(Scalar, CubicField) {
  // θ = 2^(1/3): θ³ = 2, (θ² + θ + 1)(θ − 1) = 1.
  auto f = intern_field(IntPolynomial{-2, 0, 0, 1}, Rational(1), Rational(2));
  const Scalar t = Scalar::generator(f);
  EXPECT_EQ(t * t * t, Scalar(2));
  EXPECT_EQ((t * t + t + Scalar(1)) * (t - Scalar(1)), Scalar(1));
  EXPECT_NEAR(t.to_double(), std::cbrt(2.0), 1e-12);
}

TEST(Scalar, MixingFieldsThrows) {
  const Scalar a = Scalar::generator(sqrt2_field());
  const Scalar b = Scalar::generator(intern_field(IntPolynomial{-3, 0, 1}, Rational(1), Rational(2)));
  EXPECT_THROW(a + b, std::invalid_argument);
}

TEST(Scalar, TextRoundTrip) {
  auto f = sqrt2_field();
  const Scalar t = Scalar::generator(f);
  for (const Scalar& s : {Scalar(0), Scalar(-7, 3), t, (Scalar(1) + t) / Scalar(3), Scalar(1) - Scalar(5) * t}) {
    const Scalar back = parse_scalar(s.to_string());
    EXPECT_EQ(back, s) << s.to_string();
    EXPECT_EQ(back.to_string(), s.to_string());
  }
  EXPECT_EQ(parse_scalar("0.125"), Scalar(1, 8));
  EXPECT_EQ(parse_scalar("-3/6"), Scalar(-1, 2));
  EXPECT_THROW(parse_scalar("1/0"), std::domain_error);
  EXPECT_THROW(parse_scalar("abc"), std::invalid_argument);
}

TEST(Scalar, EnclosureContainsValue) {
  auto f = sqrt2_field();
  const Scalar s = Scalar(3) * Scalar::generator(f) - Scalar(1, 7);
  auto [lo, hi] = s.enclosure(80);
  const double v = 3 * std::sqrt(2.0) - 1.0 / 7;
  EXPECT_LE(lo.get_d(), v + 1e-15);
  EXPECT_GE(hi.get_d(), v - 1e-15);
  EXPECT_LT(Rational(hi - lo).get_d(), 1e-20);
}
