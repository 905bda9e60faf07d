// Arithmetic gadgets, functional arrangements and coordinate configurations.

#include <gtest/gtest.h>

#include <cmath>

#include "projuniq/io/expr.hpp"
#include "projuniq/vonstaudt.hpp"

using namespace projuniq;

namespace {

Scalar sqrt2() { return Scalar::generator(intern_field(IntPolynomial{-2, 0, 1}, Rational(1), Rational(2))); }

// Every point of the arrangement is in the frame or derived by the certificate.
bool covers(const PointConfiguration& c, const DerivationCertificate& cert) {
  std::set<std::string> got;
  for (const auto& f : cert.frame) got.insert(c.resolve(f));
  for (const auto& l : cert.derived()) got.insert(c.resolve(l));
  return got.size() == c.size();
}

void expect_sound(const FunctionalArrangement& fa) {
  const auto chk = check_certificate(fa.config, fa.certificate);
  EXPECT_TRUE(chk) << chk.reason;
  EXPECT_TRUE(covers(fa.config, fa.certificate));
  // The grid {0,1,2}² is always present.
  for (long x = 0; x <= 2; ++x)
    for (long y = 0; y <= 2; ++y) EXPECT_TRUE(fa.config.find({Scalar(x), Scalar(y)}).has_value());
}

}  // namespace

TEST(Gadgets, RationalExamples) {
  // Oracle: GMP rational arithmetic on the raw inputs.
  const Rational a(3, 2), b(-2, 5);
  const std::pair<FunctionalArrangement, Rational> cases[] = {{add_gadget(Scalar(a), Scalar(b)), a + b},
                                                               {mlt_gadget(Scalar(a), Scalar(b)), a * b},
                                                               {sub_gadget(Scalar(a), Scalar(b)), a - b},
                                                               {div_gadget(Scalar(a), Scalar(b)), a / b}};
  for (const auto& [fa, want] : cases) {
    EXPECT_EQ(output_point(fa), (Point{Scalar(want), Scalar(0)}));
    EXPECT_EQ(fa.value, Scalar(want));
    expect_sound(fa);
  }
  EXPECT_THROW(div_gadget(Scalar(1), Scalar(0)), std::domain_error);
}

TEST(Gadgets, AddTwoThree) {
  const auto fa = add_gadget(Scalar(2), Scalar(3));
  EXPECT_EQ(output_point(fa), (Point{Scalar(5), Scalar(0)}));
  EXPECT_EQ(fa.input_labels.size(), 2u);
  EXPECT_EQ(fa.grid_labels.size(), 9u);
  expect_sound(fa);
}

TEST(Gadgets, OverQuadraticField) {
  const Scalar t = sqrt2();
  EXPECT_EQ(output_point(mlt_gadget(t, t))[0], Scalar(2));
  EXPECT_EQ(output_point(add_gadget(t, Scalar(1)))[0], t + Scalar(1));
  EXPECT_EQ(output_point(sub_gadget(Scalar(0), t))[0], -t);
  EXPECT_EQ(output_point(div_gadget(Scalar(1), t))[0], t / Scalar(2));
  expect_sound(div_gadget(Scalar(1), t));
}

TEST(Gadgets, SeededBatch) {
  const auto rep = check_gadgets(25, 11);
  EXPECT_TRUE(rep.pass) << rep.witness;
  EXPECT_EQ(rep.checked, 100u);
}

TEST(Template, CompileXSquaredMinusTwo) {
  const ArrangementTemplate t = compile_polynomial(io::parse_polynomial("x^2 - 2"));
  EXPECT_EQ(t.nodes.size(), 3u);  // x·x, 1+1, x² − 2
  for (long x = -4; x <= 4; ++x) EXPECT_EQ(evaluate(t, {Scalar(x)}), Scalar(x * x - 2));
}

TEST(Template, RandomPolynomialsMatchHorner) {
  // Oracle: direct evaluation of the coefficient list.
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<long> cs;
    const int deg = static_cast<int>(rng.uniform_int(0, 4));
    for (int k = 0; k <= deg; ++k) cs.push_back(rng.uniform_int(-6, 6));
    if (cs.back() == 0) cs.back() = 1;
    IntPolynomial p(std::vector<Integer>(cs.begin(), cs.end()));
    const ArrangementTemplate t = compile_polynomial(p);
    for (const Rational& x : {Rational(0), Rational(1), Rational(-3, 2), Rational(7, 3)}) {
      Rational want(0);
      for (auto it = cs.rbegin(); it != cs.rend(); ++it) want = want * x + Rational(*it);
      EXPECT_EQ(evaluate(t, {Scalar(x)}), Scalar(want));
    }
  }
}

TEST(Template, ComposeMatchesDirectCompilation) {
  // (x + 1) + 1 against x + 2 at x = 5.
  const ArrangementTemplate inc{1, {{GadgetOp::add, Ref::ext(0), Ref::constant1()}}, Ref::of(0)};
  const ArrangementTemplate twice = compose(inc, inc, Wiring{0, {}});
  const ArrangementTemplate direct = compile_polynomial(IntPolynomial{2, 1});
  EXPECT_EQ(evaluate(twice, {Scalar(5)}), Scalar(7));
  EXPECT_EQ(evaluate(direct, {Scalar(5)}), Scalar(7));
  const auto a = instantiate(twice, {Scalar(5)});
  const auto b = instantiate(direct, {Scalar(5)});
  EXPECT_EQ(output_point(a), output_point(b));
  expect_sound(a);
  expect_sound(b);
}

TEST(Template, RejectsForwardReferences) {
  const ArrangementTemplate bad{1, {{GadgetOp::add, Ref::of(0), Ref::ext(0)}}, Ref::of(0)};
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  const ArrangementTemplate ext{1, {{GadgetOp::add, Ref::ext(3), Ref::ext(0)}}, Ref::of(0)};
  EXPECT_THROW(ext.validate(), std::invalid_argument);
}

TEST(Functional, XSquaredMinusTwo) {
  const ArrangementTemplate t = compile_polynomial(io::parse_polynomial("x^2-2"));
  const auto at3 = instantiate(t, {Scalar(3)});
  EXPECT_EQ(output_point(at3), (Point{Scalar(7), Scalar(0)}));
  expect_sound(at3);
  const auto at_root = instantiate(t, {sqrt2()});
  EXPECT_EQ(output_point(at_root), (Point{Scalar(0), Scalar(0)}));
  expect_sound(at_root);
}

TEST(Functional, ZeroPolynomial) {
  const ArrangementTemplate t = compile_polynomial(IntPolynomial{});
  EXPECT_TRUE(t.nodes.empty());
  EXPECT_EQ(evaluate(t, {Scalar(9)}), Scalar(0));
}

TEST(Functional, InverseModeDerivesInputFromGrid) {
  // 2x − 3 = 0 at x = 3/2: only the grid is given.
  const auto fa = instantiate(compile_polynomial(IntPolynomial{-3, 2}), {Scalar(3, 2)}, DeriveMode::inverse);
  expect_sound(fa);
  for (const auto& f : fa.certificate.frame)
    EXPECT_NE(std::find(fa.grid_labels.begin(), fa.grid_labels.end(), f), fa.grid_labels.end()) << f;
}

TEST(MinimalPolynomial, Examples) {
  EXPECT_EQ(minimal_polynomial(sqrt2()), (IntPolynomial{-2, 0, 1}));
  EXPECT_EQ(minimal_polynomial(Scalar(3, 2)), (IntPolynomial{-3, 2}));
  EXPECT_EQ(minimal_polynomial(sqrt2() + Scalar(1)), (IntPolynomial{-1, -2, 1}));
}

TEST(CoorScalar, SquareRootOfTwo) {
  const CoorScalar cs = coor_scalar(sqrt2());
  EXPECT_EQ(cs.sturm_count, 1);
  ASSERT_TRUE(cs.guard.has_value());
  EXPECT_LE(cs.guard->lo, Rational(141, 100));
  EXPECT_GE(cs.guard->hi, Rational(71, 50));
  // Independent count: x² − 2 has exactly one root in the guard.
  const double lo = cs.guard->lo.get_d(), hi = cs.guard->hi.get_d();
  EXPECT_TRUE(lo > -std::sqrt(2.0) && lo < std::sqrt(2.0) && hi > std::sqrt(2.0));
  EXPECT_EQ(cs.config.at(cs.zeta_label), (Point{sqrt2(), Scalar(0)}));
  const auto chk = check_certificate(cs.config, cs.certificate);
  EXPECT_TRUE(chk) << chk.reason;
  EXPECT_TRUE(covers(cs.config, cs.certificate));
  // The guards appear as points on the x-axis.
  EXPECT_TRUE(cs.config.find({Scalar(cs.guard->lo), Scalar(0)}).has_value());
  EXPECT_TRUE(cs.config.find({Scalar(cs.guard->hi), Scalar(0)}).has_value());
}

TEST(CoorScalar, RationalValues) {
  for (const Scalar& z : {Scalar(3, 2), Scalar(1), Scalar(7, 3)}) {
    const CoorScalar cs = coor_scalar(z);
    EXPECT_FALSE(cs.guard.has_value());
    EXPECT_EQ(cs.config.at(cs.zeta_label), (Point{z, Scalar(0)}));
    EXPECT_TRUE(check_certificate(cs.config, cs.certificate));
    EXPECT_TRUE(covers(cs.config, cs.certificate));
    // Rational coordinates need nothing beyond the grid.
    for (const auto& f : cs.certificate.frame)
      EXPECT_NE(std::find(cs.grid_labels.begin(), cs.grid_labels.end(), f), cs.grid_labels.end());
  }
}

TEST(CoorScalar, WrongPolynomialRejected) {
  EXPECT_THROW(coor_scalar(sqrt2(), IntPolynomial{-3, 0, 1}), std::invalid_argument);
}

TEST(CoorPoint, IrrationalPoint) {
  const Point z{sqrt2(), Scalar(1), Scalar(1)};
  const CoorPoint cp = coor_point(z);
  EXPECT_EQ(cp.config.at(cp.zeta_label), z);
  EXPECT_TRUE(cp.config.find({sqrt2(), Scalar(0), Scalar(0)}).has_value());
  const auto chk = check_certificate(cp.config, cp.certificate);
  EXPECT_TRUE(chk) << chk.reason;
  EXPECT_TRUE(covers(cp.config, cp.certificate));
  EXPECT_EQ(cp.pieces.size(), 6u);
}

TEST(CoorPoint, RationalPointHasRationalFrame) {
  const CoorPoint cp = coor_point({Scalar(1), Scalar(1), Scalar(1)});
  EXPECT_TRUE(check_certificate(cp.config, cp.certificate));
  EXPECT_TRUE(covers(cp.config, cp.certificate));
  for (const auto& f : cp.certificate.frame)
    for (const auto& x : cp.config.at(f)) EXPECT_TRUE(x.is_rational());
  EXPECT_THROW(coor_point({Scalar(1), Scalar(0), Scalar(1)}), std::invalid_argument);
  EXPECT_THROW(coor_point({Scalar(1), Scalar(1)}), std::invalid_argument);
}
