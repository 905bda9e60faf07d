// Hausdorff distance to the ball, the bound functions, ball approximations
// and the randomized lemma checks.

#include <gtest/gtest.h>

#include <cmath>

#include "projuniq/shephard.hpp"

using namespace projuniq;

namespace {

Polytope octahedron() {
  PointConfiguration c(3);
  for (std::size_t i = 0; i < 3; ++i)
    for (long s : {1L, -1L}) {
      Point p(3, Scalar(0));
      p[i] = Scalar(s);
      c.insert(std::string(s > 0 ? "+" : "-") + std::to_string(i), p);
    }
  return convex_hull(c);
}

Rational two_pow(int e) {
  Rational r(1);
  for (int i = 0; i < std::abs(e); ++i) r *= 2;
  return e >= 0 ? r : Rational(1) / r;
}

void expect_encloses(const DistanceEnclosure& e, double value) {
  EXPECT_LE(e.lower.get_d(), value + 1e-15);
  EXPECT_GE(e.upper.get_d(), value - 1e-15);
  EXPECT_LE(e.lower, e.upper);
}

}  // namespace

TEST(Hausdorff, Cube) {
  const auto e = hausdorff_to_ball(convex_hull(qd(3)));
  expect_encloses(e, std::sqrt(3.0) - 1);
  EXPECT_LT(Rational(e.upper - e.lower).get_d(), 1e-15);
}

TEST(Hausdorff, Octahedron) {
  const auto e = hausdorff_to_ball(octahedron());
  expect_encloses(e, 1 - 1 / std::sqrt(3.0));
}

TEST(Hausdorff, EnclosuresNestAsPrecisionGrows) {
  const Polytope C = convex_hull(qd(3));
  const auto coarse = hausdorff_to_ball(C, 16), fine = hausdorff_to_ball(C, 64);
  EXPECT_LE(coarse.lower, fine.lower);
  EXPECT_GE(coarse.upper, fine.upper);
}

TEST(Hausdorff, RequiresInteriorOrigin) {
  EXPECT_THROW(hausdorff_to_ball(standard_simplex(3)), std::invalid_argument);
}

TEST(Bounds, VertexNorm) {
  // Oracle: the closed form at ε = 1/36 where √ε = 1/6 is exact.
  const Rational e(1, 36), r(1, 6);
  EXPECT_EQ(vertex_norm_bound(e), Rational((1 + e) * (1 - e) / (1 - e - 2 * r)));
  EXPECT_EQ(vertex_norm_bound(e), Rational(1295, 828));
  const double tiny = vertex_norm_bound(Rational(1, 100000000)).get_d();
  EXPECT_GT(tiny, 1.0);
  EXPECT_NEAR(tiny, 1.0, 3e-4);
  EXPECT_THROW(vertex_norm_bound(Rational(1, 4)), std::invalid_argument);
  EXPECT_THROW(vertex_norm_bound(Rational(0)), std::invalid_argument);
  // The simplified form dominates the sharp one.
  for (const Rational& x : {Rational(1, 36), Rational(1, 100), Rational(1, 10000)})
    EXPECT_GE(simple_vertex_norm_bound(x), vertex_norm_bound(x));
}

TEST(Bounds, ShephardAndKStacked) {
  EXPECT_EQ(shephard_bound(4), two_pow(-26) / 9);
  EXPECT_EQ(shephard_bound(6), two_pow(-34) / 9);
  for (long k = 4; k < 12; ++k) EXPECT_GT(shephard_bound(k), shephard_bound(k + 1));
  EXPECT_THROW(shephard_bound(3), std::invalid_argument);
  EXPECT_EQ(kstacked_bound(6), two_pow(-16));
  EXPECT_EQ(kstacked_bound(4), two_pow(-12));
}

TEST(Sphere, RationalPointsLieOnSphere) {
  for (const auto& p : {round_to_sphere(0.3, -0.4, 0.866), round_to_sphere(0, 0, -1), round_to_sphere(1, 0, 0)}) {
    Scalar s(0);
    for (const auto& x : p) s += x * x;
    EXPECT_EQ(s, Scalar(1));
  }
}

TEST(BallApprox, FeasibleAtOneTwentieth) {
  const auto b = ball_approx(3, Rational(1, 20), 1);
  ASSERT_TRUE(b.feasible) << b.reason;
  ASSERT_TRUE(b.polytope.has_value());
  EXPECT_LE(b.enclosure.upper, Rational(1, 20));
  // Independent re-check of the enclosure on the returned polytope.
  EXPECT_LE(hausdorff_to_ball(*b.polytope).upper, Rational(1, 20));
}

TEST(BallApprox, InfeasibleAtShephardScale) {
  const auto b = ball_approx(3, shephard_bound(6), 1);
  EXPECT_FALSE(b.feasible);
  EXPECT_FALSE(b.reason.empty());
  EXPECT_EQ(b.vertex_estimate, Rational(233706350444544, 625));
  EXPECT_FALSE(ball_approx(4, Rational(1, 20), 1).feasible);
}

TEST(Lemma, SupersetsStayWithinBound) {
  const auto b = ball_approx(3, Rational(1, 100), 3);
  ASSERT_TRUE(b.feasible);
  const auto rep = check_subpolytope_lemma(*b.polytope, Rational(1, 100), 4, 5);
  EXPECT_TRUE(rep.pass) << rep.failure;
  EXPECT_EQ(rep.bound, Rational(3, 5));
  EXPECT_EQ(rep.per_trial.size(), 4u);
  for (const auto& e : rep.per_trial) EXPECT_LE(e.upper, Rational(3, 5));
  EXPECT_LE(rep.max_ratio, 1.0);
  EXPECT_THROW(check_subpolytope_lemma(*b.polytope, Rational(1, 10), 1, 1), std::invalid_argument);
}

TEST(Lemma, Contrapositive) {
  // The octahedron is farther than 2/5 from the ball, so subsets stay above (2/5)²/36.
  const auto rep = check_contrapositive(octahedron(), Rational(2, 5), 10, 2);
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.threshold, Rational(1, 225));
  EXPECT_GT(rep.min_lower, rep.threshold);
  // Hypothesis not met: nothing is claimed.
  EXPECT_FALSE(check_contrapositive(octahedron(), Rational(1, 2), 10, 2).pass);
}

TEST(KStacked, LowerBoundHolds) {
  const auto rep = check_kstacked_lower_bound(3, 4, 5, 9);
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.per_sample.size(), 5u);
  EXPECT_TRUE(rep.sperner_ok);
  EXPECT_GE(rep.min_lower, two_pow(-12));
}

TEST(Sections, RecipeFacetsStayBounded) {
  const auto [S, r] = kstacked_generator(3, 6, 3, 4);
  Point c(3, Scalar(0));
  for (const auto& l : S.labels())
    for (std::size_t j = 0; j < 3; ++j) c[j] += S.at(l)[j];
  for (auto& x : c) x /= Scalar(static_cast<long>(S.num_vertices()));
  // Plane x_3 = c_3 through the vertex centroid.
  const Flat H = Flat::from_equations({{Scalar(0), Scalar(0), Scalar(1), -c[2]}}, 3);
  const auto [sec, rr] = section_recipe(S, r, H);
  EXPECT_EQ(sec.dim, 2);
  EXPECT_EQ(rr.d, 2u);
  for (const auto& s : rr.summands) EXPECT_LE(s.facets, 6u);
  const auto rep = check_ratsub(5, 12);
  EXPECT_TRUE(rep.pass) << rep.failure;
  EXPECT_GT(rep.sections, 0u);
}
