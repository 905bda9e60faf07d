// Projective points, flats, joins/meets and map solving.

#include <gtest/gtest.h>

#include "projuniq/projgeom.hpp"
#include "projuniq/random.hpp"

using namespace projuniq;

namespace {

HPoint A(std::initializer_list<long> xs) {
  Point p;
  for (long x : xs) p.emplace_back(x);
  return HPoint::from_affine(p);
}

HPoint H(std::initializer_list<long> xs) {
  std::vector<Scalar> c;
  for (long x : xs) c.emplace_back(x);
  return HPoint(c);
}

}  // namespace

TEST(HPoint, ScaleInvariantEquality) {
  EXPECT_EQ(H({2, 4, 6, 2}), H({1, 2, 3, 1}));
  EXPECT_EQ(H({-1, -2, -3, -1}), H({1, 2, 3, 1}));
  EXPECT_NE(H({1, 2, 3, 1}), H({1, 2, 4, 1}));
  EXPECT_FALSE(H({1, 0, 0}).is_finite());
  EXPECT_EQ(H({2, 4, 2}).affine(), (Point{Scalar(1), Scalar(2)}));
}

TEST(Join, LineThroughTwoPoints) {
  const Flat L = join(A({1, 0, 0}), A({-1, 0, 0}));
  EXPECT_EQ(L.dim(), 1);
  EXPECT_TRUE(L.contains(A({0, 0, 0})));
  EXPECT_TRUE(L.contains(A({5, 0, 0})));
  EXPECT_FALSE(L.contains(A({0, 1, 0})));
}

TEST(Join, ThreePointsSpanPlane) {
  const Flat P = join(std::vector<HPoint>{A({1, 0, 0}), A({0, 1, 0}), A({0, 0, 1})});
  EXPECT_EQ(P.dim(), 2);
  EXPECT_TRUE(P.contains(A({1, 1, -1})));
}

TEST(Join, CubeDiagonal) {
  const Flat D = join(A({1, 1, 1}), A({1, -1, -1}));
  EXPECT_EQ(D.dim(), 1);
  EXPECT_TRUE(D.contains(A({1, 0, 0})));
}

TEST(Meet, FacetDiagonalsOfCube) {
  // Diagonals of the x = 1 facet meet in its center (1,0,0).
  const Flat d1 = join(A({1, 1, 1}), A({1, -1, -1}));
  const Flat d2 = join(A({1, 1, -1}), A({1, -1, 1}));
  const Flat m = meet(d1, d2);
  ASSERT_TRUE(m.is_point());
  EXPECT_EQ(m.point(), A({1, 0, 0}));
}

TEST(Meet, TwoPlanesGiveLine) {
  const Flat p1 = Flat::from_equations({{Scalar(1), Scalar(0), Scalar(0), Scalar(0)}}, 3);
  const Flat p2 = Flat::from_equations({{Scalar(0), Scalar(1), Scalar(1), Scalar(-1)}}, 3);
  EXPECT_EQ(meet(p1, p2).dim(), 1);
}

TEST(Meet, ParallelLinesMeetAtInfinity) {
  const Flat x0 = join(A({0, 0}), A({0, 1}));
  const Flat x1 = join(A({1, 0}), A({1, 1}));
  const Flat m = meet(x0, x1);
  ASSERT_TRUE(m.is_point());
  EXPECT_FALSE(m.point().is_finite());
  EXPECT_EQ(m.point(), H({0, 1, 0}));
}

TEST(ProjectiveMap, IdentityOnStandardBasis) {
  std::vector<HPoint> b{H({1, 0, 0, 0}), H({0, 1, 0, 0}), H({0, 0, 1, 0}), H({0, 0, 0, 1}), H({1, 1, 1, 1})};
  auto r = find_projective_map(b, b);
  ASSERT_EQ(r.status, MapStatus::found);
  for (const auto& p : {H({3, 1, 4, 1}), H({2, 7, 1, 8})}) EXPECT_EQ(r.map->apply(p), p);
}

TEST(ProjectiveMap, RecoversKnownSkew) {
  // Apply a known matrix to square + center, solve back, compare up to scale.
  const Matrix<Scalar> T{{Scalar(2), Scalar(1), Scalar(0)}, {Scalar(0), Scalar(1), Scalar(1)}, {Scalar(1), Scalar(0), Scalar(3)}};
  const ProjectiveMap M(T);
  std::vector<HPoint> src{A({0, 0}), A({1, 0}), A({1, 1}), A({0, 1}), A({1, 2})};
  std::vector<HPoint> dst;
  for (const auto& s : src) dst.push_back(M.apply(s));
  auto r = find_projective_map(src, dst);
  ASSERT_EQ(r.status, MapStatus::found);
  const auto& m = r.map->matrix();
  const Scalar k = m[0][0] / T[0][0];
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(m[i][j], k * T[i][j]);
}

TEST(ProjectiveMap, InconsistentTargetGivesNone) {
  std::vector<HPoint> src{A({0, 0}), A({1, 0}), A({0, 1}), A({1, 1}), A({2, 3})};
  std::vector<HPoint> dst = src;
  dst[4] = A({2, 4});  // the fifth point is determined by the first four
  EXPECT_EQ(find_projective_map(src, dst).status, MapStatus::none);
}

TEST(ProjectiveMap, DegenerateSourceIsAmbiguous) {
  std::vector<HPoint> src{A({0, 0}), A({1, 0}), A({2, 0})};
  EXPECT_EQ(find_projective_map(src, src).status, MapStatus::ambiguous);
}

TEST(ProjectiveMap, RandomMapsPreserveIncidence) {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix<Scalar> T(3, std::vector<Scalar>(3));
    for (auto& row : T)
      for (auto& x : row) x = Scalar(rng.uniform_rational(9, 4));
    const ProjectiveMap M(T);
    if (M.determinant().is_zero()) continue;
    const HPoint a = A({0, 0}), b = A({1, 1}), c = A({2, 2}), d = A({0, 1});
    EXPECT_TRUE(join(M.apply(a), M.apply(b)).contains(M.apply(c)));
    EXPECT_FALSE(join(M.apply(a), M.apply(b)).contains(M.apply(d)));
  }
}

TEST(ProjectiveBasis, Examples) {
  EXPECT_TRUE(is_projective_basis({A({1, 1, 1}), A({1, -1, -1}), A({-1, 1, -1}), A({-1, -1, 1}), A({0, 0, 0})}));
  EXPECT_FALSE(is_projective_basis({A({0, 0, 0}), A({1, 0, 0}), A({0, 1, 0}), A({1, 1, 0}), A({0, 0, 1})}));
  // Standard simplex plus barycenter.
  std::vector<HPoint> s{A({0, 0, 0}), A({1, 0, 0}), A({0, 1, 0}), A({0, 0, 1})};
  s.push_back(HPoint::from_affine({Scalar(1, 4), Scalar(1, 4), Scalar(1, 4)}));
  EXPECT_TRUE(is_projective_basis(s));
}
