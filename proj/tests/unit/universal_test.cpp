// Lawrence extensions, face verification, subdirect cones, the universal pipeline.

#include <gtest/gtest.h>

#include "projuniq/universal.hpp"

using namespace projuniq;

namespace {

Point P(std::initializer_list<long> xs) {
  Point p;
  for (long x : xs) p.emplace_back(x);
  return p;
}

PPConfiguration tetra_plus(std::initializer_list<Point> free) {
  PPConfiguration pp{standard_simplex(3).vertices, PointConfiguration(3)};
  int i = 0;
  for (const auto& r : free) pp.free_points.insert("r" + std::to_string(i++), r);
  return pp;
}

// Oracle: a·x + a0 evaluated on dense coordinates, independent of the sparse path.
int dense_side(const Point& x, const std::vector<Scalar>& eq) {
  Scalar s = eq.back();
  for (std::size_t j = 0; j < x.size(); ++j) s += eq[j] * x[j];
  return s.sign();
}

}  // namespace

TEST(Lawrence, TetraPlusOnePoint) {
  const PPConfiguration pp = tetra_plus({P({1, 1, 1})});
  const Polytope L = lawrence_extension(pp);
  EXPECT_EQ(L.dim, 4);
  EXPECT_EQ(L.num_vertices(), 6u);
  // P × {0} is a face, cut out by the last coordinate.
  const auto coords = lawrence_coordinates(pp);
  std::vector<Scalar> eq(5, Scalar(0));
  eq[3] = Scalar(1);
  EXPECT_TRUE(verify_face(coords, coords.base_labels, eq));
  EXPECT_TRUE(is_face(L, coords.base_labels));
}

TEST(Lawrence, TrianglePlusTwoPoints) {
  PPConfiguration pp{PointConfiguration(2), PointConfiguration(2)};
  pp.vertices.insert("a", P({0, 0}));
  pp.vertices.insert("b", P({1, 0}));
  pp.vertices.insert("c", P({0, 1}));
  pp.free_points.insert("r", P({2, 2}));
  pp.free_points.insert("s", P({-1, 3}));
  const Polytope L = lawrence_extension(pp);
  EXPECT_EQ(L.dim, 4);
  EXPECT_EQ(L.num_vertices(), 7u);
  EXPECT_TRUE(is_face(L, {"a", "b", "c"}));
}

TEST(Lawrence, EmptyFreeSetLeavesPolytope) {
  PPConfiguration pp{standard_simplex(3).vertices, PointConfiguration(3)};
  const Polytope L = lawrence_extension(pp);
  EXPECT_EQ(f_vector(L), f_vector(standard_simplex(3)));
}

TEST(Lawrence, RejectsInteriorFreePoint) {
  EXPECT_THROW(lawrence_extension(tetra_plus({{Scalar(1, 8), Scalar(1, 8), Scalar(1, 8)}})), std::invalid_argument);
}

TEST(Lawrence, DimensionAndVertexFormulaOnRandomInputs) {
  Rng rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t nr = static_cast<std::size_t>(rng.uniform_int(1, 3));
    PPConfiguration pp = tetra_plus({});
    for (std::size_t i = 0; i < nr; ++i)
      pp.free_points.insert("r" + std::to_string(i), P({rng.uniform_int(2, 6), rng.uniform_int(-5, 5), rng.uniform_int(-5, 5)}));
    const Polytope L = lawrence_extension(pp);
    EXPECT_EQ(L.dim, static_cast<int>(3 + pp.free_points.size()));
    EXPECT_EQ(L.num_vertices(), 4 + 2 * pp.free_points.size());
  }
}

TEST(VerifyFace, CubeExamples) {
  const Polytope C = convex_hull(qd(3));
  std::vector<std::string> top, edge;
  for (const auto& l : C.labels()) {
    if (C.at(l)[2] == Scalar(1)) top.push_back(l);
    if (C.at(l)[0] == Scalar(1) && C.at(l)[1] == Scalar(1)) edge.push_back(l);
  }
  const Flat z1 = Flat::from_equations({{Scalar(0), Scalar(0), Scalar(1), Scalar(-1)}}, 3);
  EXPECT_TRUE(verify_face(C, top, z1));
  // The plane x + y = 2 supports the edge x = y = 1.
  const Flat xy = Flat::from_equations({{Scalar(1), Scalar(1), Scalar(0), Scalar(-2)}}, 3);
  EXPECT_TRUE(verify_face(C, edge, xy));
  // z = 0 cuts through the cube.
  const Flat z0 = Flat::from_equations({{Scalar(0), Scalar(0), Scalar(1), Scalar(0)}}, 3);
  EXPECT_FALSE(verify_face(C, {}, z0));
  // Claiming too few points of the face fails.
  EXPECT_FALSE(verify_face(C, {top[0], top[1]}, z1));
}

TEST(Triple, TetraCountsAndCertificate) {
  const WeakProjectiveTriple t = build_triple(standard_simplex(3));
  EXPECT_EQ(t.Q.size(), 4u);
  EXPECT_EQ(t.K.size(), t.Q.size() + t.R.size());
  const auto chk = check_certificate(t.K, t.certificate);
  EXPECT_TRUE(chk) << chk.reason;
  // P sits in the open cube (0,2)^3.
  for (const auto& l : t.P.labels())
    for (const auto& x : t.P.at(l)) EXPECT_TRUE(Scalar(0) < x && x < Scalar(2));
  // The wedge hyperplane is spanned by points of R.
  for (const auto& l : t.wedge_labels) EXPECT_TRUE(t.R.contains(l));
}

TEST(Subdirect, BaseProjectivelyEquivalentToP) {
  // Random rational 3-polytopes: the base face of the cone is a projective image of P.
  Rng rng(17);
  for (int trial = 0; trial < 3; ++trial) {
    PointConfiguration c(3);
    for (int i = 0; i < 6; ++i)
      c.insert("p" + std::to_string(i), P({rng.uniform_int(0, 6), rng.uniform_int(0, 6), rng.uniform_int(0, 6)}));
    const Polytope in = convex_hull(c);
    if (in.dim != 3) continue;
    const WeakProjectiveTriple t = build_triple(in);
    const SubdirectCone cone = subdirect_cone(t);
    EXPECT_EQ(cone.pyramid.num_vertices(), t.P.num_vertices() + 1);
    std::vector<HPoint> src, dst;
    for (const auto& l : cone.base_labels) {
      Point b = cone.pyramid.at(l);
      // Every base point lies on the cut hyperplane.
      Scalar s = cone.cut.back();
      for (std::size_t j = 0; j < b.size(); ++j) s += cone.cut[j] * b[j];
      EXPECT_TRUE(s.is_zero());
      b.pop_back();
      src.push_back(HPoint::from_affine(b));
      dst.push_back(HPoint::from_affine(t.P.at(l)));
    }
    const auto m = find_projective_map(src, dst);
    ASSERT_EQ(m.status, MapStatus::found);
    for (std::size_t i = 0; i < src.size(); ++i) EXPECT_EQ(m.map->apply(src[i]), dst[i]);
  }
}

TEST(Universal, TetraPipeline) {
  const Polytope T = standard_simplex(3);
  const UniversalResult u = universal_polytope(T);
  // #R read back from the provenance log.
  std::size_t r_from_log = 0;
  for (const auto& e : u.provenance)
    if (auto it = e.data.find("R"); it != e.data.end()) r_from_log = std::stoul(it->second);
  ASSERT_GT(r_from_log, 0u);
  EXPECT_EQ(r_from_log, u.num_R);
  EXPECT_EQ(u.num_Q, 4u);
  EXPECT_EQ(u.dimension, 3 + u.num_Q + u.num_R + 1);
  EXPECT_EQ(u.vertex_count, 4 + 2 * (u.num_Q + u.num_R) + 1);
  EXPECT_TRUE(u.base_face_verified);
  ASSERT_TRUE(u.base_to_input.has_value());
  // Dense re-check of the base face.
  const auto& L = u.polytope;
  std::set<std::string> face(u.base_face_labels.begin(), u.base_face_labels.end());
  int side = 0;
  for (std::size_t i = 0; i < L.vertices.size(); ++i) {
    const int s = dense_side(L.dense(i), u.base_hyperplane);
    if (face.count(L.labels[i])) {
      EXPECT_EQ(s, 0);
    } else {
      EXPECT_NE(s, 0);
      if (side) EXPECT_EQ(s, side);
      side = s;
    }
  }
  for (const auto& l : u.base_face_labels) {
    Point b = u.cone.pyramid.at(l);
    b.pop_back();
    EXPECT_EQ(u.base_to_input->apply(HPoint::from_affine(b)), HPoint::from_affine(T.at(l)));
  }
}
