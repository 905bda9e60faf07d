// Point configurations, standard configurations, chirotopes, Lawrence equivalence.

#include <gtest/gtest.h>

#include "projuniq/config.hpp"
#include "projuniq/random.hpp"

using namespace projuniq;

namespace {

Point P(std::initializer_list<long> xs) {
  Point p;
  for (long x : xs) p.emplace_back(x);
  return p;
}

bool in_unit_lattice(const Point& p) {
  for (const auto& x : p)
    if (!(x == Scalar(-1) || x == Scalar(0) || x == Scalar(1))) return false;
  return true;
}

}  // namespace

TEST(PointConfiguration, DuplicatePointBecomesAlias) {
  PointConfiguration c(2);
  EXPECT_EQ(c.insert("a", P({1, 2})), "a");
  EXPECT_EQ(c.insert("b", P({1, 2})), "a");
  EXPECT_EQ(c.size(), 1u);
  EXPECT_EQ(c.resolve("b"), "a");
  EXPECT_THROW(c.insert("a", P({0, 0})), std::invalid_argument);
  EXPECT_THROW(c.insert("c", P({0, 0, 0})), std::invalid_argument);
  EXPECT_THROW(c.resolve("zzz"), std::out_of_range);
}

TEST(StandardConfigs, QdCounts) {
  EXPECT_EQ(qd(1).size(), 3u);
  EXPECT_EQ(qd(2).size(), 9u);
  EXPECT_EQ(qd(3).size(), 27u);
  EXPECT_EQ(qd(4).size(), 81u);
  const PointConfiguration q3 = qd(3);
  for (const auto& [l, p] : q3.points()) EXPECT_TRUE(in_unit_lattice(p));
}

TEST(StandardConfigs, GridIsTranslatedQ2) {
  const PointConfiguration g = grid();
  EXPECT_EQ(g.size(), 9u);
  for (long x = 0; x <= 2; ++x)
    for (long y = 0; y <= 2; ++y) EXPECT_TRUE(g.find(P({x, y})).has_value());
  // Translating Q² by (1,1) hits exactly the grid points.
  const PointConfiguration t = translate(qd(2), P({1, 1}));
  for (const auto& [l, p] : t.points()) EXPECT_TRUE(g.find(p).has_value());
}

TEST(StandardConfigs, W) {
  const PointConfiguration w = w_config();
  EXPECT_EQ(w.size(), 9u);
  for (const auto& [l, p] : w.points()) EXPECT_TRUE(qd(3).find(p).has_value());
  std::vector<HPoint> basis{HPoint::from_affine(P({1, 1, 1})), HPoint::from_affine(P({1, -1, -1})),
                            HPoint::from_affine(P({-1, 1, -1})), HPoint::from_affine(P({-1, -1, 1})),
                            HPoint::from_affine(P({0, 0, 0}))};
  for (const auto& b : basis) EXPECT_TRUE(w.find(b.affine()).has_value());
  EXPECT_TRUE(is_projective_basis(basis));
}

TEST(StandardConfigs, ProjBox) {
  const PointConfiguration b = proj_box(P({2, 2, 2}));
  EXPECT_EQ(b.size(), 27u);
  for (const auto& q : {P({2, 2, 2}), P({1, 1, 1}), P({0, 0, 0}), P({2, 0, 0}), P({1, 0, 0})})
    EXPECT_TRUE(b.find(q).has_value());
  const PointConfiguration h = proj_box(P({1, 1, 1}));
  for (const auto& [l, p] : h.points())
    for (const auto& x : p) EXPECT_TRUE(Scalar(0) <= x && x <= Scalar(1));
  EXPECT_EQ(proj_box_frame_labels(3).size(), 7u);
}

TEST(Union, IdempotentAndAdditive) {
  const PointConfiguration g = grid();
  std::map<std::string, std::string> glue;
  for (const auto& l : g.labels()) glue[l] = l;
  EXPECT_EQ(union_labeled(g, g, glue).size(), g.size());
  PointConfiguration a(2), b(2);
  a.insert("p", P({5, 5}));
  b.insert("q", P({6, 7}));
  EXPECT_EQ(union_labeled(a, b).size(), 2u);
}

TEST(Union, TwoHalfCubesGlueToQd) {
  // {x : x_1 ≥ 0} and {x : x_1 ≤ 0} halves of Q³ share the x_1 = 0 layer.
  const PointConfiguration q3 = qd(3);
  PointConfiguration lo(3), hi(3);
  for (const auto& [l, p] : q3.points()) {
    if (p[0] >= Scalar(0)) hi.insert(l, p);
    if (p[0] <= Scalar(0)) lo.insert(l, p);
  }
  std::map<std::string, std::string> glue;
  for (const auto& [l, p] : lo.points())
    if (p[0] == Scalar(0)) glue[l] = l;
  EXPECT_EQ(union_labeled(hi, lo, glue), qd(3));
}

TEST(EmbedPlane, CyclicAxes) {
  EXPECT_EQ(embed_point(P({7, 0}), 1, 3), P({7, 0, 0}));
  EXPECT_EQ(embed_point(P({7, 5}), 3, 3), P({5, 0, 7}));
  const PointConfiguration e = embed_plane(grid(), 2, 3);
  EXPECT_EQ(e.size(), 9u);
  for (const auto& [l, p] : e.points()) EXPECT_EQ(p[0], Scalar(0));
}

TEST(Chirotope, BasicSigns) {
  EXPECT_EQ(orientation({P({0, 0}), P({1, 1}), P({2, 2})}), 0);
  EXPECT_EQ(orientation({P({0, 0}), P({1, 0}), P({0, 1})}), 1);
  PointConfiguration c(2);
  c.insert("a", P({0, 0}));
  c.insert("b", P({1, 0}));
  c.insert("c", P({0, 1}));
  Chirotope chi(c);
  EXPECT_EQ(chi({"a", "b", "c"}), 1);
  EXPECT_EQ(chi({"b", "a", "c"}), -1);
}

TEST(Chirotope, InvariantUnderAffineMaps) {
  // Orientation-preserving affine maps keep every sign.
  Rng rng(3);
  PointConfiguration c(2);
  for (int i = 0; i < 6; ++i) c.insert("p" + std::to_string(i), {Scalar(rng.uniform_int(-9, 9)), Scalar(rng.uniform_int(-9, 9))});
  PointConfiguration m(2);
  for (const auto& [l, p] : c.points()) m.insert(l, {Scalar(2) * p[0] + p[1] + Scalar(3), p[1] - Scalar(1)});
  Chirotope a(c), b(m);
  const auto ls = c.labels();
  for_each_combination(ls.size(), 3, [&](const std::vector<std::size_t>& idx) {
    std::vector<std::string> t{ls[idx[0]], ls[idx[1]], ls[idx[2]]};
    EXPECT_EQ(a(t), b(t));
  });
}

TEST(LawrenceEquivalence, IdentityAndReflection) {
  PPConfiguration a;
  a.vertices = PointConfiguration(2);
  a.free_points = PointConfiguration(2);
  a.vertices.insert("v0", P({0, 0}));
  a.vertices.insert("v1", P({2, 0}));
  a.vertices.insert("v2", P({0, 2}));
  a.free_points.insert("r", P({3, 3}));
  std::map<std::string, std::string> id{{"v0", "v0"}, {"v1", "v1"}, {"v2", "v2"}, {"r", "r"}};
  EXPECT_TRUE(lawrence_equivalent(a, a, id));
  // Scaling keeps all partitions.
  PPConfiguration s = a;
  s.free_points = PointConfiguration(2);
  s.free_points.insert("r", P({4, 4}));
  EXPECT_TRUE(lawrence_equivalent(a, s, id));
  // Reflecting r through the line v1v2 moves it to the polytope's side.
  PPConfiguration b = a;
  b.free_points = PointConfiguration(2);
  b.free_points.insert("r", P({-1, -1}));
  EXPECT_FALSE(lawrence_equivalent(a, b, id));
}
