// Derivation certificates: replay, tampering, text form, greedy closure.

#include <gtest/gtest.h>

#include "projuniq/derive.hpp"
#include "projuniq/random.hpp"

using namespace projuniq;

namespace {

// Oracle: rank of a rational matrix by plain elimination (test-side, independent
// of the library's flat machinery).
std::size_t rank_of(std::vector<std::vector<Rational>> m) {
  std::size_t r = 0;
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[r]);
    for (std::size_t i = 0; i < m.size(); ++i)
      if (i != r && m[i][c] != 0) {
        const Rational f = m[i][c] / m[r][c];
        for (std::size_t k = c; k < cols; ++k) m[i][k] -= f * m[r][k];
      }
    ++r;
  }
  return r;
}

std::vector<Rational> homog(const Point& p) {
  std::vector<Rational> v;
  for (const auto& x : p) v.push_back(x.rational());
  v.push_back(Rational(1));
  return v;
}

// Oracle: every configuration-only join of every step contains its target.
void expect_steps_incident(const PointConfiguration& c, const DerivationCertificate& cert) {
  for (const auto& s : cert.steps) {
    if (DerivationCertificate::is_intermediate(s.target)) continue;
    for (const auto& j : s.joins) {
      if (std::any_of(j.begin(), j.end(), DerivationCertificate::is_intermediate)) continue;
      std::vector<std::vector<Rational>> rows;
      for (const auto& id : j) rows.push_back(homog(c.at(id)));
      auto with = rows;
      with.push_back(homog(c.at(s.target)));
      EXPECT_EQ(rank_of(with), rank_of(rows)) << s.target << " not on a join";
    }
  }
}

bool covers(const PointConfiguration& c, const DerivationCertificate& cert) {
  std::set<std::string> got;
  for (const auto& f : cert.frame) got.insert(c.resolve(f));
  for (const auto& l : cert.derived()) got.insert(c.resolve(l));
  return got.size() == c.size();
}

}  // namespace

TEST(Certificate, WDerivesQ3) {
  const PointConfiguration q3 = qd(3);
  const DerivationCertificate cert = w_frame_certificate();
  EXPECT_EQ(cert.frame.size(), 9u);
  const auto chk = check_certificate(q3, cert);
  ASSERT_TRUE(chk) << chk.reason;
  EXPECT_EQ(chk.derived, 18u);
  EXPECT_TRUE(covers(q3, cert));
  expect_steps_incident(q3, cert);
}

TEST(Certificate, Q4FromSixPointFrame) {
  const PointConfiguration q4 = qd(4);
  const DerivationCertificate cert = qd_frame_certificate(4);
  EXPECT_EQ(cert.frame.size(), 6u);
  const auto chk = check_certificate(q4, cert);
  ASSERT_TRUE(chk) << chk.reason;
  EXPECT_EQ(chk.derived, 75u);
  EXPECT_TRUE(covers(q4, cert));
  expect_steps_incident(q4, cert);
}

TEST(Certificate, BasisFrameIsProjectiveBasis) {
  for (std::size_t d : {3u, 4u, 5u}) {
    const PointConfiguration q = qd(d);
    std::vector<HPoint> b;
    for (const auto& l : qd_basis_labels(d)) b.push_back(HPoint::from_affine(q.at(l)));
    EXPECT_EQ(b.size(), d + 2);
    EXPECT_TRUE(is_projective_basis(b));
  }
}

TEST(Certificate, ReplaysAfterProjectiveTransformation) {
  // Derivations are projective statements: applying an admissible map to every
  // point must keep the certificate valid.
  const PointConfiguration q3 = qd(3);
  const Matrix<Scalar> T{{Scalar(2), Scalar(1), Scalar(0), Scalar(0)},
                         {Scalar(0), Scalar(1), Scalar(0), Scalar(1)},
                         {Scalar(1), Scalar(0), Scalar(3), Scalar(0)},
                         {Scalar(0), Scalar(1, 10), Scalar(1, 10), Scalar(1)}};
  const ProjectiveMap M(T);
  PointConfiguration img(3);
  for (const auto& [l, p] : q3.points()) {
    const HPoint h = M.apply(HPoint::from_affine(p));
    ASSERT_TRUE(h.is_finite());
    img.insert(l, h.affine());
  }
  EXPECT_TRUE(check_certificate(img, w_frame_certificate()));
  EXPECT_TRUE(check_certificate(img, qd_frame_certificate(3)));
}

TEST(Certificate, TamperedPointFails) {
  const DerivationCertificate cert = w_frame_certificate();
  const PointConfiguration q3 = qd(3);
  PointConfiguration bad(3);
  for (const auto& [l, p] : q3.points()) {
    Point x = p;
    if (l == lattice_label("qd", {1, 0, 0})) x[1] = Scalar(1, 2);
    bad.insert(l, x);
  }
  const auto chk = check_certificate(bad, cert);
  EXPECT_FALSE(chk);
  EXPECT_NE(chk.reason.find("replay gives"), std::string::npos) << chk.reason;
}

TEST(Certificate, TamperedStepFails) {
  DerivationCertificate cert = w_frame_certificate();
  // Swap in a join whose meet is a line: two points of the same edge twice.
  cert.steps[0].joins[1] = cert.steps[0].joins[0];
  EXPECT_FALSE(check_certificate(qd(3), cert));

  DerivationCertificate early = w_frame_certificate();
  std::swap(early.steps.front(), early.steps.back());  // edge midpoints need facet centers
  EXPECT_FALSE(check_certificate(qd(3), early));

  DerivationCertificate unknown = w_frame_certificate();
  unknown.steps[0].joins[0][0] = "nope";
  EXPECT_FALSE(check_certificate(qd(3), unknown));
}

TEST(Certificate, TextRoundTrip) {
  for (const auto& cert : {w_frame_certificate(), qd_frame_certificate(4), cube_last_vertex_certificate(3)}) {
    const std::string text = to_text(cert);
    const DerivationCertificate back = parse_certificate(text);
    EXPECT_EQ(to_text(back), text);
    EXPECT_EQ(back.frame, cert.frame);
    ASSERT_EQ(back.steps.size(), cert.steps.size());
  }
  EXPECT_THROW(parse_certificate("certificate v2\n"), std::invalid_argument);
}

TEST(CubeLastVertex, DerivesMissingVertex) {
  for (std::size_t d : {3u, 4u}) {
    const PointConfiguration q = qd(d);
    const auto cert = cube_last_vertex_certificate(d);
    EXPECT_EQ(cert.frame.size(), (1u << d) - 1);
    ASSERT_EQ(cert.steps.size(), 1u);
    EXPECT_EQ(cert.steps[0].joins.size(), d);
    EXPECT_TRUE(check_certificate(q, cert));
    expect_steps_incident(q, cert);
  }
  EXPECT_TRUE(check_certificate(qd(3), cube_last_vertex_certificate(3, {-1, 1, -1})));
}

TEST(CubeLastVertex, PerturbedVertexIsNotDetermined) {
  // Push one remaining vertex off the x = 1 facet: the replayed point moves away
  // from the true vertex.
  const PointConfiguration q3 = qd(3);
  PointConfiguration moved(3);
  for (const auto& [l, p] : q3.points()) {
    Point x = p;
    if (l == lattice_label("qd", {1, 1, -1})) x[0] = Scalar(5, 4);
    moved.insert(l, x);
  }
  EXPECT_FALSE(check_certificate(moved, cube_last_vertex_certificate(3)));
}

TEST(ProjBox, CertificateFromSevenPoints) {
  const auto cert = proj_box_certificate(3);
  EXPECT_EQ(cert.frame.size(), 7u);
  const PointConfiguration b = proj_box({Scalar(2), Scalar(2), Scalar(2)});
  const auto chk = check_certificate(b, cert);
  EXPECT_TRUE(chk) << chk.reason;
  EXPECT_TRUE(covers(b, cert));
}

TEST(Propagate, ClosesQ3FromW) {
  const PointConfiguration q3 = qd(3);
  std::vector<std::string> frame = w_frame_certificate().frame;
  const auto cert = propagate(q3, frame);
  EXPECT_TRUE(check_certificate(q3, cert));
  EXPECT_TRUE(covers(q3, cert));
}

TEST(Propagate, Deterministic) {
  const PointConfiguration q3 = qd(3);
  const auto frame = qd_basis_labels(3);
  EXPECT_EQ(to_text(propagate(q3, frame)), to_text(propagate(q3, frame)));
}

TEST(Propagate, GenericPointStaysUnderived) {
  // A point off every spanned line and plane of a simplex cannot be derived.
  PointConfiguration c(3);
  c.insert("o", {Scalar(0), Scalar(0), Scalar(0)});
  c.insert("a", {Scalar(1), Scalar(0), Scalar(0)});
  c.insert("b", {Scalar(0), Scalar(1), Scalar(0)});
  c.insert("c", {Scalar(0), Scalar(0), Scalar(1)});
  c.insert("g", {Scalar(2, 7), Scalar(3, 11), Scalar(5, 13)});
  const auto cert = propagate(c, {"o", "a", "b", "c"});
  EXPECT_TRUE(check_certificate(c, cert));
  EXPECT_FALSE(covers(c, cert));
}
