#ifndef PROJUNIQ_UNIVERSAL_HPP
#define PROJUNIQ_UNIVERSAL_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "projuniq/derive.hpp"
#include "projuniq/hull.hpp"
#include "projuniq/vonstaudt.hpp"

namespace projuniq {

/// One construction event; `data` holds exact counts and parameters as text.
struct ProvenanceEvent {
  std::string step;
  std::string detail;
  std::map<std::string, std::string> data;
};

struct WeakProjectiveTriple {
  Polytope P;                     // full-dimensional in R^d, d ≥ 3, inside the open cube (0,2)^d
  std::vector<std::string> Q;     // vertex labels of P
  PointConfiguration R;           // K[P] minus the vertices of P
  PointConfiguration K;           // Q ∪ R; P's vertex labels are aliases of their K labels
  DerivationCertificate certificate;  // derives all of K from its frame
  std::vector<std::string> wedge_labels;  // points of R spanning the wedge hyperplane
  Flat wedge;
  std::vector<ProvenanceEvent> log;
};

struct SubdirectCone {
  Point apex;
  /// Cut hyperplane Ĥ as (a_1..a_{d+1}, a_0): a·x + a_0 = 0.
  std::vector<Scalar> cut;
  Polytope pyramid;                      // P^v in R^{d+1}
  std::string apex_label = "cone:apex";
  std::vector<std::string> base_labels;  // p^v, labeled like p
  PointConfiguration carried;            // Q ∪ R at height 0
};

/// A point of a Lawrence extension: base coordinates, plus at most one
/// nonzero new coordinate (`height` on `axis`).
struct LawrenceVertex {
  Point base;
  std::optional<std::size_t> axis;
  Scalar height;
};

/// Coordinates of a Lawrence extension without hull computation.
struct LawrenceCoordinates {
  std::size_t base_dim = 0;
  std::size_t num_axes = 0;
  std::vector<std::string> labels;
  std::vector<LawrenceVertex> vertices;
  std::vector<std::string> base_labels;
  std::vector<std::string> axis_labels;  // free point lifted on each axis

  std::size_t ambient_dim() const { return base_dim + num_axes; }
  Point dense(std::size_t i) const {
    Point p = vertices[i].base;
    p.resize(ambient_dim(), Scalar(0));
    if (vertices[i].axis) p[base_dim + *vertices[i].axis] = vertices[i].height;
    return p;
  }
  PointConfiguration to_configuration() const {
    PointConfiguration c(ambient_dim());
    for (std::size_t i = 0; i < vertices.size(); ++i) c.insert(labels[i], dense(i));
    return c;
  }
  /// Value of the affine function (a, a_0) at vertex i.
  Scalar evaluate(const std::vector<Scalar>& eq, std::size_t i) const {
    Scalar s = eq[ambient_dim()];
    const auto& v = vertices[i];
    for (std::size_t j = 0; j < base_dim; ++j)
      if (!eq[j].is_zero()) s += eq[j] * v.base[j];
    if (v.axis) s += eq[base_dim + *v.axis] * v.height;
    return s;
  }
};

struct UniversalResult {
  LawrenceCoordinates polytope;
  std::vector<std::string> base_face_labels;
  std::size_t dimension = 0;
  std::size_t vertex_count = 0;
  std::size_t num_Q = 0, num_R = 0;
  std::vector<ProvenanceEvent> provenance;
  WeakProjectiveTriple triple;
  SubdirectCone cone;
  std::vector<Scalar> base_hyperplane;  // supporting the base face
  bool base_face_verified = false;
  std::optional<ProjectiveMap> base_to_input;  // chart of the base face → input P
};

// ---------------------------------------------------------------------------
// Preparation

namespace detail {

/// Rewrites a polytope in pivot coordinates of its affine span.
inline Polytope full_dimensional_chart(const Polytope& P) {
  if (P.dim == static_cast<int>(P.ambient_dim)) return P;
  const auto labels = P.labels();
  Matrix<Scalar> dirs;
  for (std::size_t i = 1; i < labels.size(); ++i) {
    std::vector<Scalar> r(P.ambient_dim);
    for (std::size_t j = 0; j < r.size(); ++j) r[j] = P.at(labels[i])[j] - P.at(labels[0])[j];
    dirs.push_back(std::move(r));
  }
  auto piv = linalg::rref(dirs);
  PointConfiguration c(piv.size());
  for (const auto& l : labels) {
    Point q;
    for (auto j : piv) q.push_back(P.at(l)[j]);
    c.insert(l, q);
  }
  return convex_hull(c);
}

inline Point barycenter(const PointConfiguration& c) {
  Point b(c.ambient_dim(), Scalar(0));
  for (const auto& [l, p] : c.points())
    for (std::size_t j = 0; j < b.size(); ++j) b[j] += p[j];
  for (auto& x : b) x /= Scalar(static_cast<long>(c.size()));
  return b;
}

/// Raises dim P to 3 by repeated pyramids (apex above the barycenter).
inline Polytope lift_to_dim3(Polytope P, std::vector<ProvenanceEvent>& log) {
  P = full_dimensional_chart(P);
  int n = 0;
  while (P.dim < 3) {
    Polytope L = projuniq::lift(P);
    Point apex = barycenter(L.vertices);
    apex.back() = Scalar(1);
    P = pyramid(L, "pyr:apex" + std::to_string(n++), apex);
    log.push_back({"pyramid", "raised dimension by coning", {{"dim", std::to_string(P.dim)}}});
  }
  return P;
}

/// Affine rescale of each coordinate onto [1/2, 3/2].
inline Polytope rescale_into_cube(const Polytope& P) {
  const std::size_t d = P.ambient_dim;
  std::vector<Scalar> lo, hi;
  for (std::size_t j = 0; j < d; ++j) {
    std::optional<Scalar> mn, mx;
    for (const auto& [l, p] : P.vertices.points()) {
      if (!mn || p[j] < *mn) mn = p[j];
      if (!mx || p[j] > *mx) mx = p[j];
    }
    lo.push_back(*mn);
    hi.push_back(*mx);
  }
  PointConfiguration c(d);
  for (const auto& [l, p] : P.vertices.points()) {
    Point q(d);
    for (std::size_t j = 0; j < d; ++j) q[j] = Scalar(1, 2) + (p[j] - lo[j]) / (hi[j] - lo[j]);
    c.insert(l, q);
  }
  return convex_hull(c);
}

inline std::vector<Scalar> lift_point(const Point& p) {
  Point q = p;
  q.emplace_back(0);
  return q;
}

}  // namespace detail

/// (P, Q, R) with Q = F_0(P) and R = K[P] ∖ Q, K[P] = ⋃_v COOR[v]; wedge
/// hyperplane x_1 = 0, a facet hyperplane of the cube [0,2]^d.
inline WeakProjectiveTriple build_triple(const Polytope& input) {
  WeakProjectiveTriple t;
  if (input.dim < 1) throw std::invalid_argument("build_triple: polytope of dimension >= 1 required");
  Polytope P = detail::lift_to_dim3(input, t.log);
  P = detail::rescale_into_cube(P);
  const std::size_t d = P.ambient_dim;
  t.log.push_back({"rescale", "affine rescale of the bounding box onto [1/2,3/2]^d", {{"d", std::to_string(d)}}});
  t.P = P;
  t.Q = P.labels();

  t.K = PointConfiguration(d);
  std::set<std::string> determined;
  int next_id = 1;
  std::size_t i = 0;
  for (const auto& q : t.Q) {
    const std::string prefix = "K" + std::to_string(i++) + ":";
    CoorPoint cp = coor_point(P.at(q), prefix);
    t.K = union_labeled(t.K, cp.config);
    auto resolve = [&](const std::string& l) { return t.K.resolve(l); };
    for (const auto& f : cp.certificate.frame) {
      const std::string r = resolve(f);
      if (determined.insert(r).second) t.certificate.frame.push_back(r);
    }
    append_certificate(t.certificate, determined, cp.certificate, resolve, next_id);
    t.K.add_alias(q, t.K.resolve(cp.zeta_label));
    t.log.push_back({"coor", "coordinate configuration of vertex " + q,
                     {{"vertex", q}, {"points", std::to_string(cp.config.size())}}});
  }
  t.R = PointConfiguration(d);
  std::set<std::string> vertex_keys;
  for (const auto& q : t.Q) vertex_keys.insert(t.K.resolve(q));
  for (const auto& [l, p] : t.K.points())
    if (!vertex_keys.count(l)) t.R.insert(l, p);

  // Wedge hyperplane x_1 = 0, spanned by cube points of R.
  std::vector<HPoint> span;
  for (const auto& [l, p] : t.R.points()) {
    if (!p[0].is_zero()) continue;
    std::vector<HPoint> trial = span;
    trial.push_back(HPoint::from_affine(p));
    if (join(trial).dim() == static_cast<int>(trial.size()) - 1) {
      span = std::move(trial);
      t.wedge_labels.push_back(l);
    }
    if (span.size() == d) break;
  }
  if (span.size() != d) throw std::logic_error("build_triple: R does not span the wedge hyperplane");
  t.wedge = join(span);
  for (const auto& [l, p] : P.vertices.points())
    if (t.wedge.contains(HPoint::from_affine(p))) throw std::logic_error("build_triple: wedge hyperplane meets P");
  t.log.push_back({"wedge", "wedge hyperplane x_1 = 0 spanned by points of R", {{"labels", std::to_string(d)}}});
  t.log.push_back({"free_points", "sizes of Q and R",
                   {{"Q", std::to_string(t.Q.size())}, {"R", std::to_string(t.R.size())},
                    {"K", std::to_string(t.K.size())}}});
  return t;
}

/// Cone over P from v, re-cut by Ĥ. The base vertices are p^v = [v,p] ∩ Ĥ.
inline SubdirectCone subdirect_cone(const WeakProjectiveTriple& t, const Point& v, const std::vector<Scalar>& cut) {
  const std::size_t d = t.P.ambient_dim;
  if (v.size() != d + 1 || cut.size() != d + 2) throw std::invalid_argument("subdirect_cone: dimension mismatch");
  if (v[d].is_zero()) throw std::invalid_argument("subdirect_cone: apex lies in the base space");
  // Ĥ ∩ R^d must be the wedge hyperplane.
  std::vector<Scalar> restricted(cut.begin(), cut.begin() + static_cast<std::ptrdiff_t>(d));
  restricted.push_back(cut[d + 1]);
  const Flat trace = Flat::from_equations({restricted}, d);
  if (!(trace == t.wedge)) throw std::invalid_argument("subdirect_cone: cut does not meet R^d in the wedge hyperplane");
  auto f = [&](const Point& x) {
    Scalar s = cut[d + 1];
    for (std::size_t j = 0; j <= d; ++j) s += cut[j] * x[j];
    return s;
  };
  const Scalar fv = f(v);
  if (fv.is_zero()) throw std::invalid_argument("subdirect_cone: apex on the cut hyperplane");
  SubdirectCone c;
  c.apex = v;
  c.cut = cut;
  PointConfiguration pts(d + 1);
  for (const auto& [l, p] : t.P.vertices.points()) {
    const Point q = detail::lift_point(p);
    const Scalar fp = f(q);
    if (fp.sign() * fv.sign() >= 0) throw std::invalid_argument("subdirect_cone: separation failure");
    const Scalar s = fp / (fp - fv);
    Point pv(d + 1);
    for (std::size_t j = 0; j <= d; ++j) pv[j] = q[j] + s * (v[j] - q[j]);
    pts.insert(l, pv);
    c.base_labels.push_back(l);
  }
  pts.insert(c.apex_label, v);
  c.pyramid = convex_hull(pts);
  c.carried = PointConfiguration(d + 1);
  for (const auto& [l, p] : t.K.points()) c.carried.insert(l, detail::lift_point(p));
  return c;
}

/// Apex (barycenter, 1) and Ĥ: x_1 + μ·x_{d+1} = 0 with μ = −1, −2, −4, …
/// until Ĥ separates the apex from P.
inline SubdirectCone subdirect_cone(const WeakProjectiveTriple& t) {
  const std::size_t d = t.P.ambient_dim;
  Point v = detail::barycenter(t.P.vertices);
  v.emplace_back(1);
  Scalar mu(-1);
  for (int i = 0; i < 64; ++i, mu *= Scalar(2)) {
    if ((v[0] + mu).sign() >= 0) continue;
    std::vector<Scalar> cut(d + 2, Scalar(0));
    cut[0] = Scalar(1);
    cut[d] = mu;
    return subdirect_cone(t, v, cut);
  }
  throw std::runtime_error("subdirect_cone: no separating slope found");
}

/// Lawrence lift coordinates: P's vertices at 0 on all new axes, and each
/// free point r at heights 1 and 2 on its own axis ("L1:r", "L2:r").
inline LawrenceCoordinates lawrence_coordinates(const PPConfiguration& pp, bool check_disjoint = true) {
  LawrenceCoordinates L;
  L.base_dim = pp.vertices.ambient_dim();
  if (pp.free_points.size() && pp.free_points.ambient_dim() != L.base_dim)
    throw std::invalid_argument("lawrence_extension: dimension mismatch");
  if (check_disjoint && !pp.free_points.empty()) {
    const Polytope P = convex_hull(pp.vertices);
    for (const auto& [l, r] : pp.free_points.points())
      if (polytope_contains(P, r)) throw std::invalid_argument("lawrence_extension: free point " + l + " lies in P");
  }
  for (const auto& [l, p] : pp.vertices.points()) {
    L.labels.push_back(l);
    L.vertices.push_back({p, std::nullopt, Scalar(0)});
    L.base_labels.push_back(l);
  }
  for (const auto& [l, r] : pp.free_points.points()) {
    const std::size_t axis = L.num_axes++;
    L.axis_labels.push_back(l);
    L.labels.push_back("L1:" + l);
    L.vertices.push_back({r, axis, Scalar(1)});
    L.labels.push_back("L2:" + l);
    L.vertices.push_back({r, axis, Scalar(2)});
  }
  return L;
}

inline Polytope lawrence_extension(const PPConfiguration& pp) {
  return convex_hull(lawrence_coordinates(pp).to_configuration());
}

// ---------------------------------------------------------------------------
// Face verification

/// All face labels on H, every other vertex strictly on one side.
inline bool verify_face(const PointConfiguration& c, const std::vector<std::string>& face, const Flat& H) {
  if (H.dim() != static_cast<int>(c.ambient_dim()) - 1) return false;
  const auto eq = H.equations().front();
  const std::size_t d = c.ambient_dim();
  std::set<std::string> in;
  for (const auto& l : face) in.insert(c.resolve(l));
  int side = 0;
  for (const auto& [l, p] : c.points()) {
    Scalar s = eq[d];
    for (std::size_t j = 0; j < d; ++j) s += eq[j] * p[j];
    const int sg = s.sign();
    if (in.count(l)) {
      if (sg != 0) return false;
      continue;
    }
    if (sg == 0 || (side != 0 && sg != side)) return false;
    side = sg;
  }
  return true;
}

inline bool verify_face(const Polytope& P, const std::vector<std::string>& face, const Flat& H) {
  return verify_face(P.vertices, face, H);
}

/// Sparse variant; the hyperplane is given by its equation (a, a_0).
inline bool verify_face(const LawrenceCoordinates& L, const std::vector<std::string>& face,
                        const std::vector<Scalar>& eq) {
  if (eq.size() != L.ambient_dim() + 1) return false;
  bool nonzero = false;
  for (std::size_t j = 0; j < L.ambient_dim(); ++j) nonzero |= !eq[j].is_zero();
  if (!nonzero) return false;
  std::set<std::string> in(face.begin(), face.end());
  int side = 0;
  for (std::size_t i = 0; i < L.vertices.size(); ++i) {
    const int sg = L.evaluate(eq, i).sign();
    if (in.count(L.labels[i])) {
      if (sg != 0) return false;
      continue;
    }
    if (sg == 0 || (side != 0 && sg != side)) return false;
    side = sg;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Pipeline

inline UniversalResult universal_polytope(const Polytope& input) {
  UniversalResult res;
  res.triple = build_triple(input);
  res.provenance = res.triple.log;
  const WeakProjectiveTriple& t = res.triple;
  const std::size_t d = t.P.ambient_dim;

  res.cone = subdirect_cone(t);
  const SubdirectCone& c = res.cone;
  res.provenance.push_back({"subdirect_cone", "apex over the barycenter, cut through the wedge hyperplane",
                            {{"mu", c.cut[d].to_string()}}});

  // Free points sit at height 0; P^v strictly above.
  for (const auto& [l, p] : c.pyramid.vertices.points())
    if (p[d].sign() <= 0) throw std::logic_error("universal_polytope: cone vertex not above the base space");

  PPConfiguration pp{c.pyramid.vertices, c.carried};
  res.polytope = lawrence_coordinates(pp, /*check_disjoint=*/false);
  res.num_Q = t.Q.size();
  res.num_R = t.R.size();
  // Each axis adds one dimension (its two points differ only there).
  std::vector<Point> cone_pts;
  for (const auto& [l, p] : c.pyramid.vertices.points()) cone_pts.push_back(p);
  res.dimension = static_cast<std::size_t>(detail::affine_rank(cone_pts)) + res.polytope.num_axes;
  // Base vertices are vertices of the face P^v; lifted points are vertices as r ∉ P^v.
  res.vertex_count = c.pyramid.num_vertices() + 2 * res.polytope.num_axes;
  res.provenance.push_back({"lawrence", "Lawrence extension of (P^v, Q ∪ R)",
                            {{"axes", std::to_string(res.polytope.num_axes)},
                             {"dimension", std::to_string(res.dimension)},
                             {"vertices", std::to_string(res.vertex_count)}}});

  // Base face: −f + M·Σ(new coordinates), f the cut functional.
  res.base_face_labels = c.base_labels;
  const std::size_t D = res.polytope.ambient_dim();
  std::vector<Scalar> eq(D + 1, Scalar(0));
  for (std::size_t j = 0; j <= d; ++j) eq[j] = -c.cut[j];
  eq[D] = -c.cut[d + 1];
  Scalar M(1);
  for (const auto& [l, p] : c.carried.points()) {
    Scalar fr = c.cut[d + 1];
    for (std::size_t j = 0; j <= d; ++j) fr += c.cut[j] * p[j];
    if (fr + Scalar(1) > M) M = fr + Scalar(1);
  }
  for (std::size_t j = d + 1; j < D; ++j) eq[j] = M;
  res.base_hyperplane = eq;
  res.base_face_verified = verify_face(res.polytope, res.base_face_labels, eq);

  // Base face chart (drop x_{d+1}; Ĥ is a graph over the first d coordinates) → input P.
  const bool same_space = input.dim == static_cast<int>(input.ambient_dim) && input.ambient_dim == d;
  std::vector<HPoint> src, dst;
  for (const auto& l : c.base_labels) {
    Point b = c.pyramid.at(l);
    b.pop_back();
    src.push_back(HPoint::from_affine(b));
    dst.push_back(HPoint::from_affine(same_space ? input.at(l) : t.P.at(l)));
  }
  auto m = find_projective_map(src, dst);
  if (m.map) {
    bool exact = true;
    for (std::size_t i = 0; i < src.size() && exact; ++i) exact = m.map->apply(src[i]) == dst[i];
    if (exact) res.base_to_input = m.map;
  }
  res.provenance.push_back({"base_face", "base face support and projective map to the input",
                            {{"verified", res.base_face_verified ? "true" : "false"},
                             {"map", res.base_to_input ? "found" : "none"}}});
  return res;
}

}  // namespace projuniq

#endif  // PROJUNIQ_UNIVERSAL_HPP
