#ifndef PROJUNIQ_HULL_HPP
#define PROJUNIQ_HULL_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "projuniq/config.hpp"
#include "projuniq/random.hpp"

namespace projuniq {

/// a·x ≤ b, with the incident vertex labels (sorted).
struct Facet {
  std::vector<Scalar> normal;
  Scalar offset;
  std::vector<std::string> vertices;
};

/// Exact V-polytope with its facets. Lower-dimensional polytopes carry the
/// equations of their affine hull; facet inequalities are then relative.
class Polytope {
 public:
  std::size_t ambient_dim = 0;
  int dim = -1;
  PointConfiguration vertices;
  std::vector<Facet> facets;
  /// Rows (a, b) meaning a·x = b, spanning the affine hull's equations.
  std::vector<std::pair<std::vector<Scalar>, Scalar>> affine_hull;

  std::size_t num_vertices() const { return vertices.size(); }
  std::size_t num_facets() const { return facets.size(); }
  std::vector<std::string> labels() const { return vertices.labels(); }
  const Point& at(const std::string& l) const { return vertices.at(l); }

  /// Index of the facet with exactly these vertices.
  std::optional<std::size_t> facet_index(std::vector<std::string> verts) const {
    std::sort(verts.begin(), verts.end());
    for (std::size_t i = 0; i < facets.size(); ++i)
      if (facets[i].vertices == verts) return i;
    return std::nullopt;
  }
};

namespace detail {

inline int nt_sign(const Rational& q) { return sgn(q); }
inline int nt_sign(const Scalar& s) { return s.sign(); }
inline std::string nt_str(const Rational& q) { return q.get_str(); }
inline std::string nt_str(const Scalar& s) { return s.to_string(); }

template <class NT>
NT eval_affine(const std::vector<NT>& a, const std::vector<NT>& x) {
  NT s(0);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!is_zero(a[i])) s += a[i] * x[i];
  return s;
}

/// Rank of the affine span of points (−1 for none).
template <class NT>
int affine_rank(const std::vector<std::vector<NT>>& pts) {
  if (pts.empty()) return -1;
  Matrix<NT> m;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    std::vector<NT> r(pts[i].size());
    for (std::size_t j = 0; j < r.size(); ++j) r[j] = pts[i][j] - pts[0][j];
    m.push_back(std::move(r));
  }
  return static_cast<int>(linalg::rank(std::move(m)));
}

/// Hyperplane n·x = b through k points of R^k, first nonzero |n_i| = 1,
/// oriented so that the interior point has n·c < b.
template <class NT>
std::optional<std::pair<std::vector<NT>, NT>> hyperplane_through(const std::vector<std::vector<NT>>& pts,
                                                                 const std::vector<NT>& interior) {
  const std::size_t k = interior.size();
  Matrix<NT> m;
  for (const auto& p : pts) {
    std::vector<NT> r = p;
    r.emplace_back(-1);
    m.push_back(std::move(r));
  }
  auto ker = linalg::kernel(std::move(m), k + 1);
  if (ker.size() != 1) return std::nullopt;
  std::vector<NT> n(ker[0].begin(), ker[0].begin() + static_cast<std::ptrdiff_t>(k));
  NT b = ker[0][k];
  std::size_t i = 0;
  while (i < k && is_zero(n[i])) ++i;
  if (i == k) return std::nullopt;
  NT s = NT(1) / n[i];
  if (nt_sign(s) < 0) s = -s;
  for (auto& x : n) x = x * s;
  b = b * s;
  const int side = nt_sign(NT(eval_affine(n, interior) - b));
  if (side == 0) return std::nullopt;
  if (side > 0) {
    for (auto& x : n) x = -x;
    b = -b;
  }
  return std::make_pair(n, b);
}

template <class NT>
std::string hyperplane_key(const std::vector<NT>& n, const NT& b) {
  std::string k;
  for (const auto& x : n) k += nt_str(x) + ",";
  return k + "|" + nt_str(b);
}

inline std::vector<std::size_t> sorted_union(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::vector<std::size_t> u;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(u));
  return u;
}

/// Beneath–beyond state in chart coordinates. Facet point sets hold every
/// inserted point on the facet's hyperplane, vertices or not.
template <class NT>
struct HullCore {
  using V = std::vector<NT>;
  struct ChartFacet {
    V n;
    NT b;
    std::vector<std::size_t> pts;
    bool alive = true;
  };
  std::size_t k = 0;
  std::vector<V> cp;
  V interior;
  std::vector<ChartFacet> F;
  std::map<std::string, std::size_t> by_key;

  int side(const ChartFacet& f, std::size_t i) const { return nt_sign(NT(eval_affine(f.n, cp[i]) - f.b)); }

  void add_facet(ChartFacet f) {
    const std::string key = hyperplane_key(f.n, f.b);
    if (auto it = by_key.find(key); it != by_key.end() && F[it->second].alive) {
      F[it->second].pts = sorted_union(F[it->second].pts, f.pts);
      return;
    }
    by_key[key] = F.size();
    F.push_back(std::move(f));
  }

  void init_simplex(std::vector<std::size_t> basis) {
    std::sort(basis.begin(), basis.end());
    interior.assign(k, NT(0));
    for (auto i : basis)
      for (std::size_t j = 0; j < k; ++j) interior[j] += cp[i][j];
    for (auto& x : interior) x = x / NT(static_cast<long>(basis.size()));
    for (std::size_t skip = 0; skip < basis.size(); ++skip) {
      std::vector<V> on;
      std::vector<std::size_t> idx;
      for (std::size_t j = 0; j < basis.size(); ++j)
        if (j != skip) {
          on.push_back(cp[basis[j]]);
          idx.push_back(basis[j]);
        }
      auto h = hyperplane_through(on, interior);
      if (!h) throw std::logic_error("convex_hull: degenerate initial simplex");
      add_facet({h->first, h->second, idx, true});
    }
  }

  void insert(std::size_t p) {
    std::vector<std::size_t> visible;
    std::vector<int> sides(F.size(), -1);
    for (std::size_t f = 0; f < F.size(); ++f) {
      if (!F[f].alive) continue;
      sides[f] = side(F[f], p);
      if (sides[f] > 0) visible.push_back(f);
    }
    auto attach = [&](std::size_t f) {
      auto& v = F[f].pts;
      v.insert(std::upper_bound(v.begin(), v.end(), p), p);
    };
    if (visible.empty()) {
      for (std::size_t f = 0; f < F.size(); ++f)
        if (F[f].alive && sides[f] == 0) attach(f);
      return;
    }
    std::map<std::string, ChartFacet> fresh;
    for (auto vf : visible) {
      for (std::size_t g = 0; g < F.size(); ++g) {
        // Ridges toward a coplanar neighbour: p just extends that facet.
        if (!F[g].alive || sides[g] != -1) continue;
        std::vector<std::size_t> shared;
        std::set_intersection(F[vf].pts.begin(), F[vf].pts.end(), F[g].pts.begin(), F[g].pts.end(),
                              std::back_inserter(shared));
        if (shared.size() + 1 < k) continue;
        std::vector<V> sp;
        for (auto i : shared) sp.push_back(cp[i]);
        if (affine_rank(sp) != static_cast<int>(k) - 2) continue;
        std::vector<V> span;
        for (auto i : shared) {
          if (span.size() + 1 == k) break;
          std::vector<V> trial = span;
          trial.push_back(cp[i]);
          if (affine_rank(trial) == static_cast<int>(trial.size()) - 1) span = std::move(trial);
        }
        span.push_back(cp[p]);
        auto h = hyperplane_through(span, interior);
        if (!h) throw std::logic_error("convex_hull: degenerate new facet");
        std::vector<std::size_t> pts = shared;
        pts.insert(std::upper_bound(pts.begin(), pts.end(), p), p);
        const std::string key = hyperplane_key(h->first, h->second);
        if (auto it = fresh.find(key); it != fresh.end()) {
          it->second.pts = sorted_union(it->second.pts, pts);
        } else {
          fresh.emplace(key, ChartFacet{h->first, h->second, std::move(pts), true});
        }
      }
    }
    for (auto vf : visible) F[vf].alive = false;
    for (std::size_t g = 0; g < F.size(); ++g)
      if (F[g].alive && sides[g] == 0) attach(g);
    for (auto& [key, f] : fresh) add_facet(std::move(f));
  }

  /// Vertices are the points whose incident facet normals have rank k.
  std::vector<bool> vertices() const {
    std::vector<std::vector<std::size_t>> incident(cp.size());
    for (std::size_t f = 0; f < F.size(); ++f)
      if (F[f].alive)
        for (auto i : F[f].pts) incident[i].push_back(f);
    std::vector<bool> out(cp.size(), false);
    for (std::size_t i = 0; i < cp.size(); ++i) {
      if (incident[i].size() < k) continue;
      Matrix<NT> m;
      for (auto f : incident[i]) m.push_back(F[f].n);
      out[i] = linalg::rank(std::move(m)) == k;
    }
    return out;
  }
};

inline Scalar to_scalar(const Rational& q) { return Scalar(q); }
inline Scalar to_scalar(const Scalar& s) { return s; }
inline Rational to_nt(const Scalar& s, const Rational*) { return s.rational(); }
inline Scalar to_nt(const Scalar& s, const Scalar*) { return s; }

template <class NT>
std::vector<NT> convert(const Point& p) {
  std::vector<NT> out;
  out.reserve(p.size());
  for (const auto& x : p) out.push_back(to_nt(x, static_cast<const NT*>(nullptr)));
  return out;
}

inline bool all_rational(const std::vector<Point>& pts) {
  for (const auto& p : pts)
    for (const auto& x : p)
      if (!x.is_rational()) return false;
  return true;
}

/// Polytope from a finished core; `piv` are the ambient columns used as chart.
template <class NT>
Polytope finish_hull(const HullCore<NT>& core, const std::vector<std::string>& labels, const std::vector<Point>& pts,
                     std::size_t d, const std::vector<std::size_t>& piv, Polytope P) {
  const auto is_vertex = core.vertices();
  P.vertices = PointConfiguration(d);
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (is_vertex[i]) P.vertices.insert(labels[i], pts[i]);
  P.facets.clear();
  for (const auto& f : core.F) {
    if (!f.alive) continue;
    Facet out{std::vector<Scalar>(d, Scalar(0)), to_scalar(f.b), {}};
    for (std::size_t i = 0; i < piv.size(); ++i) out.normal[piv[i]] = to_scalar(f.n[i]);
    for (auto i : f.pts)
      if (is_vertex[i]) out.vertices.push_back(labels[i]);
    std::sort(out.vertices.begin(), out.vertices.end());
    P.facets.push_back(std::move(out));
  }
  std::sort(P.facets.begin(), P.facets.end(), [](const Facet& a, const Facet& b) { return a.vertices < b.vertices; });
  return P;
}

template <class NT>
Polytope convex_hull_impl(const std::vector<std::string>& labels, const std::vector<Point>& pts, std::size_t d) {
  std::vector<std::vector<NT>> full;
  for (const auto& p : pts) full.push_back(convert<NT>(p));
  Polytope P;
  P.ambient_dim = d;

  // Affine basis by greedy rank increase; chart = pivot coordinates of the span.
  std::vector<std::size_t> basis{0};
  Matrix<NT> dirs;
  for (std::size_t i = 1; i < full.size() && dirs.size() < d; ++i) {
    std::vector<NT> r(d);
    for (std::size_t j = 0; j < d; ++j) r[j] = full[i][j] - full[0][j];
    Matrix<NT> trial = dirs;
    trial.push_back(r);
    if (linalg::rank(trial) == trial.size()) {
      dirs = std::move(trial);
      basis.push_back(i);
    }
  }
  const std::size_t k = dirs.size();
  P.dim = static_cast<int>(k);
  Matrix<NT> rr = dirs;
  const std::vector<std::size_t> piv = rr.empty() ? std::vector<std::size_t>{} : linalg::rref(rr);
  for (auto& a : linalg::kernel(dirs, d)) {
    Point as;
    for (const auto& x : a) as.push_back(to_scalar(x));
    Scalar b = eval_affine(as, pts[0]);
    P.affine_hull.emplace_back(std::move(as), std::move(b));
  }
  if (k == 0) {
    P.vertices = PointConfiguration(d);
    P.vertices.insert(labels[0], pts[0]);
    return P;
  }
  HullCore<NT> core;
  core.k = k;
  for (const auto& p : full) {
    std::vector<NT> c;
    for (auto j : piv) c.push_back(p[j]);
    core.cp.push_back(std::move(c));
  }
  core.init_simplex(basis);
  std::set<std::size_t> in_basis(basis.begin(), basis.end());
  for (std::size_t p = 0; p < full.size(); ++p)
    if (!in_basis.count(p)) core.insert(p);
  return finish_hull(core, labels, pts, d, piv, std::move(P));
}

}  // namespace detail

/// Exact incremental (beneath–beyond) convex hull in the affine span of the
/// input; insertion in label order, so results are deterministic. Rational
/// inputs run on plain rationals.
inline Polytope convex_hull(const PointConfiguration& input) {
  if (input.empty()) throw std::invalid_argument("convex_hull: no points");
  const std::size_t d = input.ambient_dim();
  std::vector<std::string> labels = input.labels();
  std::vector<Point> pts;
  for (const auto& l : labels) pts.push_back(input.at(l));
  if (detail::all_rational(pts)) return detail::convex_hull_impl<Rational>(labels, pts, d);
  return detail::convex_hull_impl<Scalar>(labels, pts, d);
}

inline Polytope convex_hull(const std::vector<std::pair<std::string, Point>>& pts) {
  if (pts.empty()) throw std::invalid_argument("convex_hull: no points");
  PointConfiguration c(pts.front().second.size());
  for (const auto& [l, p] : pts) c.insert(l, p);
  return convex_hull(c);
}

namespace detail {

template <class NT>
Polytope extend_hull_impl(const Polytope& P, const PointConfiguration& extra) {
  const std::size_t d = P.ambient_dim;
  std::vector<std::string> labels = P.labels();
  std::vector<Point> pts;
  for (const auto& l : labels) pts.push_back(P.at(l));
  const std::size_t base = labels.size();
  for (const auto& [l, p] : extra.points()) {
    if (P.vertices.contains(l)) throw std::invalid_argument("extend_hull: label already used: " + l);
    labels.push_back(l);
    pts.push_back(p);
  }
  HullCore<NT> core;
  core.k = d;
  for (const auto& p : pts) core.cp.push_back(convert<NT>(p));
  core.interior.assign(d, NT(0));
  for (std::size_t i = 0; i < base; ++i)
    for (std::size_t j = 0; j < d; ++j) core.interior[j] += core.cp[i][j];
  for (auto& x : core.interior) x = x / NT(static_cast<long>(base));
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < base; ++i) index[labels[i]] = i;
  for (const auto& f : P.facets) {
    typename HullCore<NT>::ChartFacet cf{convert<NT>(f.normal), to_nt(f.offset, static_cast<const NT*>(nullptr)), {}, true};
    for (const auto& l : f.vertices) cf.pts.push_back(index.at(l));
    std::sort(cf.pts.begin(), cf.pts.end());
    core.add_facet(std::move(cf));
  }
  for (std::size_t p = base; p < pts.size(); ++p) core.insert(p);
  std::vector<std::size_t> piv(d);
  for (std::size_t j = 0; j < d; ++j) piv[j] = j;
  Polytope out;
  out.ambient_dim = d;
  out.dim = P.dim;
  return finish_hull(core, labels, pts, d, piv, std::move(out));
}

}  // namespace detail

/// conv(P ∪ extra), continuing P's facet structure instead of starting over.
inline Polytope extend_hull(const Polytope& P, const PointConfiguration& extra) {
  if (extra.empty()) return P;
  if (P.dim != static_cast<int>(P.ambient_dim)) {
    PointConfiguration all = P.vertices;
    for (const auto& [l, p] : extra.points()) all.insert(l, p);
    return convex_hull(all);
  }
  std::vector<Point> pts;
  for (const auto& [l, p] : P.vertices.points()) pts.push_back(p);
  for (const auto& [l, p] : extra.points()) pts.push_back(p);
  bool rational = detail::all_rational(pts);
  for (const auto& f : P.facets) {
    rational = rational && f.offset.is_rational();
    for (const auto& x : f.normal) rational = rational && x.is_rational();
  }
  if (rational) return detail::extend_hull_impl<Rational>(P, extra);
  return detail::extend_hull_impl<Scalar>(P, extra);
}

/// Sign of a·x − b for a facet.
inline int facet_side(const Facet& f, const Point& x) { return (detail::eval_affine(f.normal, x) - f.offset).sign(); }

/// x ∈ P, exactly (affine hull equations and all facet inequalities).
inline bool polytope_contains(const Polytope& P, const Point& x) {
  for (const auto& [a, b] : P.affine_hull)
    if (detail::eval_affine(a, x) != b) return false;
  for (const auto& f : P.facets)
    if (facet_side(f, x) > 0) return false;
  return true;
}

/// Whether the labels are exactly the vertex set of a face of P.
inline bool is_face(const Polytope& P, std::vector<std::string> labels) {
  std::sort(labels.begin(), labels.end());
  auto all = P.labels();
  if (labels == all) return true;
  std::vector<std::string> cur = all;
  for (const auto& f : P.facets)
    if (std::includes(f.vertices.begin(), f.vertices.end(), labels.begin(), labels.end())) {
      std::vector<std::string> x;
      std::set_intersection(cur.begin(), cur.end(), f.vertices.begin(), f.vertices.end(), std::back_inserter(x));
      cur = std::move(x);
    }
  return cur == labels;
}

// ---------------------------------------------------------------------------
// Face lattice

struct FaceLattice {
  /// Faces as sorted vertex-label sets, grouped by dimension −1..dim.
  std::map<int, std::vector<std::vector<std::string>>> by_dim;
  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& [k, v] : by_dim) n += v.size();
    return n;
  }
  std::size_t count(int k) const {
    auto it = by_dim.find(k);
    return it == by_dim.end() ? 0 : it->second.size();
  }
};

inline FaceLattice face_lattice(const Polytope& P) {
  std::set<std::vector<std::string>> faces;
  std::vector<std::vector<std::string>> queue;
  const std::vector<std::string> all = P.labels();
  faces.insert(all);
  for (const auto& f : P.facets)
    if (faces.insert(f.vertices).second) queue.push_back(f.vertices);
  while (!queue.empty()) {
    auto cur = std::move(queue.back());
    queue.pop_back();
    for (const auto& f : P.facets) {
      std::vector<std::string> x;
      std::set_intersection(cur.begin(), cur.end(), f.vertices.begin(), f.vertices.end(), std::back_inserter(x));
      if (faces.insert(x).second) queue.push_back(std::move(x));
    }
  }
  faces.insert(std::vector<std::string>{});
  FaceLattice L;
  for (const auto& f : faces) {
    std::vector<Point> pts;
    for (const auto& l : f) pts.push_back(P.at(l));
    L.by_dim[detail::affine_rank(pts)].push_back(f);
  }
  return L;
}

/// (f_0, …, f_{dim−1}).
inline std::vector<std::size_t> f_vector(const Polytope& P) {
  auto L = face_lattice(P);
  std::vector<std::size_t> f;
  for (int k = 0; k < P.dim; ++k) f.push_back(L.count(k));
  return f;
}

/// Edges as label pairs (vertex pairs whose smallest common face is 1-dimensional).
inline std::vector<std::pair<std::string, std::string>> edges(const Polytope& P) {
  std::vector<std::pair<std::string, std::string>> out;
  auto labels = P.labels();
  if (P.dim == 1) return {{labels[0], labels[1]}};
  for (std::size_t i = 0; i < labels.size(); ++i)
    for (std::size_t j = i + 1; j < labels.size(); ++j) {
      std::vector<std::string> common;
      bool first = true;
      for (const auto& f : P.facets) {
        if (!std::binary_search(f.vertices.begin(), f.vertices.end(), labels[i]) ||
            !std::binary_search(f.vertices.begin(), f.vertices.end(), labels[j]))
          continue;
        if (first) {
          common = f.vertices;
          first = false;
        } else {
          std::vector<std::string> x;
          std::set_intersection(common.begin(), common.end(), f.vertices.begin(), f.vertices.end(), std::back_inserter(x));
          common = std::move(x);
        }
      }
      if (!first && common.size() == 2) out.emplace_back(labels[i], labels[j]);
    }
  return out;
}

// ---------------------------------------------------------------------------
// Combinatorial equivalence

/// Vertex bijection P → P' preserving the vertex–facet incidences, or none.
inline std::optional<std::map<std::string, std::string>> combinatorially_equivalent(const Polytope& A,
                                                                                   const Polytope& B) {
  if (A.num_vertices() != B.num_vertices() || A.num_facets() != B.num_facets() || A.dim != B.dim) return std::nullopt;
  const auto la = A.labels(), lb = B.labels();
  const std::size_t n = la.size(), m = A.num_facets();
  auto incidence = [&](const Polytope& P, const std::vector<std::string>& labels) {
    std::map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < labels.size(); ++i) pos[labels[i]] = i;
    std::vector<std::vector<bool>> inc(labels.size(), std::vector<bool>(P.num_facets(), false));
    for (std::size_t f = 0; f < P.num_facets(); ++f)
      for (const auto& l : P.facets[f].vertices) inc[pos.at(l)][f] = true;
    return inc;
  };
  const auto ia = incidence(A, la), ib = incidence(B, lb);
  auto common = [&](const std::vector<std::vector<bool>>& inc, std::size_t u, std::size_t v) {
    std::size_t c = 0;
    for (std::size_t f = 0; f < inc[u].size(); ++f) c += inc[u][f] && inc[v][f];
    return c;
  };
  std::vector<std::size_t> deg_a(n), deg_b(n);
  for (std::size_t i = 0; i < n; ++i) {
    deg_a[i] = common(ia, i, i);
    deg_b[i] = common(ib, i, i);
  }
  std::vector<std::set<std::size_t>> facets_b;
  for (std::size_t f = 0; f < m; ++f) {
    std::set<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i)
      if (ib[i][f]) s.insert(i);
    facets_b.push_back(std::move(s));
  }
  std::set<std::set<std::size_t>> fb(facets_b.begin(), facets_b.end());
  std::vector<std::size_t> map(n, n);
  std::vector<bool> used(n, false);
  std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
    if (i == n) {
      for (std::size_t f = 0; f < m; ++f) {
        std::set<std::size_t> img;
        for (std::size_t v = 0; v < n; ++v)
          if (ia[v][f]) img.insert(map[v]);
        if (!fb.count(img)) return false;
      }
      return true;
    }
    for (std::size_t c = 0; c < n; ++c) {
      if (used[c] || deg_b[c] != deg_a[i]) continue;
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j) ok = common(ia, i, j) == common(ib, c, map[j]);
      if (!ok) continue;
      map[i] = c;
      used[c] = true;
      if (rec(i + 1)) return true;
      used[c] = false;
    }
    return false;
  };
  if (!rec(0)) return std::nullopt;
  std::map<std::string, std::string> out;
  for (std::size_t i = 0; i < n; ++i) out[la[i]] = lb[map[i]];
  return out;
}

// ---------------------------------------------------------------------------
// Constructions

inline Polytope pyramid(const Polytope& P, const std::string& apex_label, const Point& apex) {
  for (const auto& [a, b] : P.affine_hull)
    if (detail::eval_affine(a, apex) != b) goto outside;
  throw std::invalid_argument("pyramid: apex lies in the affine span of the base");
outside:
  PointConfiguration c = P.vertices;
  c.insert(apex_label, apex);
  return convex_hull(c);
}

/// Lifts P ⊂ R^d to R^{d+1} (last coordinate 0).
inline Polytope lift(const Polytope& P) {
  PointConfiguration c(P.ambient_dim + 1);
  for (const auto& [l, p] : P.vertices.points()) {
    Point q = p;
    q.emplace_back(0);
    c.insert(l, q);
  }
  return convex_hull(c);
}

inline Polytope subpolytope(const Polytope& P, const std::vector<std::string>& keep) {
  if (keep.empty()) throw std::invalid_argument("subpolytope: empty vertex subset");
  return convex_hull(P.vertices.restricted(keep));
}

inline Polytope facet_polytope(const Polytope& P, std::size_t f) { return subpolytope(P, P.facets.at(f).vertices); }

/// Exact section P ∩ H for a hyperplane H (vertices on H plus edge cuts).
/// Labels: vertex labels, and "cut:u|v" for edge cuts. An empty section
/// comes back with dim −1 and no vertices.
inline Polytope hyperplane_section(const Polytope& P, const Flat& H) {
  if (H.dim() != static_cast<int>(P.ambient_dim) - 1) throw std::invalid_argument("hyperplane_section: H is not a hyperplane");
  const auto eq = H.equations().front();
  const std::size_t d = P.ambient_dim;
  auto value = [&](const Point& x) {
    Scalar s = eq[d];
    for (std::size_t i = 0; i < d; ++i) s += eq[i] * x[i];
    return s;
  };
  PointConfiguration cut(d);
  std::map<std::string, Scalar> val;
  for (const auto& [l, p] : P.vertices.points()) {
    val[l] = value(p);
    if (val[l].is_zero()) cut.insert(l, p);
  }
  for (const auto& [u, v] : edges(P)) {
    const int su = val[u].sign(), sv = val[v].sign();
    if (su * sv >= 0) continue;
    const Scalar t = val[u] / (val[u] - val[v]);
    const Point& a = P.at(u);
    const Point& b = P.at(v);
    Point x(d);
    for (std::size_t i = 0; i < d; ++i) x[i] = a[i] + t * (b[i] - a[i]);
    cut.insert("cut:" + u + "|" + v, x);
  }
  if (cut.empty()) {
    Polytope empty;
    empty.ambient_dim = d;
    empty.vertices = PointConfiguration(d);
    return empty;
  }
  return convex_hull(cut);
}

/// Affine chart of a facet: φ^{-1}(y) = bary + Σ y_i U_i + y_d w with the
/// facet at y_d = 0 and the polytope in y_d ≥ 0.
struct FacetChart {
  Matrix<Scalar> to_chart;    // (d+1)×(d+1) homogeneous
  Matrix<Scalar> from_chart;  // inverse
};

inline FacetChart facet_chart(const Polytope& P, std::size_t fi) {
  const auto& f = P.facets.at(fi);
  const std::size_t d = P.ambient_dim;
  Point bary(d, Scalar(0));
  for (const auto& l : f.vertices)
    for (std::size_t j = 0; j < d; ++j) bary[j] += P.at(l)[j];
  for (auto& x : bary) x /= Scalar(static_cast<long>(f.vertices.size()));
  Matrix<Scalar> nrow{f.normal};
  auto U = linalg::kernel(nrow, d);
  // w with n·w = −1.
  Scalar nn(0);
  for (const auto& x : f.normal) nn += x * x;
  std::vector<Scalar> w(d);
  for (std::size_t j = 0; j < d; ++j) w[j] = -f.normal[j] / nn;
  Matrix<Scalar> inv(d + 1, std::vector<Scalar>(d + 1, Scalar(0)));
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i + 1 < d; ++i) inv[j][i] = U[i][j];
    inv[j][d - 1] = w[j];
    inv[j][d] = bary[j];
  }
  inv[d][d] = Scalar(1);
  return {linalg::inverse(inv), inv};
}

/// (p, 1) without HPoint's rescaling, so signs of image weights are meaningful.
inline std::vector<Scalar> homogenize(Point p) {
  p.emplace_back(1);
  return p;
}

inline Point apply_h(const Matrix<Scalar>& M, const Point& p) { return HPoint(linalg::mul(M, homogenize(p))).affine(); }

struct SumResult {
  Polytope polytope;
  /// Labels of B's vertices in the result.
  std::map<std::string, std::string> b_labels;
};

/// Connected sum A #_{FA = FB} B. B is moved by a projective map that glues
/// FB onto FA and places B beyond FA, squashed until the union is convex with
/// f_{d−1} = f_{d−1}(A) + f_{d−1}(B) − 2. Throws if no positioning is found.
inline SumResult connected_sum(const Polytope& A, const Polytope& B, std::size_t fa, std::size_t fb,
                               const std::string& b_prefix = "b:") {
  const std::size_t d = A.ambient_dim;
  if (B.ambient_dim != d || A.dim != static_cast<int>(d) || B.dim != static_cast<int>(d))
    throw std::invalid_argument("connected_sum: full-dimensional polytopes of equal dimension required");
  const Polytope FA = facet_polytope(A, fa), FB = facet_polytope(B, fb);
  auto iso = combinatorially_equivalent(FB, FA);
  if (!iso) throw std::invalid_argument("connected_sum: facets are not combinatorially equivalent");
  const FacetChart ca = facet_chart(A, fa), cb = facet_chart(B, fb);

  // Facet correspondence in chart coordinates (first d−1 entries).
  std::vector<std::string> fb_labels = B.facets[fb].vertices;
  std::vector<Point> src, dst;
  for (const auto& l : fb_labels) {
    Point y = apply_h(cb.to_chart, B.at(l));
    Point z = apply_h(ca.to_chart, A.at(iso->at(l)));
    y.pop_back();
    z.pop_back();
    src.push_back(y);
    dst.push_back(z);
  }
  // g: d×d homogeneous map of R^{d−1}.
  Matrix<Scalar> g;
  if (src.size() == d) {
    // Simplex facet: the unique affine map.
    Matrix<Scalar> sys;
    std::vector<Scalar> rhs;
    const std::size_t n = d - 1;
    for (std::size_t i = 0; i < src.size(); ++i)
      for (std::size_t r = 0; r < n; ++r) {
        std::vector<Scalar> row(n * d, Scalar(0));
        for (std::size_t c = 0; c < n; ++c) row[r * d + c] = src[i][c];
        row[r * d + n] = Scalar(1);
        sys.push_back(std::move(row));
        rhs.push_back(dst[i][r]);
      }
    std::vector<Scalar> sol;
    if (!linalg::solve(sys, rhs, sol)) throw std::logic_error("connected_sum: affine facet map failed");
    g.assign(d, std::vector<Scalar>(d, Scalar(0)));
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < d; ++c) g[r][c] = sol[r * d + c];
    g[n][n] = Scalar(1);
  } else {
    std::vector<HPoint> hs, hd;
    for (const auto& p : src) hs.push_back(HPoint::from_affine(p));
    for (const auto& p : dst) hd.push_back(HPoint::from_affine(p));
    auto res = find_projective_map(hs, hd);
    if (!res.map) throw std::invalid_argument("connected_sum: facets are not projectively equivalent");
    g = res.map->matrix();
    std::vector<int> signs;
    for (const auto& p : src) signs.push_back(linalg::dot(g[d - 1], homogenize(p)).sign());
    if (std::all_of(signs.begin(), signs.end(), [](int s) { return s < 0; }))
      for (auto& row : g)
        for (auto& x : row) x = -x;
    else if (!std::all_of(signs.begin(), signs.end(), [](int s) { return s > 0; }))
      throw std::invalid_argument("connected_sum: facet map separates the facet");
  }

  const std::size_t target_facets = A.num_facets() + B.num_facets() - 2;
  const std::size_t target_vertices = A.num_vertices() + B.num_vertices() - fb_labels.size();
  Scalar mu(1);
  for (int attempt = 0; attempt < 96; ++attempt, mu *= Scalar(2)) {
    // G acts on chart coordinates (y', y_d, 1): reflect y_d, add μ·y_d to the denominator.
    Matrix<Scalar> G(d + 1, std::vector<Scalar>(d + 1, Scalar(0)));
    for (std::size_t r = 0; r + 1 < d; ++r) {
      for (std::size_t c = 0; c + 1 < d; ++c) G[r][c] = g[r][c];
      G[r][d] = g[r][d - 1];
    }
    G[d - 1][d - 1] = Scalar(-1);
    for (std::size_t c = 0; c + 1 < d; ++c) G[d][c] = g[d - 1][c];
    G[d][d - 1] = mu;
    G[d][d] = g[d - 1][d - 1];
    const Matrix<Scalar> T = linalg::mul(ca.from_chart, linalg::mul(G, cb.to_chart));
    bool ok = true;
    SumResult out;
    PointConfiguration all = A.vertices;
    for (const auto& [l, p] : B.vertices.points()) {
      auto h = linalg::mul(T, homogenize(p));
      if (h[d].sign() <= 0) {
        ok = false;
        break;
      }
      if (iso->count(l)) {
        out.b_labels[l] = iso->at(l);
        continue;
      }
      Point q(d);
      for (std::size_t j = 0; j < d; ++j) q[j] = h[j] / h[d];
      // Strictly beyond FA, strictly beneath every other facet of A.
      for (std::size_t f = 0; f < A.num_facets() && ok; ++f) {
        const int s = facet_side(A.facets[f], q);
        ok = f == fa ? s > 0 : s < 0;
      }
      if (!ok) break;
      out.b_labels[l] = b_prefix + l;
      all.insert(b_prefix + l, q);
    }
    if (!ok) continue;
    out.polytope = convex_hull(all);
    if (out.polytope.num_facets() != target_facets || out.polytope.num_vertices() != target_vertices) continue;
    return out;
  }
  throw std::runtime_error("connected_sum: no admissible positioning found");
}

// ---------------------------------------------------------------------------
// Stacked and k-stacked polytopes

/// Connected-sum construction tree: each summand's vertex labels in the final
/// polytope and its facet count; gluings name the shared facet.
struct StackedRecipe {
  std::size_t d = 0;
  std::size_t k = 0;
  struct Summand {
    std::string kind;
    std::vector<std::string> labels;
    std::size_t facets = 0;
  };
  struct Gluing {
    std::size_t onto;  // summand index already present
    std::size_t added;
    std::vector<std::string> facet;
  };
  std::vector<Summand> summands;
  std::vector<Gluing> gluings;
};

/// The simplex conv{0, e_1, …, e_d}, labels "v0".."vd".
inline Polytope standard_simplex(std::size_t d, const std::string& prefix = "v") {
  PointConfiguration c(d);
  c.insert(prefix + "0", Point(d, Scalar(0)));
  for (std::size_t i = 0; i < d; ++i) {
    Point p(d, Scalar(0));
    p[i] = Scalar(1);
    c.insert(prefix + std::to_string(i + 1), p);
  }
  return convex_hull(c);
}

/// Stacks a new vertex beyond facet `fi` (barycenter pushed outward, height
/// halved until it sees only that facet).
inline Polytope stack_on_facet(const Polytope& P, std::size_t fi, const std::string& label) {
  const auto& f = P.facets.at(fi);
  const std::size_t d = P.ambient_dim;
  Point bary(d, Scalar(0)), centroid(d, Scalar(0));
  for (const auto& l : f.vertices)
    for (std::size_t j = 0; j < d; ++j) bary[j] += P.at(l)[j];
  for (auto& x : bary) x /= Scalar(static_cast<long>(f.vertices.size()));
  for (const auto& [l, p] : P.vertices.points())
    for (std::size_t j = 0; j < d; ++j) centroid[j] += p[j];
  for (auto& x : centroid) x /= Scalar(static_cast<long>(P.num_vertices()));
  Scalar h(1);
  for (int attempt = 0; attempt < 200; ++attempt, h /= Scalar(2)) {
    Point q(d);
    for (std::size_t j = 0; j < d; ++j) q[j] = bary[j] + h * (bary[j] - centroid[j]);
    bool ok = true;
    for (std::size_t g = 0; g < P.num_facets() && ok; ++g) ok = g == fi ? facet_side(P.facets[g], q) > 0 : facet_side(P.facets[g], q) < 0;
    if (!ok) continue;
    PointConfiguration c = P.vertices;
    c.insert(label, q);
    return convex_hull(c);
  }
  throw std::runtime_error("stack_on_facet: no admissible height");
}

inline std::pair<Polytope, StackedRecipe> stacked_generator(std::size_t d, std::size_t s, std::uint64_t seed) {
  if (d < 2) throw std::invalid_argument("stacked_generator: d >= 2 required");
  Rng rng(seed);
  Polytope P = standard_simplex(d);
  StackedRecipe r;
  r.d = d;
  r.k = d + 1;
  r.summands.push_back({"simplex", P.labels(), P.num_facets()});
  for (std::size_t i = 0; i < s; ++i) {
    const std::size_t fi = rng.uniform_index(P.num_facets());
    const auto facet = P.facets[fi].vertices;
    const std::string label = "s" + std::to_string(i + 1);
    P = stack_on_facet(P, fi, label);
    // The facet belongs to whichever summand contains all of its vertices.
    std::size_t onto = 0;
    for (std::size_t j = r.summands.size(); j-- > 0;) {
      const auto& L = r.summands[j].labels;
      if (std::all_of(facet.begin(), facet.end(), [&](const std::string& x) { return std::find(L.begin(), L.end(), x) != L.end(); })) {
        onto = j;
        break;
      }
    }
    std::vector<std::string> labels = facet;
    labels.push_back(label);
    std::sort(labels.begin(), labels.end());
    r.summands.push_back({"simplex", labels, d + 1});
    r.gluings.push_back({onto, r.summands.size() - 1, facet});
  }
  return {P, r};
}

/// The prism over a (d−1)-simplex: d+2 facets.
inline Polytope simplex_prism(std::size_t d) {
  PointConfiguration c(d);
  for (int top = 0; top < 2; ++top) {
    for (std::size_t i = 0; i < d; ++i) {
      Point p(d, Scalar(0));
      if (i > 0) p[i - 1] = Scalar(1);
      p[d - 1] = Scalar(top);
      c.insert((top ? "t" : "b") + std::to_string(i), p);
    }
  }
  return convex_hull(c);
}

inline Polytope unit_cube(std::size_t d) {
  PointConfiguration c(d);
  for (const auto& v : lattice_box(d, 0, 1)) {
    Point p;
    for (int x : v) p.emplace_back(x);
    c.insert(lattice_label("c", v), p);
  }
  return convex_hull(c);
}

namespace detail {

inline std::pair<std::string, Polytope> random_summand(std::size_t d, std::size_t k, Rng& rng) {
  std::vector<std::string> kinds{"simplex"};
  const std::size_t max_stack = d >= 2 && k > d + 1 ? (k - d - 1) / (d - 1) : 0;
  if (max_stack >= 1) kinds.push_back("stacked");
  if (k >= d + 2) kinds.push_back("prism");
  if (k >= 2 * d) kinds.push_back("cube");
  const std::string kind = kinds[rng.uniform_index(kinds.size())];
  if (kind == "prism") return {kind, simplex_prism(d)};
  if (kind == "cube") return {kind, unit_cube(d)};
  Polytope S = standard_simplex(d);
  if (kind == "stacked") {
    const std::size_t j = 1 + rng.uniform_index(max_stack);
    for (std::size_t i = 0; i < j; ++i) S = stack_on_facet(S, rng.uniform_index(S.num_facets()), "s" + std::to_string(i + 1));
  }
  return {kind, S};
}

}  // namespace detail

/// Connected sum of `parts` pseudo-random summands with at most k facets each.
inline std::pair<Polytope, StackedRecipe> kstacked_generator(std::size_t d, std::size_t k, std::size_t parts,
                                                             std::uint64_t seed) {
  if (d < 2) throw std::invalid_argument("kstacked_generator: d >= 2 required");
  if (k < d + 1) throw std::invalid_argument("kstacked_generator: k >= d+1 required");
  if (parts < 1) throw std::invalid_argument("kstacked_generator: parts >= 1 required");
  Rng rng(seed);
  StackedRecipe r;
  r.d = d;
  r.k = k;
  auto relabeled = [](const Polytope& S, const std::string& pre) { return convex_hull(relabel(S.vertices, pre)); };
  auto [kind0, S0] = detail::random_summand(d, k, rng);
  Polytope P = relabeled(S0, "p0:");
  r.summands.push_back({kind0, P.labels(), P.num_facets()});
  for (std::size_t part = 1; part < parts; ++part) {
    const std::string pre = "p" + std::to_string(part) + ":";
    bool glued = false;
    for (int attempt = 0; attempt < 16 && !glued; ++attempt) {
      auto [kind, S] = detail::random_summand(d, k, rng);
      // Random facet of P; a combinatorially matching facet of S.
      std::vector<std::size_t> order(P.num_facets());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      rng.shuffle(order);
      for (std::size_t fa : order) {
        const Polytope FA = facet_polytope(P, fa);
        std::optional<std::size_t> fb;
        for (std::size_t j = 0; j < S.num_facets() && !fb; ++j)
          if (S.facets[j].vertices.size() == FA.num_vertices() && combinatorially_equivalent(facet_polytope(S, j), FA)) fb = j;
        if (!fb) continue;
        try {
          auto sum = connected_sum(P, S, fa, *fb, pre);
          std::vector<std::string> labels;
          for (const auto& [from, to] : sum.b_labels) labels.push_back(to);
          std::sort(labels.begin(), labels.end());
          std::size_t onto = 0;
          const auto& fv = P.facets[fa].vertices;
          for (std::size_t j = r.summands.size(); j-- > 0;) {
            const auto& L = r.summands[j].labels;
            if (std::all_of(fv.begin(), fv.end(), [&](const std::string& x) { return std::binary_search(L.begin(), L.end(), x); })) {
              onto = j;
              break;
            }
          }
          r.summands.push_back({kind, labels, S.num_facets()});
          r.gluings.push_back({onto, r.summands.size() - 1, fv});
          P = std::move(sum.polytope);
          glued = true;
        } catch (const std::exception&) {
          continue;
        }
        break;
      }
    }
    if (!glued) throw std::runtime_error("kstacked_generator: could not glue summand " + std::to_string(part));
  }
  return {P, r};
}

}  // namespace projuniq

#endif  // PROJUNIQ_HULL_HPP
