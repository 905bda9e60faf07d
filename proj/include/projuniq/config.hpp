#ifndef PROJUNIQ_CONFIG_HPP
#define PROJUNIQ_CONFIG_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "projuniq/projgeom.hpp"

namespace projuniq {

struct PointLess {
  bool operator()(const Point& a, const Point& b) const {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), Scalar::repr_less);
  }
};

/// "prefix:(a,b,c)".
inline std::string lattice_label(const std::string& prefix, const std::vector<int>& idx) {
  std::string s = prefix + ":(";
  for (std::size_t i = 0; i < idx.size(); ++i) s += (i ? "," : "") + std::to_string(idx[i]);
  return s + ")";
}

/// All integer vectors in {lo..hi}^d, first coordinate slowest.
inline std::vector<std::vector<int>> lattice_box(std::size_t d, int lo, int hi) {
  std::vector<std::vector<int>> out;
  std::vector<int> v(d, lo);
  while (true) {
    out.push_back(v);
    std::size_t i = d;
    while (i > 0) {
      --i;
      if (v[i] < hi) {
        ++v[i];
        break;
      }
      v[i] = lo;
      if (i == 0) return out;
    }
    if (d == 0) return out;
  }
}

/// Labeled set of pairwise distinct affine points in R^d.
///
/// Inserting a point that coincides with an existing one records the new
/// label as an alias of the existing label instead of duplicating it.
class PointConfiguration {
 public:
  PointConfiguration() = default;
  explicit PointConfiguration(std::size_t d) : d_(d) {}

  std::size_t ambient_dim() const { return d_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

  /// Inserts and returns the canonical label the point ends up under.
  std::string insert(const std::string& label, const Point& p) {
    if (p.size() != d_) throw std::invalid_argument("point dimension mismatch for " + label);
    if (auto it = points_.find(label); it != points_.end()) {
      if (!equal_points(it->second, p)) throw std::invalid_argument("label reused with different coordinates: " + label);
      return label;
    }
    if (auto it = aliases_.find(label); it != aliases_.end()) {
      if (!equal_points(points_.at(it->second), p))
        throw std::invalid_argument("label reused with different coordinates: " + label);
      return it->second;
    }
    if (auto it = index_.find(p); it != index_.end()) {
      aliases_[label] = it->second;
      return it->second;
    }
    points_.emplace(label, p);
    index_.emplace(p, label);
    return label;
  }

  /// Records `alias` as another name of the (existing) label `target`.
  void add_alias(const std::string& alias, const std::string& target) {
    const std::string t = resolve(target);
    if (points_.count(alias)) {
      if (alias != t) throw std::invalid_argument("alias collides with a point label: " + alias);
      return;
    }
    aliases_[alias] = t;
  }

  bool contains(const std::string& label) const { return points_.count(label) || aliases_.count(label); }

  std::string resolve(const std::string& label) const {
    if (points_.count(label)) return label;
    if (auto it = aliases_.find(label); it != aliases_.end()) return it->second;
    throw std::out_of_range("unknown label: " + label);
  }

  const Point& at(const std::string& label) const { return points_.at(resolve(label)); }

  /// Label of a point with these coordinates, if present.
  std::optional<std::string> find(const Point& p) const {
    if (auto it = index_.find(p); it != index_.end()) return it->second;
    return std::nullopt;
  }

  std::vector<std::string> labels() const {
    std::vector<std::string> out;
    out.reserve(points_.size());
    for (const auto& [l, p] : points_) out.push_back(l);
    return out;
  }

  const std::map<std::string, Point>& points() const { return points_; }
  const std::map<std::string, std::string>& aliases() const { return aliases_; }

  PointConfiguration restricted(const std::vector<std::string>& keep) const {
    PointConfiguration c(d_);
    for (const auto& l : keep) c.insert(resolve(l), at(l));
    return c;
  }

  friend bool operator==(const PointConfiguration& a, const PointConfiguration& b) {
    if (a.d_ != b.d_ || a.points_.size() != b.points_.size()) return false;
    for (const auto& [l, p] : a.points_) {
      auto it = b.points_.find(l);
      if (it == b.points_.end() || !equal_points(it->second, p)) return false;
    }
    return true;
  }

  static bool equal_points(const Point& a, const Point& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] != b[i]) return false;
    return true;
  }

 private:
  std::size_t d_ = 0;
  std::map<std::string, Point> points_;
  std::map<std::string, std::string> aliases_;
  std::map<Point, std::string, PointLess> index_;
};

/// Polytope vertices together with free points.
struct PPConfiguration {
  PointConfiguration vertices;
  PointConfiguration free_points;
};

// ---------------------------------------------------------------------------
// Standard configurations

/// The 3^d points of {−1,0,1}^d, labeled "qd:(..)".
inline PointConfiguration qd(std::size_t d) {
  if (d < 1) throw std::invalid_argument("qd: d >= 1 required");
  PointConfiguration c(d);
  for (const auto& v : lattice_box(d, -1, 1)) {
    Point p;
    for (int x : v) p.emplace_back(x);
    c.insert(lattice_label("qd", v), p);
  }
  return c;
}

/// Q^d + 1 = {0,1,2}^d, labeled "cube:(..)".
inline PointConfiguration qd_plus_one(std::size_t d) {
  PointConfiguration c(d);
  for (const auto& v : lattice_box(d, 0, 2)) {
    Point p;
    for (int x : v) p.emplace_back(x);
    c.insert(lattice_label("cube", v), p);
  }
  return c;
}

/// The planar grid {0,1,2}², labeled "grid:(i,j)".
inline PointConfiguration grid() {
  PointConfiguration c(2);
  for (const auto& v : lattice_box(2, 0, 2)) c.insert(lattice_label("grid", v), {Scalar(v[0]), Scalar(v[1])});
  return c;
}

inline std::vector<std::string> grid_labels() {
  std::vector<std::string> out;
  for (const auto& v : lattice_box(2, 0, 2)) out.push_back(lattice_label("grid", v));
  return out;
}

/// The 8 vertices of [−1,1]³ and the origin.
inline PointConfiguration w_config() {
  PointConfiguration c(3);
  for (const auto& v : lattice_box(3, -1, 1)) {
    bool corner = std::all_of(v.begin(), v.end(), [](int x) { return x != 0; });
    bool origin = std::all_of(v.begin(), v.end(), [](int x) { return x == 0; });
    if (corner || origin) c.insert(lattice_label("qd", v), {Scalar(v[0]), Scalar(v[1]), Scalar(v[2])});
  }
  return c;
}

/// (D/2)(Q^d + 1) for D = diag(p), labeled "box:(..)" by lattice index in {0,1,2}^d.
inline PointConfiguration proj_box(const Point& p) {
  if (p.size() < 3) throw std::invalid_argument("proj_box: d >= 3 required");
  for (const auto& x : p)
    if (x.sign() <= 0) throw std::invalid_argument("proj_box: coordinates must be positive");
  PointConfiguration c(p.size());
  for (const auto& v : lattice_box(p.size(), 0, 2)) {
    Point q;
    for (std::size_t i = 0; i < p.size(); ++i) q.push_back(p[i] * Scalar(v[i], 2));
    c.insert(lattice_label("box", v), q);
  }
  return c;
}

/// Labels of L(p) = {0, p_i e_i, p_i e_i / 2} inside proj_box.
inline std::vector<std::string> proj_box_frame_labels(std::size_t d) {
  std::vector<std::string> out{lattice_label("box", std::vector<int>(d, 0))};
  for (int k : {2, 1})
    for (std::size_t i = 0; i < d; ++i) {
      std::vector<int> v(d, 0);
      v[i] = k;
      out.push_back(lattice_label("box", v));
    }
  return out;
}

inline PointConfiguration translate(const PointConfiguration& c, const Point& t) {
  PointConfiguration out(c.ambient_dim());
  for (const auto& [l, p] : c.points()) {
    Point q = p;
    for (std::size_t i = 0; i < q.size(); ++i) q[i] += t[i];
    out.insert(l, q);
  }
  for (const auto& [a, l] : c.aliases()) out.add_alias(a, l);
  return out;
}

inline PointConfiguration relabel(const PointConfiguration& c, const std::string& prefix) {
  PointConfiguration out(c.ambient_dim());
  for (const auto& [l, p] : c.points()) out.insert(prefix + l, p);
  for (const auto& [a, l] : c.aliases()) out.add_alias(prefix + a, prefix + l);
  return out;
}

/// Union of a and b; `glue` maps labels of b to labels of a naming the same point.
inline PointConfiguration union_labeled(const PointConfiguration& a, const PointConfiguration& b,
                                        const std::map<std::string, std::string>& glue = {}) {
  if (a.ambient_dim() != b.ambient_dim()) throw std::invalid_argument("union_labeled: dimension mismatch");
  for (const auto& [lb, la] : glue)
    if (!PointConfiguration::equal_points(a.at(la), b.at(lb)))
      throw std::invalid_argument("union_labeled: glued labels " + lb + " / " + la + " differ");
  PointConfiguration out = a;
  auto rename = [&](const std::string& l) {
    auto it = glue.find(l);
    return it == glue.end() ? l : it->second;
  };
  for (const auto& [l, p] : b.points()) {
    const std::string target = rename(l);
    const std::string got = out.insert(target, p);
    if (!out.contains(l)) out.add_alias(l, got);
  }
  for (const auto& [al, l] : b.aliases())
    if (!out.contains(al)) out.add_alias(al, out.resolve(rename(l)));
  return out;
}

/// (x, y) ↦ x e_i + y e_{i+1} in R^d, i 1-based with cyclic successor.
inline PointConfiguration embed_plane(const PointConfiguration& c, std::size_t i, std::size_t d) {
  if (c.ambient_dim() != 2) throw std::invalid_argument("embed_plane: planar input required");
  if (i < 1 || i > d) throw std::invalid_argument("embed_plane: axis index out of range");
  const std::size_t a = i - 1, b = i % d;
  PointConfiguration out(d);
  for (const auto& [l, p] : c.points()) {
    Point q(d, Scalar(0));
    q[a] = p[0];
    q[b] = p[1];
    out.insert(l, q);
  }
  for (const auto& [al, l] : c.aliases()) out.add_alias(al, l);
  return out;
}

inline Point embed_point(const Point& p, std::size_t i, std::size_t d) {
  const std::size_t a = i - 1, b = i % d;
  Point q(d, Scalar(0));
  q[a] = p[0];
  q[b] = p[1];
  return q;
}

// ---------------------------------------------------------------------------
// Chirotope

inline int orientation(const std::vector<Point>& pts) {
  Matrix<Scalar> m;
  for (const auto& p : pts) {
    std::vector<Scalar> row = p;
    row.emplace_back(1);
    m.push_back(std::move(row));
  }
  return linalg::determinant(std::move(m)).sign();
}

/// Visits all k-subsets of {0..n-1} in lexicographic order.
template <class F>
void for_each_combination(std::size_t n, std::size_t k, F&& f) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    f(static_cast<const std::vector<std::size_t>&>(idx));
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// Orientation signs of all (d+1)-subsets of an ordered label list.
class Chirotope {
 public:
  explicit Chirotope(const PointConfiguration& c) : Chirotope(c, c.labels()) {}
  Chirotope(const PointConfiguration& c, std::vector<std::string> order) : labels_(std::move(order)) {
    r_ = c.ambient_dim() + 1;
    for (std::size_t i = 0; i < labels_.size(); ++i) pos_[labels_[i]] = i;
    for_each_combination(labels_.size(), r_, [&](const std::vector<std::size_t>& idx) {
      std::vector<Point> pts;
      for (auto i : idx) pts.push_back(c.at(labels_[i]));
      signs_.push_back(static_cast<signed char>(orientation(pts)));
    });
  }

  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<signed char>& signs() const { return signs_; }

  /// Sign of an arbitrary ordered tuple of labels (alternating).
  int operator()(const std::vector<std::string>& tuple) const {
    if (tuple.size() != r_) throw std::invalid_argument("chirotope: wrong tuple size");
    std::vector<std::size_t> idx;
    for (const auto& l : tuple) idx.push_back(pos_.at(l));
    int parity = 1;
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = i + 1; j < idx.size(); ++j) {
        if (idx[i] == idx[j]) return 0;
        if (idx[i] > idx[j]) parity = -parity;
      }
    std::sort(idx.begin(), idx.end());
    return parity * signs_[rank_of(idx)];
  }

 private:
  std::size_t rank_of(const std::vector<std::size_t>& idx) const {
    // Lexicographic rank of a sorted k-subset of {0..n-1}.
    const std::size_t n = labels_.size(), k = idx.size();
    auto binom = [](std::size_t a, std::size_t b) -> std::size_t {
      if (b > a) return 0;
      std::size_t r = 1;
      for (std::size_t i = 1; i <= b; ++i) r = r * (a - b + i) / i;
      return r;
    };
    std::size_t rank = 0, prev = 0;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t v = (i ? prev + 1 : 0); v < idx[i]; ++v) rank += binom(n - v - 1, k - i - 1);
      prev = idx[i];
    }
    return rank;
  }

  std::size_t r_ = 0;
  std::vector<std::string> labels_;
  std::map<std::string, std::size_t> pos_;
  std::vector<signed char> signs_;
};

// ---------------------------------------------------------------------------
// Lawrence equivalence (checked on hyperplanes spanned by d points)

namespace detail {

inline std::set<std::string> spanned_sign_vectors(const PPConfiguration& pp, const std::vector<std::string>& order,
                                                  std::size_t n_vertices) {
  const std::size_t d = pp.vertices.ambient_dim();
  std::vector<Point> pts;
  for (std::size_t i = 0; i < order.size(); ++i)
    pts.push_back(i < n_vertices ? pp.vertices.at(order[i]) : pp.free_points.at(order[i]));
  std::set<std::string> out;
  for_each_combination(pts.size(), d, [&](const std::vector<std::size_t>& idx) {
    Matrix<Scalar> m;
    for (auto i : idx) {
      std::vector<Scalar> row = pts[i];
      row.emplace_back(1);
      m.push_back(std::move(row));
    }
    auto ker = linalg::kernel(std::move(m), d + 1);
    if (ker.size() != 1) return;
    const auto& h = ker.front();
    std::vector<int> s;
    for (const auto& p : pts) {
      Scalar v = h[d];
      for (std::size_t j = 0; j < d; ++j) v += h[j] * p[j];
      s.push_back(v.sign());
    }
    bool neg = false, pos = false;
    for (std::size_t i = 0; i < n_vertices; ++i) {
      neg |= s[i] < 0;
      pos |= s[i] > 0;
    }
    if (neg && pos) return;
    auto encode = [](const std::vector<int>& v, int f) {
      std::string e;
      for (int x : v) e += x * f > 0 ? '+' : (x * f < 0 ? '-' : '0');
      return e;
    };
    if (!pos) out.insert(encode(s, 1));
    if (!neg) out.insert(encode(s, -1));
  });
  return out;
}

}  // namespace detail

/// Decides Lawrence equivalence under φ (labels of a → labels of b) using
/// the sign vectors of hyperplanes spanned by d-point subsets that keep P in
/// a closed halfspace. Exact for inputs where every relevant partition is
/// realized by a spanned hyperplane.
inline bool lawrence_equivalent(const PPConfiguration& a, const PPConfiguration& b,
                                const std::map<std::string, std::string>& phi) {
  if (a.vertices.size() != b.vertices.size() || a.free_points.size() != b.free_points.size()) return false;
  if (a.vertices.ambient_dim() != b.vertices.ambient_dim()) return false;
  std::vector<std::string> oa = a.vertices.labels(), ob;
  const std::size_t nv = oa.size();
  for (const auto& l : a.free_points.labels()) oa.push_back(l);
  for (std::size_t i = 0; i < oa.size(); ++i) {
    auto it = phi.find(oa[i]);
    if (it == phi.end()) return false;
    const bool in_b = i < nv ? b.vertices.contains(it->second) : b.free_points.contains(it->second);
    if (!in_b) return false;
    ob.push_back(it->second);
  }
  return detail::spanned_sign_vectors(a, oa, nv) == detail::spanned_sign_vectors(b, ob, nv);
}

}  // namespace projuniq

#endif  // PROJUNIQ_CONFIG_HPP
