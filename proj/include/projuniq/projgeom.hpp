#ifndef PROJUNIQ_PROJGEOM_HPP
#define PROJUNIQ_PROJGEOM_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "projuniq/exact/scalar.hpp"
#include "projuniq/linalg.hpp"

namespace projuniq {

/// Affine point in R^d.
using Point = std::vector<Scalar>;

/// Homogeneous point of projective d-space; the homogenizing coordinate is last.
/// Stored canonically: first nonzero coordinate equals 1.
class HPoint {
 public:
  HPoint() = default;
  explicit HPoint(std::vector<Scalar> coords) : x_(std::move(coords)) { normalize(); }

  static HPoint from_affine(const Point& p) {
    std::vector<Scalar> c = p;
    c.emplace_back(1);
    return HPoint(std::move(c));
  }

  std::size_t ambient_dim() const { return x_.size() - 1; }
  const std::vector<Scalar>& coords() const { return x_; }
  const Scalar& operator[](std::size_t i) const { return x_[i]; }
  bool is_finite() const { return !x_.back().is_zero(); }

  Point affine() const {
    if (!is_finite()) throw std::domain_error("point at infinity has no affine coordinates");
    const Scalar inv = x_.back().inverse();
    Point p(x_.size() - 1);
    for (std::size_t i = 0; i + 1 < x_.size(); ++i) p[i] = x_[i] * inv;
    return p;
  }

  friend bool operator==(const HPoint& a, const HPoint& b) {
    if (a.x_.size() != b.x_.size()) return false;
    for (std::size_t i = 0; i < a.x_.size(); ++i)
      if (a.x_[i] != b.x_[i]) return false;
    return true;
  }
  friend bool operator!=(const HPoint& a, const HPoint& b) { return !(a == b); }

  std::string to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < x_.size(); ++i) s += (i ? ", " : "") + x_[i].to_string();
    return s + "]";
  }

 private:
  void normalize() {
    std::size_t i = 0;
    while (i < x_.size() && x_[i].is_zero()) ++i;
    if (i == x_.size()) throw std::invalid_argument("homogeneous point with all coordinates zero");
    if (x_[i] == Scalar(1)) return;
    const Scalar inv = x_[i].inverse();
    for (std::size_t j = i; j < x_.size(); ++j) x_[j] = x_[j] * inv;
    for (std::size_t j = 0; j < i; ++j) x_[j] = Scalar(0);
  }
  std::vector<Scalar> x_;
};

/// Projective flat, held either by a spanning basis (RREF rows) or by its
/// linear equations (RREF rows). The other form is derived on demand.
class Flat {
 public:
  Flat() = default;

  static Flat empty(std::size_t d) {
    Flat f;
    f.d_ = d;
    f.basis_ = Matrix<Scalar>{};
    return f;
  }

  static Flat span(const std::vector<HPoint>& pts) {
    if (pts.empty()) throw std::invalid_argument("span of no points: use Flat::empty");
    Matrix<Scalar> m;
    for (const auto& p : pts) m.push_back(p.coords());
    return from_basis(std::move(m), pts.front().ambient_dim());
  }

  static Flat from_basis(Matrix<Scalar> rows, std::size_t d) {
    Flat f;
    f.d_ = d;
    linalg::rref(rows);
    f.basis_ = std::move(rows);
    return f;
  }

  /// Flat {x : eq·x = 0 for every row}.
  static Flat from_equations(Matrix<Scalar> eqs, std::size_t d) {
    Flat f;
    f.d_ = d;
    linalg::rref(eqs);
    f.equations_ = std::move(eqs);
    return f;
  }

  std::size_t ambient_dim() const { return d_; }

  Matrix<Scalar> basis() const {
    if (basis_) return *basis_;
    auto k = linalg::kernel(*equations_, d_ + 1);
    linalg::rref(k);
    return k;
  }

  Matrix<Scalar> equations() const {
    if (equations_) return *equations_;
    auto k = linalg::kernel(*basis_, d_ + 1);
    linalg::rref(k);
    return k;
  }

  std::size_t rank() const { return basis_ ? basis_->size() : d_ + 1 - equations_->size(); }
  /// Projective dimension; −1 for the empty flat.
  int dim() const { return static_cast<int>(rank()) - 1; }
  bool is_point() const { return rank() == 1; }
  bool is_empty() const { return rank() == 0; }

  HPoint point() const {
    if (!is_point()) throw std::domain_error("flat is not a point (dim " + std::to_string(dim()) + ")");
    return HPoint(basis().front());
  }

  bool contains(const HPoint& p) const {
    if (equations_) {
      for (const auto& e : *equations_)
        if (!linalg::dot(e, p.coords()).is_zero()) return false;
      return true;
    }
    Matrix<Scalar> m = *basis_;
    m.push_back(p.coords());
    return linalg::rank(std::move(m)) == basis_->size();
  }

  bool contains(const Flat& other) const {
    for (const auto& row : other.basis())
      if (!contains(HPoint(row))) return false;
    return true;
  }

  friend bool operator==(const Flat& a, const Flat& b) {
    return a.d_ == b.d_ && a.rank() == b.rank() && a.contains(b);
  }

 private:
  std::size_t d_ = 0;
  std::optional<Matrix<Scalar>> basis_;
  std::optional<Matrix<Scalar>> equations_;
};

inline Flat as_flat(const HPoint& p) { return Flat::span({p}); }

inline Flat join(const std::vector<Flat>& flats) {
  if (flats.empty()) throw std::invalid_argument("join of nothing");
  Matrix<Scalar> rows;
  for (const auto& f : flats)
    for (auto& r : f.basis()) rows.push_back(std::move(r));
  return Flat::from_basis(std::move(rows), flats.front().ambient_dim());
}

inline Flat join(const std::vector<HPoint>& pts) { return Flat::span(pts); }
inline Flat join(const HPoint& a, const HPoint& b) { return Flat::span({a, b}); }

inline Flat meet(const std::vector<Flat>& flats) {
  if (flats.empty()) throw std::invalid_argument("meet of nothing");
  Matrix<Scalar> eqs;
  for (const auto& f : flats)
    for (auto& r : f.equations()) eqs.push_back(std::move(r));
  return Flat::from_equations(std::move(eqs), flats.front().ambient_dim());
}
inline Flat meet(const Flat& a, const Flat& b) { return meet(std::vector<Flat>{a, b}); }

class ProjectiveMap {
 public:
  ProjectiveMap() = default;
  explicit ProjectiveMap(Matrix<Scalar> m) : m_(std::move(m)) {
    if (linalg::determinant(m_).is_zero()) throw std::domain_error("projective map: singular matrix");
  }
  static ProjectiveMap identity(std::size_t d) {
    Matrix<Scalar> m(d + 1, std::vector<Scalar>(d + 1, Scalar(0)));
    for (std::size_t i = 0; i <= d; ++i) m[i][i] = Scalar(1);
    return ProjectiveMap(std::move(m));
  }

  const Matrix<Scalar>& matrix() const { return m_; }
  std::size_t ambient_dim() const { return m_.size() - 1; }
  Scalar determinant() const { return linalg::determinant(m_); }

  HPoint apply(const HPoint& p) const { return HPoint(linalg::mul(m_, p.coords())); }
  Point apply_affine(const Point& p) const { return apply(HPoint::from_affine(p)).affine(); }
  ProjectiveMap inverse() const { return ProjectiveMap(linalg::inverse(m_)); }
  ProjectiveMap then(const ProjectiveMap& next) const { return ProjectiveMap(linalg::mul(next.m_, m_)); }

  /// Equality up to a global nonzero factor.
  friend bool operator==(const ProjectiveMap& a, const ProjectiveMap& b) {
    if (a.m_.size() != b.m_.size()) return false;
    std::vector<Scalar> va, vb;
    for (const auto& r : a.m_) va.insert(va.end(), r.begin(), r.end());
    for (const auto& r : b.m_) vb.insert(vb.end(), r.begin(), r.end());
    return HPoint(va) == HPoint(vb);
  }

 private:
  Matrix<Scalar> m_;
};

enum class MapStatus { found, none, ambiguous };

struct MapResult {
  MapStatus status = MapStatus::none;
  /// Set for `found`, and for `ambiguous` when some admissible witness exists.
  std::optional<ProjectiveMap> map;
};

/// Solves T(src_i) ≡ dst_i for a projective T via the homogeneous system in
/// the (d+1)² matrix entries and one scale unknown per point.
inline MapResult find_projective_map(const std::vector<HPoint>& src, const std::vector<HPoint>& dst) {
  if (src.size() != dst.size()) throw std::invalid_argument("find_projective_map: size mismatch");
  MapResult res;
  if (src.empty()) return res;
  const std::size_t D = src.front().coords().size(), n = src.size();
  const std::size_t unknowns = D * D + n;
  Matrix<Scalar> sys;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t r = 0; r < D; ++r) {
      std::vector<Scalar> row(unknowns, Scalar(0));
      for (std::size_t c = 0; c < D; ++c) row[r * D + c] = src[i][c];
      row[D * D + i] = -dst[i][r];
      sys.push_back(std::move(row));
    }
  }
  const Matrix<Scalar> ker = linalg::kernel(std::move(sys), unknowns);
  auto admissible = [&](const std::vector<Scalar>& v) -> std::optional<ProjectiveMap> {
    for (std::size_t i = 0; i < n; ++i)
      if (v[D * D + i].is_zero()) return std::nullopt;
    Matrix<Scalar> m(D, std::vector<Scalar>(D));
    for (std::size_t r = 0; r < D; ++r)
      for (std::size_t c = 0; c < D; ++c) m[r][c] = v[r * D + c];
    if (linalg::determinant(m).is_zero()) return std::nullopt;
    return ProjectiveMap(std::move(m));
  };
  if (ker.empty()) return res;
  if (ker.size() == 1) {
    res.map = admissible(ker.front());
    res.status = res.map ? MapStatus::found : MapStatus::none;
    return res;
  }
  res.status = MapStatus::ambiguous;
  // Moment-curve combinations Σ s^j k_j: the admissibility conditions are
  // nonzero polynomials in s whenever any admissible solution exists.
  const long tries = static_cast<long>(ker.size() * (D + n)) + 8;
  for (long s = 1; s <= tries && !res.map; ++s) {
    std::vector<Scalar> v(unknowns, Scalar(0));
    Scalar w(1);
    for (const auto& k : ker) {
      for (std::size_t j = 0; j < unknowns; ++j)
        if (!k[j].is_zero()) v[j] += w * k[j];
      w *= Scalar(s);
    }
    res.map = admissible(v);
  }
  return res;
}

/// Exactly d+2 points in projective d-space, every d+1 of them independent.
inline bool is_projective_basis(const std::vector<HPoint>& pts) {
  if (pts.empty()) return false;
  const std::size_t D = pts.front().coords().size();
  if (pts.size() != D + 1) return false;
  for (std::size_t skip = 0; skip < pts.size(); ++skip) {
    Matrix<Scalar> m;
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (i != skip) m.push_back(pts[i].coords());
    if (linalg::rank(std::move(m)) != D) return false;
  }
  return true;
}

}  // namespace projuniq

#endif  // PROJUNIQ_PROJGEOM_HPP
