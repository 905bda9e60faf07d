#ifndef PROJUNIQ_VONSTAUDT_HPP
#define PROJUNIQ_VONSTAUDT_HPP

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "projuniq/derive.hpp"
#include "projuniq/random.hpp"

namespace projuniq {

enum class GadgetOp { add, mlt, sub, div };

inline const char* op_name(GadgetOp op) {
  switch (op) {
    case GadgetOp::add: return "ADD";
    case GadgetOp::mlt: return "MLT";
    case GadgetOp::sub: return "SUB";
    case GadgetOp::div: return "DIV";
  }
  return "?";
}

/// Operand of a gadget node.
struct Ref {
  enum Kind { external, node, zero, one } kind = zero;
  std::size_t index = 0;
  static Ref ext(std::size_t i) { return {external, i}; }
  static Ref of(std::size_t i) { return {node, i}; }
  static Ref constant0() { return {zero, 0}; }
  static Ref constant1() { return {one, 0}; }
  friend bool operator==(const Ref& a, const Ref& b) {
    return a.kind == b.kind && ((a.kind != external && a.kind != node) || a.index == b.index);
  }
};

struct GadgetNode {
  GadgetOp op;
  Ref lhs, rhs;
};

/// Symbolic DAG of gadget applications; node operands refer to earlier nodes,
/// external inputs, or the grid constants 0 and 1.
struct ArrangementTemplate {
  std::size_t num_inputs = 1;
  std::vector<GadgetNode> nodes;
  Ref output = Ref::ext(0);

  static ArrangementTemplate identity() { return {}; }
  static ArrangementTemplate single(GadgetOp op) { return {2, {{op, Ref::ext(0), Ref::ext(1)}}, Ref::of(0)}; }

  void validate() const {
    auto ok = [&](const Ref& r, std::size_t limit) {
      if (r.kind == Ref::external && r.index >= num_inputs) throw std::invalid_argument("template: bad external index");
      if (r.kind == Ref::node && r.index >= limit) throw std::invalid_argument("template: cyclic or forward node reference");
    };
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      ok(nodes[i].lhs, i);
      ok(nodes[i].rhs, i);
    }
    ok(output, nodes.size());
  }
};

/// Wiring for compose: the inner output feeds `outer_input`; `shared` maps
/// inner externals to outer externals that name the same variable.
struct Wiring {
  std::size_t outer_input = 0;
  std::map<std::size_t, std::size_t> shared;
};

/// Functional-arrangement composition. New externals: outer's, with the
/// replaced input substituted in place by inner's unshared externals.
inline ArrangementTemplate compose(const ArrangementTemplate& outer, const ArrangementTemplate& inner, const Wiring& w) {
  outer.validate();
  inner.validate();
  if (w.outer_input >= outer.num_inputs) throw std::invalid_argument("compose: outer input out of range");
  for (const auto& [i, o] : w.shared) {
    if (i >= inner.num_inputs || o >= outer.num_inputs) throw std::invalid_argument("compose: shared index out of range");
    if (o == w.outer_input) throw std::invalid_argument("compose: cyclic wiring (inner input identified with its own output slot)");
  }
  std::vector<std::size_t> fresh;  // inner externals that become new externals
  for (std::size_t i = 0; i < inner.num_inputs; ++i)
    if (!w.shared.count(i)) fresh.push_back(i);
  // Outer external k -> new index.
  std::vector<std::size_t> outer_map(outer.num_inputs);
  std::size_t pos = 0;
  std::map<std::size_t, std::size_t> inner_map;
  for (std::size_t k = 0; k < outer.num_inputs; ++k) {
    if (k == w.outer_input) {
      for (auto i : fresh) inner_map[i] = pos++;
      continue;
    }
    outer_map[k] = pos++;
  }
  for (const auto& [i, o] : w.shared) inner_map[i] = outer_map[o];

  ArrangementTemplate t;
  t.num_inputs = pos;
  auto map_inner = [&](Ref r) {
    if (r.kind == Ref::external) r.index = inner_map.at(r.index);
    return r;
  };
  for (const auto& n : inner.nodes) t.nodes.push_back({n.op, map_inner(n.lhs), map_inner(n.rhs)});
  const Ref inner_out = map_inner(inner.output);
  const std::size_t offset = t.nodes.size();
  auto map_outer = [&](Ref r) {
    if (r.kind == Ref::external) {
      if (r.index == w.outer_input) return inner_out;
      r.index = outer_map[r.index];
    } else if (r.kind == Ref::node) {
      r.index += offset;
    }
    return r;
  };
  for (const auto& n : outer.nodes) t.nodes.push_back({n.op, map_outer(n.lhs), map_outer(n.rhs)});
  t.output = map_outer(outer.output);
  t.validate();
  return t;
}

/// Horner compilation over ADD/MLT/SUB with constants built as balanced
/// addition trees over 1; multiplications by 1 and additions of 0 are skipped.
inline ArrangementTemplate compile_polynomial(const IntPolynomial& psi) {
  ArrangementTemplate t;
  t.num_inputs = 1;
  std::map<Integer, Ref> consts;
  std::function<Ref(const Integer&)> constant = [&](const Integer& n) -> Ref {
    if (n == 0) return Ref::constant0();
    if (n == 1) return Ref::constant1();
    if (auto it = consts.find(n); it != consts.end()) return it->second;
    Integer hi = (n + 1) / 2, lo = n / 2;
    Ref a = constant(hi), b = constant(lo);
    t.nodes.push_back({GadgetOp::add, a, b});
    Ref r = Ref::of(t.nodes.size() - 1);
    consts.emplace(n, r);
    return r;
  };
  if (psi.is_zero()) {
    t.output = Ref::constant0();
    return t;
  }
  const int n = psi.degree();
  const Integer& lead = psi.leading();
  Ref acc;
  if (lead > 0) {
    acc = constant(lead);
  } else {
    Ref c = constant(-lead);
    t.nodes.push_back({GadgetOp::sub, Ref::constant0(), c});
    acc = Ref::of(t.nodes.size() - 1);
  }
  for (int k = n - 1; k >= 0; --k) {
    if (acc == Ref::constant1()) {
      acc = Ref::ext(0);
    } else {
      t.nodes.push_back({GadgetOp::mlt, acc, Ref::ext(0)});
      acc = Ref::of(t.nodes.size() - 1);
    }
    const Integer a = psi.coeff(static_cast<std::size_t>(k));
    if (a == 0) continue;
    Ref c = constant(abs(a));
    t.nodes.push_back({a > 0 ? GadgetOp::add : GadgetOp::sub, acc, c});
    acc = Ref::of(t.nodes.size() - 1);
  }
  t.output = acc;
  return t;
}

/// Plain evaluation of a template (no geometry).
inline std::vector<Scalar> evaluate_nodes(const ArrangementTemplate& t, const std::vector<Scalar>& x) {
  if (x.size() != t.num_inputs) throw std::invalid_argument("evaluate: wrong number of inputs");
  std::vector<Scalar> v;
  auto get = [&](const Ref& r) -> Scalar {
    switch (r.kind) {
      case Ref::external: return x[r.index];
      case Ref::node: return v[r.index];
      case Ref::zero: return Scalar(0);
      case Ref::one: return Scalar(1);
    }
    return Scalar(0);
  };
  for (const auto& n : t.nodes) {
    const Scalar a = get(n.lhs), b = get(n.rhs);
    switch (n.op) {
      case GadgetOp::add: v.push_back(a + b); break;
      case GadgetOp::sub: v.push_back(a - b); break;
      case GadgetOp::mlt: v.push_back(a * b); break;
      case GadgetOp::div:
        if (b.is_zero()) throw std::domain_error("DIV gadget: division by zero");
        v.push_back(a / b);
        break;
    }
  }
  return v;
}

inline Scalar evaluate(const ArrangementTemplate& t, const std::vector<Scalar>& x) {
  auto v = evaluate_nodes(t, x);
  switch (t.output.kind) {
    case Ref::external: return x[t.output.index];
    case Ref::node: return v[t.output.index];
    case Ref::zero: return Scalar(0);
    case Ref::one: return Scalar(1);
  }
  return Scalar(0);
}

// ---------------------------------------------------------------------------
// Geometry

/// Planar configuration computing a function through incidences: grid
/// {0,1,2}², inputs x_i e_1, output f(x) e_1, auxiliary points, and a
/// certificate deriving everything else from its frame.
struct FunctionalArrangement {
  PointConfiguration config{2};
  std::vector<std::string> input_labels;
  std::string output_label;
  std::vector<std::string> grid_labels;
  std::vector<std::string> aux_labels;
  DerivationCertificate certificate;
  Scalar value;
};

namespace detail {

/// Records meet/join derivations in the plane, computing every point exactly.
class PlaneBuilder {
 public:
  explicit PlaneBuilder(std::string prefix) : prefix_(std::move(prefix)) {
    const PointConfiguration g0 = grid();
    for (const auto& [l, p] : g0.points()) cfg_.insert(prefix_ + l, p);
    for (const auto& l : grid_labels()) {
      cert_.frame.push_back(prefix_ + l);
      env_[prefix_ + l] = HPoint::from_affine(cfg_.at(prefix_ + l));
    }
  }

  std::string g(int i, int j) const { return prefix_ + lattice_label("grid", {i, j}); }

  void add_frame(const std::string& label) {
    cert_.frame.push_back(label);
    env_[cfg_.resolve(label)] = HPoint::from_affine(cfg_.at(label));
  }

  void add_point(const std::string& label, const Point& p) { cfg_.insert(label, p); }

  bool determined(const std::string& label) const { return env_.count(id_key(label)) > 0; }

  /// Meets the joins; records a step for `target` (a configuration label that
  /// must already carry the expected coordinates, or an intermediate "#").
  std::optional<HPoint> step(const std::string& target, const std::vector<std::vector<std::string>>& joins) {
    std::vector<Flat> flats;
    for (const auto& j : joins) {
      std::vector<HPoint> pts;
      for (const auto& id : j) pts.push_back(env_.at(id_key(id)));
      Flat f = join(pts);
      if (f.dim() + 1 < static_cast<int>(j.size())) return std::nullopt;  // coincident operands
      flats.push_back(std::move(f));
    }
    Flat m = meet(flats);
    if (!m.is_point()) return std::nullopt;
    HPoint p = m.point();
    if (!DerivationCertificate::is_intermediate(target)) {
      if (p != HPoint::from_affine(cfg_.at(target))) throw std::logic_error("gadget construction mismatch at " + target);
      if (determined(target)) return p;
    }
    env_[id_key(target)] = p;
    cert_.steps.push_back({target, joins});
    return p;
  }

  std::string fresh() { return "#" + std::to_string(next_++); }

  std::string h_inf() { return cached("h", {{g(0, 0), g(1, 0)}, {g(0, 1), g(1, 1)}}); }
  std::string v_inf() { return cached("v", {{g(0, 0), g(0, 1)}, {g(1, 0), g(1, 1)}}); }
  std::vector<std::string> line_inf() { return {h_inf(), v_inf()}; }
  std::string diag_inf() { return cached("dg", {{g(1, 0), g(0, 1)}, line_inf()}); }
  /// Direction of the line from (0,1) to an x-axis point P.
  std::string dir_from_g01(const std::string& P) { return cached("d:" + cfg_.resolve(P), {{g(0, 1), P}, line_inf()}); }
  std::vector<std::string> x_axis() const { return {g(0, 0), g(1, 0)}; }
  std::vector<std::string> y_axis() const { return {g(0, 0), g(0, 1)}; }
  std::vector<std::string> line_y1() const { return {g(0, 1), g(1, 1)}; }

  PointConfiguration& config() { return cfg_; }
  DerivationCertificate& certificate() { return cert_; }

 private:
  std::string id_key(const std::string& id) const {
    return DerivationCertificate::is_intermediate(id) ? id : cfg_.resolve(id);
  }
  std::string cached(const std::string& key, const std::vector<std::vector<std::string>>& joins) {
    if (auto it = inter_.find(key); it != inter_.end()) return it->second;
    const std::string id = fresh();
    if (!step(id, joins)) throw std::logic_error("gadget: degenerate intermediate " + key);
    inter_[key] = id;
    return id;
  }

  std::string prefix_;
  PointConfiguration cfg_{2};
  DerivationCertificate cert_;
  std::map<std::string, HPoint> env_;
  std::map<std::string, std::string> inter_;
  int next_ = 1;
};

/// Axis roles of a node: X, Y, Z with Z = X+Y (ADD structure) or Z = X·Y (MLT structure).
struct NodeGeometry {
  bool additive;
  std::string X, Y, Z, aux;
};

/// Derives the unknown one of X, Y, Z (and the auxiliary point) from the two known ones.
inline bool derive_node(PlaneBuilder& b, const NodeGeometry& n) {
  const bool kx = b.determined(n.X), ky = b.determined(n.Y), kz = b.determined(n.Z);
  if (kx + ky + kz < 2 || (kx && ky && kz)) return false;
  if (n.additive) {
    if (kx && ky) {
      if (!b.step(n.aux, {{n.X, b.v_inf()}, b.line_y1()})) return false;
      return b.step(n.Z, {{n.aux, b.dir_from_g01(n.Y)}, b.x_axis()}).has_value();
    }
    if (kz && ky) {
      if (!b.step(n.aux, {{n.Z, b.dir_from_g01(n.Y)}, b.line_y1()})) return false;
      return b.step(n.X, {{n.aux, b.v_inf()}, b.x_axis()}).has_value();
    }
    if (!b.step(n.aux, {{n.X, b.v_inf()}, b.line_y1()})) return false;
    const std::string dir = b.fresh();
    if (!b.step(dir, {{n.aux, n.Z}, b.line_inf()})) return false;
    return b.step(n.Y, {{b.g(0, 1), dir}, b.x_axis()}).has_value();
  }
  if (kx && ky) {
    if (!b.step(n.aux, {{n.Y, b.diag_inf()}, b.y_axis()})) return false;
    return b.step(n.Z, {{n.aux, b.dir_from_g01(n.X)}, b.x_axis()}).has_value();
  }
  if (kz && ky) {
    if (!b.step(n.aux, {{n.Y, b.diag_inf()}, b.y_axis()})) return false;
    const std::string dir = b.fresh();
    if (!b.step(dir, {{n.aux, n.Z}, b.line_inf()})) return false;
    return b.step(n.X, {{b.g(0, 1), dir}, b.x_axis()}).has_value();
  }
  if (!b.step(n.aux, {{n.Z, b.dir_from_g01(n.X)}, b.y_axis()})) return false;
  return b.step(n.Y, {{n.aux, b.diag_inf()}, b.x_axis()}).has_value();
}

}  // namespace detail

/// How the certificate of an instantiated template is generated.
enum class DeriveMode {
  /// frame = grid ∪ inputs; everything else derived.
  forward,
  /// frame = grid only; the output (which must be 0) seeds the derivation
  /// and inputs are derived backwards. Used for rational coordinates.
  inverse,
};

/// Lays out a template at concrete inputs: all points, roles and a certificate.
inline FunctionalArrangement instantiate(const ArrangementTemplate& t, const std::vector<Scalar>& x,
                                         DeriveMode mode = DeriveMode::forward, const std::string& prefix = "") {
  t.validate();
  const std::vector<Scalar> v = evaluate_nodes(t, x);
  detail::PlaneBuilder b(prefix);
  FunctionalArrangement fa;
  fa.grid_labels = [&] {
    std::vector<std::string> g;
    for (const auto& l : grid_labels()) g.push_back(prefix + l);
    return g;
  }();
  auto on_axis = [](const Scalar& s) { return Point{s, Scalar(0)}; };
  auto label_of = [&](const Ref& r) -> std::string {
    switch (r.kind) {
      case Ref::external: return prefix + (t.num_inputs == 1 ? std::string("x") : "x" + std::to_string(r.index));
      case Ref::node: return prefix + "n" + std::to_string(r.index);
      case Ref::zero: return b.g(0, 0);
      case Ref::one: return b.g(1, 0);
    }
    return "";
  };
  auto value_of = [&](const Ref& r) -> Scalar {
    switch (r.kind) {
      case Ref::external: return x[r.index];
      case Ref::node: return v[r.index];
      case Ref::zero: return Scalar(0);
      case Ref::one: return Scalar(1);
    }
    return Scalar(0);
  };
  for (std::size_t i = 0; i < t.num_inputs; ++i) {
    const std::string l = label_of(Ref::ext(i));
    b.add_point(l, on_axis(x[i]));
    fa.input_labels.push_back(l);
  }
  std::vector<detail::NodeGeometry> geo;
  for (std::size_t k = 0; k < t.nodes.size(); ++k) {
    const auto& n = t.nodes[k];
    const std::string out = label_of(Ref::of(k));
    b.add_point(out, on_axis(v[k]));
    detail::NodeGeometry g;
    g.additive = n.op == GadgetOp::add || n.op == GadgetOp::sub;
    const std::string L = label_of(n.lhs), R = label_of(n.rhs);
    g.aux = out + (g.additive ? ":A" : ":B");
    switch (n.op) {
      case GadgetOp::add:
      case GadgetOp::mlt: g.X = L; g.Y = R; g.Z = out; break;
      case GadgetOp::sub:
      case GadgetOp::div: g.X = out; g.Y = R; g.Z = L; break;
    }
    const Scalar xv = value_of(n.op == GadgetOp::add || n.op == GadgetOp::mlt ? n.lhs : Ref::of(k));
    const Scalar yv = value_of(n.rhs);
    b.add_point(g.aux, g.additive ? Point{xv, Scalar(1)} : Point{Scalar(0), yv});
    fa.aux_labels.push_back(g.aux);
    geo.push_back(std::move(g));
  }
  fa.output_label = label_of(t.output);
  fa.value = value_of(t.output);

  if (mode == DeriveMode::forward) {
    for (const auto& l : fa.input_labels)
      if (!b.determined(l)) b.add_frame(l);
  } else if (!fa.value.is_zero()) {
    throw std::invalid_argument("inverse derivation needs an output of 0");
  }
  // In inverse mode the output is the grid origin and already determined.
  bool progress = true;
  std::set<std::size_t> done;
  while (progress) {
    progress = false;
    for (std::size_t k = 0; k < geo.size(); ++k) {
      if (done.count(k)) continue;
      const auto& g = geo[k];
      if (b.determined(g.X) && b.determined(g.Y) && b.determined(g.Z)) {
        if (!b.determined(g.aux)) {
          // Aux point still needed for completeness of the arrangement.
          if (g.additive) b.step(g.aux, {{g.X, b.v_inf()}, b.line_y1()});
          else b.step(g.aux, {{g.Y, b.diag_inf()}, b.y_axis()});
        }
        done.insert(k);
        progress = true;
        continue;
      }
      if (detail::derive_node(b, g)) {
        done.insert(k);
        progress = true;
      }
    }
  }
  for (const auto& l : b.config().labels())
    if (!b.determined(l)) throw std::domain_error("gadget arrangement not derivable from its frame (point " + l + ")");
  fa.config = b.config();
  fa.certificate = b.certificate();
  return fa;
}

inline FunctionalArrangement add_gadget(const Scalar& a, const Scalar& b) {
  return instantiate(ArrangementTemplate::single(GadgetOp::add), {a, b});
}
inline FunctionalArrangement mlt_gadget(const Scalar& a, const Scalar& b) {
  return instantiate(ArrangementTemplate::single(GadgetOp::mlt), {a, b});
}
inline FunctionalArrangement sub_gadget(const Scalar& a, const Scalar& b) {
  return instantiate(ArrangementTemplate::single(GadgetOp::sub), {a, b});
}
inline FunctionalArrangement div_gadget(const Scalar& a, const Scalar& b) {
  if (b.is_zero()) throw std::domain_error("DIV gadget: division by zero");
  return instantiate(ArrangementTemplate::single(GadgetOp::div), {a, b});
}

/// Output point coordinates of an arrangement.
inline const Point& output_point(const FunctionalArrangement& fa) { return fa.config.at(fa.output_label); }

// ---------------------------------------------------------------------------
// Coordinate configurations

/// Minimal polynomial of a scalar over Q, primitive with positive leading coefficient.
inline IntPolynomial minimal_polynomial(const Scalar& z) {
  if (z.is_rational()) {
    const Rational& q = z.rational();
    return IntPolynomial(std::vector<Integer>{-q.get_num(), q.get_den()});
  }
  const std::size_t n = static_cast<std::size_t>(z.field()->degree());
  std::vector<std::vector<Rational>> powers;
  Scalar p(1);
  for (std::size_t k = 0; k <= n; ++k) {
    std::vector<Rational> c = p.coefficients();
    c.resize(n, Rational(0));
    powers.push_back(std::move(c));
    // Dependency among 1, z, …, z^k?
    Matrix<Rational> m(n, std::vector<Rational>(powers.size()));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < powers.size(); ++j) m[i][j] = powers[j][i];
    auto ker = linalg::kernel(m, powers.size());
    if (!ker.empty()) return IntPolynomial::clear_denominators(RatPolynomial(ker.front())).primitive();
    p *= z;
  }
  throw std::logic_error("minimal_polynomial: no dependency found");
}

/// K[ζ]: a planar configuration containing ζ e_1, framed by the grid (and
/// ζ e_1 itself when ζ is irrational, isolated by the rational guards).
struct CoorScalar {
  PointConfiguration config{2};
  std::string zeta_label;
  Scalar zeta;
  IntPolynomial psi;
  /// Isolating interval [ζ⁻, ζ⁺] (irrational case only).
  std::optional<RootInterval> guard;
  /// Sturm count of ψ over the guard interval (1 when the guard is valid).
  int sturm_count = 0;
  DerivationCertificate certificate;
  std::vector<std::string> grid_labels, aux_labels, input_labels;
};

namespace detail {

inline bool is_small_grid_value(const Scalar& z) { return z.is_rational() && (z == Scalar(0) || z == Scalar(1) || z == Scalar(2)); }

inline void merge_arrangement(CoorScalar& out, const FunctionalArrangement& fa, std::set<std::string>& determined,
                              int& next_id) {
  out.config = union_labeled(out.config, fa.config);
  for (const auto& l : fa.aux_labels) out.aux_labels.push_back(l);
  append_certificate(out.certificate, determined, fa.certificate, [](const std::string& s) { return s; }, next_id);
}

/// Rational K[p/q] from the grid alone, via ψ = qx − p evaluated backwards.
inline FunctionalArrangement rational_coor(const Scalar& z, const std::string& prefix) {
  if (is_small_grid_value(z)) {
    FunctionalArrangement fa;
    fa.config = relabel(grid(), prefix);
    for (const auto& l : grid_labels()) fa.grid_labels.push_back(prefix + l);
    const int k = static_cast<int>(z.rational().get_num().get_si());
    fa.config.add_alias(prefix + "x", prefix + lattice_label("grid", {k, 0}));
    fa.input_labels = {prefix + "x"};
    fa.output_label = prefix + "x";
    for (const auto& l : grid_labels()) fa.certificate.frame.push_back(prefix + l);
    fa.value = z;
    return fa;
  }
  return instantiate(compile_polynomial(minimal_polynomial(z)), {z}, DeriveMode::inverse, prefix);
}

}  // namespace detail

/// K[ζ] for ζ a root of ψ. For rational ζ = p/q the polynomial qx − p is used.
inline CoorScalar coor_scalar(const Scalar& zeta, std::optional<IntPolynomial> psi_in = std::nullopt,
                              const std::string& prefix = "") {
  CoorScalar out;
  out.zeta = zeta;
  out.psi = psi_in ? *psi_in : minimal_polynomial(zeta);
  if (zeta.is_rational()) {
    out.psi = minimal_polynomial(zeta);
    auto fa = detail::rational_coor(zeta, prefix);
    out.config = fa.config;
    out.zeta_label = prefix + "x";
    out.grid_labels = fa.grid_labels;
    out.aux_labels = fa.aux_labels;
    out.certificate = fa.certificate;
    out.input_labels = {out.zeta_label};
    out.sturm_count = 1;
    return out;
  }
  // ψ(ζ) = 0, checked exactly via Horner in the field.
  Scalar acc(0);
  for (int k = out.psi.degree(); k >= 0; --k) acc = acc * zeta + Scalar(out.psi.coeff(static_cast<std::size_t>(k)));
  if (!acc.is_zero()) throw std::invalid_argument("coor_scalar: psi(zeta) != 0");
  for (const auto& iv : isolate_roots(out.psi))
    if (Scalar(iv.lo) <= zeta && zeta <= Scalar(iv.hi)) out.guard = iv;
  if (!out.guard) throw std::logic_error("coor_scalar: no isolating interval contains zeta");
  out.sturm_count = count_real_roots(squarefree_part(out.psi), out.guard->lo, out.guard->hi);
  if (out.sturm_count != 1) throw std::invalid_argument("coor_scalar: zeta is not the unique root of psi in its interval");

  FunctionalArrangement f = instantiate(compile_polynomial(out.psi), {zeta}, DeriveMode::forward, prefix + "f:");
  // Share one grid: rename the arrangement's grid onto the top-level grid labels.
  out.config = relabel(grid(), prefix);
  for (const auto& l : grid_labels()) {
    out.grid_labels.push_back(prefix + l);
    out.certificate.frame.push_back(prefix + l);
  }
  out.zeta_label = prefix + "x";
  out.input_labels = {out.zeta_label};
  out.config.insert(out.zeta_label, {zeta, Scalar(0)});
  out.certificate.frame.push_back(out.zeta_label);
  std::set<std::string> determined(out.certificate.frame.begin(), out.certificate.frame.end());
  int next_id = 1;
  auto glue_grid = [&](const FunctionalArrangement& fa, const std::string& sub) {
    std::map<std::string, std::string> glue;
    for (const auto& l : grid_labels()) glue[sub + l] = prefix + l;
    out.config = union_labeled(out.config, fa.config, glue);
    for (const auto& l : fa.aux_labels) out.aux_labels.push_back(l);
    append_certificate(out.certificate, determined, fa.certificate, [](const std::string& s) { return s; }, next_id);
  };
  glue_grid(f, prefix + "f:");
  glue_grid(detail::rational_coor(Scalar(out.guard->lo), prefix + "lo:"), prefix + "lo:");
  glue_grid(detail::rational_coor(Scalar(out.guard->hi), prefix + "hi:"), prefix + "hi:");
  return out;
}

/// K[ζ] for a point ζ ∈ R^d_+ (d ≥ 3): Q^d+1, the box (D/2)(Q^d+1), and the
/// plane-embedded K[ζ_i], K[ζ_i/2] in the (e_i, e_{i+1}) planes.
struct CoorPoint {
  PointConfiguration config;
  Point zeta;
  std::string zeta_label;
  DerivationCertificate certificate;
  std::vector<CoorScalar> pieces;  // K[ζ_1..d] then K[ζ_1/2..d/2]
  std::vector<std::string> cube_labels, box_labels;
};

inline DerivationCertificate translated_cube_certificate(std::size_t d) {
  DerivationCertificate q = qd_frame_certificate(d);
  auto rename = [](const std::string& l) {
    if (DerivationCertificate::is_intermediate(l)) return l;
    auto v = detail::parse_lattice(l);
    for (auto& x : v) x += 1;
    return lattice_label("cube", v);
  };
  DerivationCertificate out;
  for (const auto& f : q.frame) out.frame.push_back(rename(f));
  for (const auto& s : q.steps) {
    DerivationStep t{rename(s.target), {}};
    for (const auto& j : s.joins) {
      std::vector<std::string> jj;
      for (const auto& id : j) jj.push_back(rename(id));
      t.joins.push_back(std::move(jj));
    }
    out.steps.push_back(std::move(t));
  }
  return out;
}

inline CoorPoint coor_point(const Point& zeta, const std::string& prefix = "") {
  const std::size_t d = zeta.size();
  if (d < 3) throw std::invalid_argument("coor_point: d >= 3 required");
  for (const auto& z : zeta)
    if (z.sign() <= 0) throw std::invalid_argument("coor_point: coordinates must be positive");
  CoorPoint out;
  out.zeta = zeta;
  out.config = relabel(qd_plus_one(d), prefix);
  for (const auto& l : out.config.labels()) out.cube_labels.push_back(l);
  out.certificate = translated_cube_certificate(d);
  if (!prefix.empty()) {
    auto renamed = out.certificate;
    auto fix = [&](std::string& s) {
      if (!DerivationCertificate::is_intermediate(s)) s = prefix + s;
    };
    for (auto& f : renamed.frame) fix(f);
    for (auto& st : renamed.steps) {
      fix(st.target);
      for (auto& j : st.joins)
        for (auto& id : j) fix(id);
    }
    out.certificate = renamed;
  }
  std::set<std::string> determined(out.certificate.frame.begin(), out.certificate.frame.end());
  for (const auto& l : out.certificate.derived()) determined.insert(l);
  int next_id = next_intermediate_id(out.certificate);

  auto add_piece = [&](const Scalar& value, std::size_t i, const std::string& tag) {
    const std::string pre = prefix + tag + std::to_string(i) + ":";
    CoorScalar cs = coor_scalar(value, std::nullopt, pre);
    PointConfiguration emb = embed_plane(cs.config, i, d);
    out.config = union_labeled(out.config, emb);
    // Irrational coordinates join the frame.
    for (const auto& f : cs.certificate.frame)
      if (std::find(cs.grid_labels.begin(), cs.grid_labels.end(), f) == cs.grid_labels.end() &&
          std::find(out.certificate.frame.begin(), out.certificate.frame.end(), f) == out.certificate.frame.end()) {
        out.certificate.frame.push_back(f);
        determined.insert(f);
      }
    append_certificate(out.certificate, determined, cs.certificate, [](const std::string& s) { return s; }, next_id);
    out.pieces.push_back(std::move(cs));
  };
  for (std::size_t i = 1; i <= d; ++i) add_piece(zeta[i - 1], i, "k");
  for (std::size_t i = 1; i <= d; ++i) add_piece(zeta[i - 1] / Scalar(2), i, "h");

  PointConfiguration box = relabel(proj_box(zeta), prefix);
  out.config = union_labeled(out.config, box);
  for (const auto& l : box.labels()) out.box_labels.push_back(l);
  DerivationCertificate bc = proj_box_certificate(d);
  append_certificate(out.certificate, determined, bc, [&](const std::string& s) { return prefix + s; }, next_id);
  out.zeta_label = out.config.resolve(prefix + lattice_label("box", std::vector<int>(d, 2)));
  return out;
}

// ---------------------------------------------------------------------------
// Soundness experiment

struct GadgetCheckReport {
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::size_t checked = 0;  // gadget instances (four per trial)
  bool pass = false;
  /// First failing instance: "OP(a,b)" with what went wrong.
  std::string witness;
};

/// Random rational pairs through ADD/MLT/SUB/DIV: the output point must be
/// exactly (a∘b, 0) and the arrangement's certificate must replay.
inline GadgetCheckReport check_gadgets(std::size_t trials, std::uint64_t seed) {
  GadgetCheckReport rep;
  rep.trials = trials;
  rep.seed = seed;
  Rng rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    const Scalar a(rng.uniform_rational(50, 12));
    Scalar b(rng.uniform_rational(50, 12));
    while (b.is_zero()) b = Scalar(rng.uniform_rational(50, 12));
    const std::pair<GadgetOp, Scalar> cases[] = {
        {GadgetOp::add, a + b}, {GadgetOp::mlt, a * b}, {GadgetOp::sub, a - b}, {GadgetOp::div, a / b}};
    for (const auto& [op, want] : cases) {
      const std::string tag = std::string(op_name(op)) + "(" + a.to_string() + "," + b.to_string() + ")";
      ++rep.checked;
      FunctionalArrangement fa;
      try {
        fa = instantiate(ArrangementTemplate::single(op), {a, b});
      } catch (const std::exception& e) {
        rep.witness = tag + ": " + e.what();
        return rep;
      }
      const Point& out = output_point(fa);
      if (out[0] != want || !out[1].is_zero() || fa.value != want) {
        rep.witness = tag + ": output " + out[0].to_string() + " != " + want.to_string();
        return rep;
      }
      if (auto chk = check_certificate(fa.config, fa.certificate); !chk) {
        rep.witness = tag + ": certificate: " + chk.reason;
        return rep;
      }
    }
  }
  rep.pass = true;
  return rep;
}

}  // namespace projuniq

#endif  // PROJUNIQ_VONSTAUDT_HPP
