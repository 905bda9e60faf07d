#ifndef PROJUNIQ_DERIVE_HPP
#define PROJUNIQ_DERIVE_HPP

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "projuniq/config.hpp"

namespace projuniq {

/// target <- meet(join(...), join(...), ...). Targets and operands are
/// configuration labels or intermediate ids of the form "#k".
struct DerivationStep {
  std::string target;
  std::vector<std::vector<std::string>> joins;
};

struct DerivationCertificate {
  std::vector<std::string> frame;
  std::vector<DerivationStep> steps;

  static bool is_intermediate(const std::string& id) { return !id.empty() && id[0] == '#'; }

  /// Configuration labels produced by the steps, in step order, without repeats.
  std::vector<std::string> derived() const {
    std::vector<std::string> out;
    std::set<std::string> seen(frame.begin(), frame.end());
    for (const auto& s : steps)
      if (!is_intermediate(s.target) && seen.insert(s.target).second) out.push_back(s.target);
    return out;
  }
};

struct CertificateCheck {
  bool ok = false;
  std::string reason;
  std::size_t derived = 0;
  explicit operator bool() const { return ok; }
};

/// Replays every step with exact arithmetic and compares against the stored
/// coordinates. Intermediates may be arbitrary projective points.
inline CertificateCheck check_certificate(const PointConfiguration& c, const DerivationCertificate& cert) {
  CertificateCheck res;
  std::map<std::string, HPoint> env;
  auto key = [&](const std::string& id) { return DerivationCertificate::is_intermediate(id) ? id : c.resolve(id); };
  for (const auto& f : cert.frame) {
    if (!c.contains(f)) {
      res.reason = "frame label not in configuration: " + f;
      return res;
    }
    env.emplace(key(f), HPoint::from_affine(c.at(f)));
  }
  std::set<std::string> derived;
  for (std::size_t si = 0; si < cert.steps.size(); ++si) {
    const auto& s = cert.steps[si];
    const std::string where = "step " + std::to_string(si + 1) + " (" + s.target + ")";
    if (s.joins.empty()) {
      res.reason = where + ": empty meet";
      return res;
    }
    std::vector<Flat> flats;
    for (const auto& j : s.joins) {
      std::vector<HPoint> pts;
      for (const auto& id : j) {
        if (!DerivationCertificate::is_intermediate(id) && !c.contains(id)) {
          res.reason = where + ": unknown label " + id;
          return res;
        }
        auto it = env.find(key(id));
        if (it == env.end()) {
          res.reason = where + ": operand used before it is determined: " + id;
          return res;
        }
        pts.push_back(it->second);
      }
      if (pts.empty()) {
        res.reason = where + ": empty join";
        return res;
      }
      flats.push_back(join(pts));
    }
    const Flat m = flats.size() == 1 ? flats.front() : meet(flats);
    if (!m.is_point()) {
      res.reason = where + ": meet has dimension " + std::to_string(m.dim()) + ", not a point";
      return res;
    }
    const HPoint p = m.point();
    if (DerivationCertificate::is_intermediate(s.target)) {
      if (env.count(s.target)) {
        res.reason = where + ": intermediate id reused";
        return res;
      }
      env.emplace(s.target, p);
      continue;
    }
    if (!c.contains(s.target)) {
      res.reason = where + ": target not in configuration";
      return res;
    }
    if (p != HPoint::from_affine(c.at(s.target))) {
      res.reason = where + ": replay gives " + p.to_string() + ", configuration has " +
                   HPoint::from_affine(c.at(s.target)).to_string();
      return res;
    }
    const std::string k = key(s.target);
    if (!env.count(k)) {
      env.emplace(k, p);
      derived.insert(k);
    }
  }
  res.ok = true;
  res.derived = derived.size();
  return res;
}

// ---------------------------------------------------------------------------
// Certificate text format

inline std::string quote_id(const std::string& id) {
  if (DerivationCertificate::is_intermediate(id)) return id;
  std::string s = "\"";
  for (char ch : id) {
    if (ch == '"' || ch == '\\') s += '\\';
    s += ch;
  }
  return s + "\"";
}

inline std::string to_text(const DerivationCertificate& cert) {
  std::ostringstream os;
  os << "certificate v1\nframe:";
  for (std::size_t i = 0; i < cert.frame.size(); ++i) os << (i ? ", " : " ") << quote_id(cert.frame[i]);
  os << "\n";
  for (const auto& s : cert.steps) {
    os << quote_id(s.target) << " <- meet(";
    for (std::size_t j = 0; j < s.joins.size(); ++j) {
      os << (j ? ", " : "") << "join(";
      for (std::size_t k = 0; k < s.joins[j].size(); ++k) os << (k ? "," : "") << quote_id(s.joins[j][k]);
      os << ")";
    }
    os << ")\n";
  }
  return os.str();
}

namespace detail {

class CertLexer {
 public:
  explicit CertLexer(const std::string& s) : s_(s) {}
  void ws() {
    while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\t')) ++i_;
  }
  bool eat(const std::string& tok) {
    ws();
    if (s_.compare(i_, tok.size(), tok) == 0) {
      i_ += tok.size();
      return true;
    }
    return false;
  }
  void expect(const std::string& tok) {
    if (!eat(tok)) throw std::invalid_argument("certificate: expected '" + tok + "' in: " + s_);
  }
  std::string id() {
    ws();
    if (i_ < s_.size() && s_[i_] == '"') {
      ++i_;
      std::string out;
      while (i_ < s_.size() && s_[i_] != '"') {
        if (s_[i_] == '\\' && i_ + 1 < s_.size()) ++i_;
        out += s_[i_++];
      }
      if (i_ >= s_.size()) throw std::invalid_argument("certificate: unterminated label in: " + s_);
      ++i_;
      return out;
    }
    if (i_ < s_.size() && s_[i_] == '#') {
      std::string out = "#";
      ++i_;
      while (i_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[i_]))) out += s_[i_++];
      if (out.size() == 1) throw std::invalid_argument("certificate: bad intermediate id in: " + s_);
      return out;
    }
    throw std::invalid_argument("certificate: expected label in: " + s_);
  }
  bool done() {
    ws();
    return i_ >= s_.size();
  }

 private:
  const std::string& s_;
  std::size_t i_ = 0;
};

}  // namespace detail

inline DerivationCertificate parse_certificate(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  DerivationCertificate cert;
  bool header = false, frame = false;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string t = detail::trim(line);
    if (t.empty() || t[0] == ';') continue;
    if (!header) {
      if (t != "certificate v1") throw std::invalid_argument("certificate: missing 'certificate v1' header");
      header = true;
      continue;
    }
    detail::CertLexer lx(t);
    if (!frame) {
      lx.expect("frame:");
      if (!lx.done()) {
        do cert.frame.push_back(lx.id());
        while (lx.eat(","));
      }
      if (!lx.done()) throw std::invalid_argument("certificate: trailing text in frame line");
      frame = true;
      continue;
    }
    DerivationStep s;
    s.target = lx.id();
    lx.expect("<-");
    lx.expect("meet(");
    do {
      lx.expect("join(");
      std::vector<std::string> j;
      do j.push_back(lx.id());
      while (lx.eat(","));
      lx.expect(")");
      s.joins.push_back(std::move(j));
    } while (lx.eat(","));
    lx.expect(")");
    if (!lx.done()) throw std::invalid_argument("certificate: trailing text after step");
    cert.steps.push_back(std::move(s));
  }
  if (!header || !frame) throw std::invalid_argument("certificate: incomplete document");
  return cert;
}

// ---------------------------------------------------------------------------
// Composition helpers

/// Appends `sub` to `out`, renaming labels through `rename` and giving sub's
/// intermediates fresh ids. Steps whose target is already determined are
/// skipped, keeping the derived set duplicate-free.
inline void append_certificate(DerivationCertificate& out, std::set<std::string>& determined,
                               const DerivationCertificate& sub,
                               const std::function<std::string(const std::string&)>& rename, int& next_id) {
  std::map<std::string, std::string> ids;
  auto map_id = [&](const std::string& id) -> std::string {
    if (!DerivationCertificate::is_intermediate(id)) return rename(id);
    auto it = ids.find(id);
    if (it == ids.end()) throw std::logic_error("append_certificate: intermediate used before definition");
    return it->second;
  };
  for (const auto& s : sub.steps) {
    DerivationStep t;
    if (DerivationCertificate::is_intermediate(s.target)) {
      t.target = "#" + std::to_string(next_id++);
      ids[s.target] = t.target;
    } else {
      t.target = rename(s.target);
      if (determined.count(t.target)) continue;
    }
    for (const auto& j : s.joins) {
      std::vector<std::string> jj;
      for (const auto& id : j) jj.push_back(map_id(id));
      t.joins.push_back(std::move(jj));
    }
    if (!DerivationCertificate::is_intermediate(t.target)) determined.insert(t.target);
    out.steps.push_back(std::move(t));
  }
}

inline int next_intermediate_id(const DerivationCertificate& c) {
  int m = 0;
  for (const auto& s : c.steps)
    if (DerivationCertificate::is_intermediate(s.target)) m = std::max(m, std::stoi(s.target.substr(1)));
  return m + 1;
}

// ---------------------------------------------------------------------------
// Canonical certificates for Q^d

namespace detail {

inline std::string qlabel(const std::vector<int>& v) { return lattice_label("qd", v); }

inline std::vector<int> parse_lattice(const std::string& label) {
  auto open = label.find('('), close = label.rfind(')');
  if (open == std::string::npos || close == std::string::npos) throw std::invalid_argument("not a lattice label: " + label);
  std::vector<int> v;
  for (const auto& part : split(label.substr(open + 1, close - open - 1), ',')) v.push_back(std::stoi(part));
  return v;
}

}  // namespace detail

/// Facet centers as meets of facet diagonals, then edge midpoints as the meet
/// of the edge with the plane through the origin and the two adjacent facet
/// centers. Frame: the 8 vertices of [−1,1]³ and the origin.
inline DerivationCertificate w_frame_certificate() {
  using detail::qlabel;
  DerivationCertificate cert;
  const PointConfiguration w = w_config();
  for (const auto& [l, p] : w.points()) cert.frame.push_back(l);
  for (int i = 0; i < 3; ++i)
    for (int s : {1, -1}) {
      const int j = (i + 1) % 3, k = (i + 2) % 3;
      auto vtx = [&](int a, int b) {
        std::vector<int> v(3);
        v[i] = s;
        v[j] = a;
        v[k] = b;
        return qlabel(v);
      };
      std::vector<int> c(3, 0);
      c[i] = s;
      cert.steps.push_back({qlabel(c), {{vtx(1, 1), vtx(-1, -1)}, {vtx(1, -1), vtx(-1, 1)}}});
    }
  for (int k = 0; k < 3; ++k) {
    const int i = (k + 1) % 3, j = (k + 2) % 3;
    for (int si : {1, -1})
      for (int sj : {1, -1}) {
        std::vector<int> m(3, 0), a(3, 0), b(3, 0), ci(3, 0), cj(3, 0);
        m[i] = a[i] = b[i] = si;
        m[j] = a[j] = b[j] = sj;
        a[k] = 1;
        b[k] = -1;
        ci[i] = si;
        cj[j] = sj;
        cert.steps.push_back({qlabel(m), {{qlabel(a), qlabel(b)}, {qlabel({0, 0, 0}), qlabel(ci), qlabel(cj)}}});
      }
  }
  return cert;
}

/// The missing vertex `missing` (entries ±1) of a d-cube {−1,1}^d, as the meet
/// of the d facet hyperplanes through it, each spanned by its other vertices.
inline DerivationCertificate cube_last_vertex_certificate(std::size_t d, std::vector<int> missing = {}) {
  if (d < 3) throw std::invalid_argument("cube_last_vertex_certificate: d >= 3 required");
  if (missing.empty()) missing.assign(d, 1);
  DerivationCertificate cert;
  std::vector<std::vector<int>> verts;
  for (const auto& v : lattice_box(d, -1, 1))
    if (std::none_of(v.begin(), v.end(), [](int x) { return x == 0; }) && v != missing) verts.push_back(v);
  for (const auto& v : verts) cert.frame.push_back(detail::qlabel(v));
  DerivationStep step{detail::qlabel(missing), {}};
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<std::string> j;
    for (const auto& v : verts)
      if (v[i] == missing[i]) j.push_back(detail::qlabel(v));
    step.joins.push_back(std::move(j));
  }
  cert.steps.push_back(std::move(step));
  return cert;
}

/// The projective basis B = {v0 = (1,…,1), v_i = v0 − 2e_i, o} of Q^d.
inline std::vector<std::string> qd_basis_labels(std::size_t d) {
  std::vector<std::string> out;
  out.push_back(detail::qlabel(std::vector<int>(d, 1)));
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<int> v(d, 1);
    v[i] = -1;
    out.push_back(detail::qlabel(v));
  }
  out.push_back(detail::qlabel(std::vector<int>(d, 0)));
  return out;
}

/// Certificate deriving all of Q^d (d ≥ 3) from the basis B.
inline DerivationCertificate qd_basis_certificate(std::size_t d) {
  using detail::qlabel;
  if (d < 3) throw std::invalid_argument("qd_basis_certificate: d >= 3 required");
  DerivationCertificate cert;
  cert.frame = qd_basis_labels(d);
  std::set<std::string> determined(cert.frame.begin(), cert.frame.end());
  const std::vector<int> ones(d, 1), zero(d, 0);
  auto v = [&](std::size_t i) {
    std::vector<int> x = ones;
    x[i] = -1;
    return x;
  };
  auto w = [&](std::size_t i) {
    std::vector<int> x(d, -1);
    x[i] = 1;
    return x;
  };
  // w_i = −v_i: the line through o and v_i meets the hyperplane x_i = 1.
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<std::string> hyp{qlabel(ones)};
    for (std::size_t j = 0; j < d; ++j)
      if (j != i) hyp.push_back(qlabel(v(j)));
    cert.steps.push_back({qlabel(w(i)), {{qlabel(zero), qlabel(v(i))}, hyp}});
    determined.insert(qlabel(w(i)));
  }

  if (d == 3) {
    // −v0 by the last-vertex rule, then the W certificate.
    auto last = cube_last_vertex_certificate(3, {-1, -1, -1});
    int id = 1;
    auto same = [](const std::string& s) { return s; };
    append_certificate(cert, determined, last, same, id);
    append_certificate(cert, determined, w_frame_certificate(), same, id);
    return cert;
  }

  int id = 1;
  // Points at infinity of the directions v0 − e_j − e_k (parallel lines v_j w_k ∥ v_k w_j).
  std::vector<std::string> at_infinity;
  {
    Matrix<Rational> chosen;
    for (std::size_t j = 0; j < d && at_infinity.size() < d; ++j)
      for (std::size_t k = j + 1; k < d && at_infinity.size() < d; ++k) {
        std::vector<Rational> dir(d, Rational(1));
        dir[j] = 0;
        dir[k] = 0;
        Matrix<Rational> trial = chosen;
        trial.push_back(dir);
        if (linalg::rank(trial) != trial.size()) continue;
        chosen = std::move(trial);
        const std::string t = "#" + std::to_string(id++);
        cert.steps.push_back({t, {{qlabel(v(j)), qlabel(w(k))}, {qlabel(v(k)), qlabel(w(j))}}});
        at_infinity.push_back(t);
      }
  }
  // E_i: direction e_i at infinity; then the facet centers ±e_i.
  std::vector<std::string> e_inf(d);
  for (std::size_t i = 0; i < d; ++i) {
    e_inf[i] = "#" + std::to_string(id++);
    cert.steps.push_back({e_inf[i], {{qlabel(ones), qlabel(v(i))}, at_infinity}});
    std::vector<int> c = zero;
    c[i] = 1;
    cert.steps.push_back({qlabel(c), {{qlabel(ones), qlabel(w(i))}, {qlabel(zero), e_inf[i]}}});
    determined.insert(qlabel(c));
  }
  const DerivationCertificate sub = qd_basis_certificate(d - 1);
  auto facet = [&](std::size_t i, int s) {
    auto rename = [&, i, s](const std::string& label) {
      std::vector<int> y = detail::parse_lattice(label);
      std::vector<int> x;
      for (std::size_t k = 0, m = 0; k < d; ++k) x.push_back(k == i ? s : s * y[m++]);
      return qlabel(x);
    };
    append_certificate(cert, determined, sub, rename, id);
  };
  for (std::size_t i = 0; i < d; ++i) facet(i, 1);
  // −v0 by the last-vertex rule; the negated half mirrors the positive one.
  append_certificate(cert, determined, cube_last_vertex_certificate(d, std::vector<int>(d, -1)),
                     [](const std::string& s) { return s; }, id);
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<int> c = zero;
    c[i] = -1;
    if (!determined.count(qlabel(c))) {
      std::vector<int> mv(d, -1);
      cert.steps.push_back({qlabel(c), {{qlabel(mv), qlabel(v(i))}, {qlabel(zero), e_inf[i]}}});
      determined.insert(qlabel(c));
    }
  }
  for (std::size_t i = 0; i < d; ++i) facet(i, -1);
  return cert;
}

/// d = 3: the W certificate (frame of 9). d ≥ 4: the inductive certificate from B.
inline DerivationCertificate qd_frame_certificate(std::size_t d) {
  if (d < 3) throw std::invalid_argument("qd_frame_certificate: d >= 3 required");
  return d == 3 ? w_frame_certificate() : qd_basis_certificate(d);
}

/// Certificate deriving the box (D/2)(Q^d+1) ("box:" labels) from L(p).
inline DerivationCertificate proj_box_certificate(std::size_t d) {
  DerivationCertificate cert;
  cert.frame = proj_box_frame_labels(d);
  std::set<std::string> determined(cert.frame.begin(), cert.frame.end());
  auto unit = [&](std::size_t i, int k) {
    std::vector<int> v(d, 0);
    v[i] = k;
    return lattice_label("box", v);
  };
  const std::string O = lattice_label("box", std::vector<int>(d, 0));
  int id = 1;
  std::vector<std::string> e_inf(d);
  for (std::size_t i = 0; i < d; ++i) {
    const std::size_t n = (i + 1) % d;
    const std::string T = "#" + std::to_string(id++);
    cert.steps.push_back({T, {{unit(i, 2), unit(n, 1)}, {unit(i, 1), unit(n, 2)}}});
    std::vector<int> x(d, 0);
    x[i] = 1;
    x[n] = 1;
    const std::string X = lattice_label("box", x);
    if (!determined.count(X)) {
      cert.steps.push_back({X, {{O, T}, {unit(i, 2), unit(n, 2)}}});
      determined.insert(X);
    }
    e_inf[i] = "#" + std::to_string(id++);
    cert.steps.push_back({e_inf[i], {{X, unit(n, 1)}, {O, unit(i, 2)}}});
  }
  for (const auto& c : lattice_box(d, 0, 2)) {
    const std::string l = lattice_label("box", c);
    if (determined.count(l)) continue;
    DerivationStep s{l, {}};
    for (std::size_t i = 0; i < d; ++i) {
      std::vector<std::string> j{c[i] == 0 ? O : unit(i, c[i])};
      for (std::size_t k = 0; k < d; ++k)
        if (k != i) j.push_back(e_inf[k]);
      s.joins.push_back(std::move(j));
    }
    cert.steps.push_back(std::move(s));
    determined.insert(l);
  }
  return cert;
}

// ---------------------------------------------------------------------------
// Greedy closure search

namespace detail {

inline std::string flat_key(const Flat& f) {
  std::string k;
  for (const auto& row : f.basis()) {
    for (const auto& x : row) k += x.to_string() + ",";
    k += ";";
  }
  return k;
}

}  // namespace detail

struct PropagateOptions {
  std::size_t max_steps = 100000;
  /// Rounds of adding meets-at-infinity when the closure gets stuck.
  std::size_t infinity_rounds = 3;
};

/// Greedy closure from `frame`: repeatedly derives undetermined points as the
/// meet of lines and planes spanned by determined points; when stuck, adds
/// points at infinity of determined lines. Deterministic (label order).
inline DerivationCertificate propagate(const PointConfiguration& c, const std::vector<std::string>& frame,
                                       PropagateOptions opt = {}) {
  DerivationCertificate cert;
  const std::size_t d = c.ambient_dim();
  std::vector<std::pair<std::string, HPoint>> known;  // determined ids in commit order
  std::set<std::string> known_ids;
  for (const auto& f : frame) {
    const std::string l = c.resolve(f);
    cert.frame.push_back(f);
    if (known_ids.insert(l).second) known.emplace_back(l, HPoint::from_affine(c.at(l)));
  }
  int next_id = 1;
  std::size_t rounds = 0;

  auto try_derive = [&](const std::string& label) -> std::optional<DerivationStep> {
    const HPoint L = HPoint::from_affine(c.at(label));
    struct Cand {
      Flat flat;
      std::vector<std::string> span;
    };
    std::vector<Cand> cands;
    // Lines through L spanned by two determined points.
    std::map<std::string, std::vector<std::size_t>> lines;
    std::vector<std::string> line_order;
    for (std::size_t a = 0; a < known.size(); ++a) {
      if (known[a].second == L) continue;
      const std::string k = detail::flat_key(join(L, known[a].second));
      auto [it, fresh] = lines.emplace(k, std::vector<std::size_t>{});
      if (fresh) line_order.push_back(k);
      it->second.push_back(a);
    }
    for (const auto& k : line_order) {
      const auto& members = lines[k];
      if (members.size() < 2) continue;
      std::vector<HPoint> pts{known[members[0]].second, known[members[1]].second};
      cands.push_back({join(pts), {known[members[0]].first, known[members[1]].first}});
    }
    auto reduce = [&]() -> std::optional<DerivationStep> {
      if (cands.empty()) return std::nullopt;
      Flat cur = cands[0].flat;
      DerivationStep s{label, {cands[0].span}};
      for (std::size_t i = 1; i < cands.size() && !cur.is_point(); ++i) {
        Flat m = meet(cur, cands[i].flat);
        if (m.dim() < cur.dim()) {
          cur = m;
          s.joins.push_back(cands[i].span);
        }
      }
      if (cur.is_point()) return s;
      return std::nullopt;
    };
    if (auto s = reduce()) return s;
    if (d < 3) return std::nullopt;
    // Planes through L spanned by three determined points.
    std::map<std::string, std::vector<std::size_t>> planes;
    std::vector<std::string> plane_order;
    for (std::size_t a = 0; a < known.size(); ++a)
      for (std::size_t b = a + 1; b < known.size(); ++b) {
        Flat f = join(std::vector<HPoint>{L, known[a].second, known[b].second});
        if (f.dim() != 2) continue;
        const std::string k = detail::flat_key(f);
        auto [it, fresh] = planes.emplace(k, std::vector<std::size_t>{});
        if (fresh) plane_order.push_back(k);
        auto& mem = it->second;
        for (std::size_t x : {a, b})
          if (std::find(mem.begin(), mem.end(), x) == mem.end()) mem.push_back(x);
      }
    for (const auto& k : plane_order) {
      const auto& mem = planes[k];
      // Pick three independent determined points spanning the plane.
      std::vector<std::size_t> pick;
      std::vector<HPoint> pts;
      for (std::size_t x : mem) {
        std::vector<HPoint> trial = pts;
        trial.push_back(known[x].second);
        if (join(trial).dim() == static_cast<int>(trial.size()) - 1) {
          pts = std::move(trial);
          pick.push_back(x);
          if (pts.size() == 3) break;
        }
      }
      if (pts.size() < 3) continue;
      cands.push_back({join(pts), {known[pick[0]].first, known[pick[1]].first, known[pick[2]].first}});
    }
    return reduce();
  };

  auto add_infinity = [&]() -> bool {
    // Lines spanned by determined pairs; their pairwise meets at infinity.
    std::vector<std::pair<Flat, std::vector<std::string>>> lines;
    std::set<std::string> keys;
    for (std::size_t a = 0; a < known.size(); ++a)
      for (std::size_t b = a + 1; b < known.size(); ++b) {
        Flat f = join(known[a].second, known[b].second);
        if (keys.insert(detail::flat_key(f)).second) lines.push_back({f, {known[a].first, known[b].first}});
      }
    std::vector<std::string> infinite_ids;
    for (const auto& [id, p] : known)
      if (!p.is_finite()) infinite_ids.push_back(id);
    auto is_known = [&](const HPoint& p) {
      return std::any_of(known.begin(), known.end(), [&](const auto& kp) { return kp.second == p; });
    };
    bool added = false;
    auto commit = [&](const HPoint& p, std::vector<std::vector<std::string>> joins) {
      if (p.is_finite() || is_known(p)) return;
      const std::string id = "#" + std::to_string(next_id++);
      cert.steps.push_back({id, std::move(joins)});
      known.emplace_back(id, p);
      infinite_ids.push_back(id);
      added = true;
    };
    for (std::size_t i = 0; i < lines.size(); ++i)
      for (std::size_t j = i + 1; j < lines.size(); ++j) {
        Flat m = meet(lines[i].first, lines[j].first);
        if (m.is_point()) commit(m.point(), {lines[i].second, lines[j].second});
      }
    if (infinite_ids.size() >= 2 && d == 2) {
      const std::vector<std::string> at_inf{infinite_ids[0], infinite_ids[1]};
      auto point_of = [&](const std::string& id) {
        return std::find_if(known.begin(), known.end(), [&](const auto& kp) { return kp.first == id; })->second;
      };
      const Flat line_inf = join(point_of(at_inf[0]), point_of(at_inf[1]));
      for (const auto& [f, span] : lines) {
        Flat m = meet(f, line_inf);
        if (m.is_point()) commit(m.point(), {span, at_inf});
      }
    }
    return added;
  };

  while (cert.steps.size() < opt.max_steps) {
    bool progress = false;
    for (const auto& [label, p] : c.points()) {
      if (known_ids.count(label)) continue;
      if (auto s = try_derive(label)) {
        cert.steps.push_back(std::move(*s));
        known_ids.insert(label);
        known.emplace_back(label, HPoint::from_affine(p));
        progress = true;
      }
    }
    if (progress) continue;
    if (known_ids.size() == c.size()) break;
    if (rounds++ >= opt.infinity_rounds || !add_infinity()) break;
  }
  // Drop intermediates that no configuration step ended up using.
  std::set<std::string> used;
  for (const auto& s : cert.steps)
    for (const auto& j : s.joins)
      for (const auto& id : j) used.insert(id);
  std::vector<DerivationStep> kept;
  for (auto& s : cert.steps)
    if (!DerivationCertificate::is_intermediate(s.target) || used.count(s.target)) kept.push_back(std::move(s));
  cert.steps = std::move(kept);
  return cert;
}

}  // namespace projuniq

#endif  // PROJUNIQ_DERIVE_HPP
