#ifndef PROJUNIQ_SHEPHARD_HPP
#define PROJUNIQ_SHEPHARD_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "projuniq/hull.hpp"
#include "projuniq/random.hpp"

namespace projuniq {

/// Rigorous bounds on d_H(P, B_1(0)).
struct DistanceEnclosure {
  Rational lower, upper;
};

namespace detail {

inline Rational pow2(long e) {
  Rational r(1);
  if (e >= 0) r = Rational(Integer(1) << static_cast<mp_bitcnt_t>(e));
  else r = Rational(Integer(1), Integer(1) << static_cast<mp_bitcnt_t>(-e));
  return r;
}

/// floor(√q·2^bits)/2^bits ≤ √q.
inline Rational sqrt_lower(const Rational& q, unsigned bits) {
  if (sgn(q) <= 0) return Rational(0);
  const Integer scale = Integer(1) << (2 * bits);
  Integer n = q.get_num() * scale / q.get_den();  // floor
  Integer s = sqrt(n);
  Rational r(s, Integer(1) << bits);
  r.canonicalize();
  return r;
}

/// ceil(√q·2^bits)/2^bits ≥ √q.
inline Rational sqrt_upper(const Rational& q, unsigned bits) {
  if (sgn(q) <= 0) return Rational(0);
  const Integer scale = Integer(1) << (2 * bits);
  Integer num = q.get_num() * scale, n = num / q.get_den();
  if (n * q.get_den() != num) n += 1;  // ceil
  Integer s = sqrt(n);
  if (s * s != n) s += 1;
  Rational r(s, Integer(1) << bits);
  r.canonicalize();
  return r;
}

/// √q when q is the square of a rational.
inline std::optional<Rational> exact_sqrt(const Rational& q) {
  if (sgn(q) < 0 || !mpz_perfect_square_p(q.get_num_mpz_t()) || !mpz_perfect_square_p(q.get_den_mpz_t()))
    return std::nullopt;
  Rational r(Integer(sqrt(q.get_num())), Integer(sqrt(q.get_den())));
  r.canonicalize();
  return r;
}

inline Scalar norm2(const std::vector<Scalar>& v) {
  Scalar s(0);
  for (const auto& x : v) s += x * x;
  return s;
}

}  // namespace detail

/// Whether the origin lies in the interior of a full-dimensional P.
inline bool origin_interior(const Polytope& P) {
  if (P.dim != static_cast<int>(P.ambient_dim)) return false;
  for (const auto& f : P.facets)
    if (f.offset.sign() <= 0) return false;
  return true;
}

/// d_H(P, B) = max(max_v ‖v‖ − 1, 1 − min_F dist(0, aff F)), square roots
/// enclosed on a 2^-bits grid.
inline DistanceEnclosure hausdorff_to_ball(const Polytope& P, unsigned bits = 64) {
  if (!origin_interior(P)) throw std::invalid_argument("hausdorff_to_ball: origin is not an interior point");
  std::optional<Rational> rmax_lo, rmax_hi, rmin_lo, rmin_hi;
  for (const auto& [l, v] : P.vertices.points()) {
    auto [a, b] = detail::norm2(v).enclosure(2 * bits);
    Rational lo = detail::sqrt_lower(a, bits), hi = detail::sqrt_upper(b, bits);
    if (!rmax_lo || lo > *rmax_lo) rmax_lo = lo;
    if (!rmax_hi || hi > *rmax_hi) rmax_hi = hi;
  }
  for (const auto& f : P.facets) {
    // dist² = b² / ‖n‖²
    auto [a, b] = (f.offset * f.offset / detail::norm2(f.normal)).enclosure(2 * bits);
    Rational lo = detail::sqrt_lower(a, bits), hi = detail::sqrt_upper(b, bits);
    if (!rmin_lo || lo < *rmin_lo) rmin_lo = lo;
    if (!rmin_hi || hi < *rmin_hi) rmin_hi = hi;
  }
  DistanceEnclosure e;
  e.lower = std::max(Rational(*rmax_lo - 1), Rational(1 - *rmin_hi));
  e.upper = std::max(Rational(*rmax_hi - 1), Rational(1 - *rmin_lo));
  if (sgn(e.lower) < 0) e.lower = 0;
  if (sgn(e.upper) < 0) e.upper = 0;
  return e;
}

/// ‖v‖ ≤ (1+ε)(1−ε)/(1−ε−2√ε) for new vertices of a superset, with √ε
/// enclosed from above (so the returned value bounds the exact one from above).
inline Rational vertex_norm_bound(const Rational& eps, unsigned bits = 64) {
  if (sgn(eps) <= 0) throw std::invalid_argument("vertex_norm_bound: eps must be positive");
  // √ε exactly when rational, otherwise rounded up (which only enlarges the bound).
  const auto ex = detail::exact_sqrt(eps);
  const Rational hi = ex ? *ex : detail::sqrt_upper(eps, bits);
  if (2 * hi >= 1 - eps) throw std::invalid_argument("vertex_norm_bound: requires 2*sqrt(eps) < 1 - eps");
  return Rational((1 + eps) * (1 - eps) / (1 - eps - 2 * hi));
}

/// The simplified bound 1 + 6√ε (valid for √ε ≤ 1/6), rounded up.
inline Rational simple_vertex_norm_bound(const Rational& eps, unsigned bits = 64) {
  const auto ex = detail::exact_sqrt(eps);
  return Rational(1 + 6 * (ex ? *ex : detail::sqrt_upper(eps, bits)));
}

inline Rational shephard_bound(long k) {
  if (k < 4) throw std::invalid_argument("shephard_bound: k >= 4 required");
  return Rational(detail::pow2(-4 * k - 10) / 9);
}

inline Rational kstacked_bound(long k) { return detail::pow2(-2 * k - 4); }

// ---------------------------------------------------------------------------
// Ball approximation

/// Exact rational point on S² from stereographic coordinates (u, v);
/// `upper` selects the chart centred at the south pole.
inline Point sphere_point(const Rational& u, const Rational& v, bool upper) {
  const Rational s = u * u + v * v;
  const Rational den = 1 + s;
  return {Scalar(Rational(2 * u / den)), Scalar(Rational(2 * v / den)),
          Scalar(upper ? Rational((1 - s) / den) : Rational((s - 1) / den))};
}

/// Nearest rational sphere point to a unit direction (display-grade input;
/// the result lies exactly on the sphere).
inline Point round_to_sphere(double x, double y, double z, unsigned bits = 20) {
  const bool upper = z >= 0;
  const double u = x / (1 + std::fabs(z)), v = y / (1 + std::fabs(z));
  const double scale = std::ldexp(1.0, static_cast<int>(bits));
  Rational ru(Integer(static_cast<long>(std::llround(u * scale))), Integer(1) << bits);
  Rational rv(Integer(static_cast<long>(std::llround(v * scale))), Integer(1) << bits);
  ru.canonicalize();
  rv.canonicalize();
  return sphere_point(ru, rv, upper);
}

struct BallApproximation {
  bool feasible = false;
  std::string reason;
  Rational epsilon;
  /// Vertex count a cap covering of S² at this ε needs (≈ 2.418/ε).
  Rational vertex_estimate;
  std::optional<Polytope> polytope;
  DistanceEnclosure enclosure;
  std::size_t attempts = 0;
};

/// Covering estimate: caps of angular radius ≈ √(2ε), hexagonal covering density 2π/(3√3).
inline Rational ball_vertex_estimate(const Rational& eps) {
  // 4π·(2π/(3√3)) / (π·2ε) = 4π/(3√3·ε); 4π/(3√3) ≈ 2.4184.
  return Rational(Rational(24184, 10000) / eps);
}

/// Smallest supported ε for explicit construction.
inline Rational ball_min_epsilon() { return Rational(1, 1000); }

inline BallApproximation ball_approx(std::size_t d, const Rational& eps, std::uint64_t seed) {
  BallApproximation out;
  out.epsilon = eps;
  out.vertex_estimate = ball_vertex_estimate(eps);
  if (d != 3) {
    out.reason = "only d = 3 is supported";
    return out;
  }
  if (eps < ball_min_epsilon()) {
    out.reason = "epsilon below the supported scale 1/1000; a covering needs about " +
                 Integer(out.vertex_estimate.get_num() / out.vertex_estimate.get_den()).get_str() + " vertices";
    return out;
  }
  Rng rng(seed);
  const double offset = static_cast<double>(rng.uniform_index(1u << 20)) / static_cast<double>(1u << 20);
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  double n = std::ceil(2 * out.vertex_estimate.get_d()) + 8;
  for (int attempt = 0; attempt < 12; ++attempt, n = std::ceil(n * 1.25)) {
    out.attempts = static_cast<std::size_t>(attempt + 1);
    const std::size_t N = static_cast<std::size_t>(n);
    PointConfiguration c(3);
    for (std::size_t i = 0; i < N; ++i) {
      const double z = 1 - (2.0 * static_cast<double>(i) + 1) / static_cast<double>(N);
      const double r = std::sqrt(std::max(0.0, 1 - z * z));
      const double phi = golden * static_cast<double>(i) + 2 * M_PI * offset;
      c.insert("s" + std::to_string(i), round_to_sphere(r * std::cos(phi), r * std::sin(phi), z));
    }
    Polytope P = convex_hull(c);
    if (!origin_interior(P)) continue;
    auto e = hausdorff_to_ball(P);
    if (e.upper <= eps) {
      out.feasible = true;
      out.polytope = std::move(P);
      out.enclosure = e;
      return out;
    }
  }
  out.reason = "no covering within the attempt schedule";
  return out;
}

// ---------------------------------------------------------------------------
// Subpolytope lemma

struct LemmaDistReport {
  std::uint64_t seed = 0;
  Rational epsilon;            // hypothesis d_H(P, B) ≤ ε
  DistanceEnclosure base;      // of P
  Rational bound;              // 6√ε, rounded down
  std::size_t trials = 0;
  std::vector<DistanceEnclosure> per_trial;
  std::vector<std::size_t> extra_vertices;
  Rational worst_upper;
  double max_ratio = 0;        // worst upper / bound
  bool pass = false;
  std::string failure;
};

/// Random supersets P′ with F_0(P) ⊆ F_0(P′): 1–3 extra points at random
/// directions with norms in (1, vertex_norm_bound(ε)], halving the excess
/// until no vertex of P is swallowed.
inline LemmaDistReport check_subpolytope_lemma(const Polytope& P, const Rational& eps, std::size_t trials,
                                               std::uint64_t seed) {
  LemmaDistReport rep;
  rep.seed = seed;
  rep.epsilon = eps;
  rep.trials = trials;
  if (eps > Rational(1, 36)) throw std::invalid_argument("check_subpolytope_lemma: eps <= 1/36 required");
  rep.base = hausdorff_to_ball(P);
  if (rep.base.upper > eps) {
    rep.failure = "hypothesis not met: d_H(P, B) upper bound " + rep.base.upper.get_str() + " exceeds eps";
    return rep;
  }
  const auto root = detail::exact_sqrt(eps);
  rep.bound = Rational(6 * (root ? *root : detail::sqrt_lower(eps, 64)));
  const Rational rmax = vertex_norm_bound(eps);
  Rng rng(seed);
  const auto labels = P.labels();
  rep.pass = true;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng trng = rng.split();
    const std::size_t extra = 1 + trng.uniform_index(3);
    Polytope Pp = P;
    std::size_t added = 0;
    for (std::size_t j = 0; j < extra; ++j) {
      const Point dir = sphere_point(trng.uniform_rational(1000, 1000), trng.uniform_rational(1000, 1000),
                                     trng.uniform_index(2) == 0);
      Rational excess = (rmax - 1) * trng.unit(30);
      for (int h = 0; h < 80; ++h, excess /= 2) {
        const Scalar r(Rational(1 + excess));
        Point v(3);
        for (int i = 0; i < 3; ++i) v[i] = dir[i] * r;
        PointConfiguration x(3);
        x.insert("x" + std::to_string(j), v);
        Polytope H = extend_hull(Pp, x);
        bool keeps = true;
        for (std::size_t i = 0; i < labels.size() && keeps; ++i) keeps = H.vertices.contains(labels[i]);
        if (keeps) {
          Pp = std::move(H);
          ++added;
          break;
        }
      }
    }
    const auto e = hausdorff_to_ball(Pp);
    rep.per_trial.push_back(e);
    rep.extra_vertices.push_back(added);
    if (t == 0 || e.upper > rep.worst_upper) rep.worst_upper = e.upper;
    rep.max_ratio = std::max(rep.max_ratio, Rational(e.upper / rep.bound).get_d());
    if (e.upper > rep.bound && rep.pass) {
      rep.pass = false;
      rep.failure = "trial " + std::to_string(t) + " exceeds 6*sqrt(eps)";
    }
  }
  return rep;
}

struct ContrapositiveReport {
  Rational delta;
  DistanceEnclosure outer;       // of Q′
  Rational threshold;            // δ²/36
  std::size_t subpolytopes = 0;
  Rational min_lower;
  bool pass = false;
};

/// For Q′ with d_H > δ: random vertex subsets Q must have d_H > δ²/36.
/// Subsets without the origin in their interior have d_H ≥ 1.
inline ContrapositiveReport check_contrapositive(const Polytope& Qp, const Rational& delta, std::size_t trials,
                                                 std::uint64_t seed) {
  ContrapositiveReport rep;
  rep.delta = delta;
  rep.outer = hausdorff_to_ball(Qp);
  rep.threshold = Rational(delta * delta / 36);
  if (!(rep.outer.lower > delta)) return rep;  // hypothesis not met
  Rng rng(seed);
  const auto labels = Qp.labels();
  rep.pass = true;
  bool first = true;
  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<std::string> keep;
    for (const auto& l : labels)
      if (rng.uniform_index(4) != 0) keep.push_back(l);
    if (keep.size() < 4) continue;
    const Polytope Q = subpolytope(Qp, keep);
    Rational lower(1);
    if (origin_interior(Q)) lower = hausdorff_to_ball(Q).lower;
    ++rep.subpolytopes;
    if (first || lower < rep.min_lower) rep.min_lower = lower;
    first = false;
    if (!(lower > rep.threshold)) rep.pass = false;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// k-stacked lower bound

struct KStackedReport {
  std::size_t d = 0, k = 0, samples = 0;
  std::uint64_t seed = 0;
  Rational bound;  // 2^{−2k−4}
  std::vector<DistanceEnclosure> per_sample;
  std::vector<Rational> scale;      // normalization used per sample
  Rational min_lower;
  std::size_t in_regime = 0;        // samples normalized to d_H ≤ 1 − 1/√2
  bool sperner_ok = true;
  bool pass = false;
};

namespace detail {

/// Best of a few centers (vertex centroid, box center) and the scale
/// 2/(R + r) equalizing the outer and inner terms.
inline std::pair<DistanceEnclosure, Rational> normalized_distance(const Polytope& S) {
  const std::size_t d = S.ambient_dim;
  std::vector<Point> centers;
  Point centroid(d, Scalar(0));
  for (const auto& [l, p] : S.vertices.points())
    for (std::size_t j = 0; j < d; ++j) centroid[j] += p[j];
  for (auto& x : centroid) x /= Scalar(static_cast<long>(S.num_vertices()));
  centers.push_back(centroid);
  Point lo = S.vertices.points().begin()->second, hi = lo;
  for (const auto& [l, p] : S.vertices.points())
    for (std::size_t j = 0; j < d; ++j) {
      if (p[j] < lo[j]) lo[j] = p[j];
      if (p[j] > hi[j]) hi[j] = p[j];
    }
  Point box(d);
  for (std::size_t j = 0; j < d; ++j) box[j] = (lo[j] + hi[j]) / Scalar(2);
  centers.push_back(box);
  std::optional<DistanceEnclosure> best;
  Rational best_scale;
  for (const auto& c : centers) {
    PointConfiguration t(d);
    for (const auto& [l, p] : S.vertices.points()) {
      Point q(d);
      for (std::size_t j = 0; j < d; ++j) q[j] = p[j] - c[j];
      t.insert(l, q);
    }
    Polytope T = convex_hull(t);
    if (!origin_interior(T)) continue;
    auto e0 = hausdorff_to_ball(T, 32);
    // At scale 1: R ≈ 1 + outer term, r ≈ 1 − inner term (coarse, then exact re-evaluation).
    double R = 0, r = 1e300;
    for (const auto& [l, p] : T.vertices.points()) R = std::max(R, std::sqrt(norm2(p).to_double()));
    for (const auto& f : T.facets) r = std::min(r, std::fabs(f.offset.to_double()) / std::sqrt(norm2(f.normal).to_double()));
    (void)e0;
    Rational s(static_cast<long>(std::llround(2.0 / (R + r) * 1048576.0)), 1048576L);
    s.canonicalize();
    PointConfiguration u(d);
    for (const auto& [l, p] : T.vertices.points()) {
      Point q(d);
      for (std::size_t j = 0; j < d; ++j) q[j] = p[j] * Scalar(s);
      u.insert(l, q);
    }
    auto e = hausdorff_to_ball(convex_hull(u));
    if (!best || e.lower < best->lower) {
      best = e;
      best_scale = s;
    }
  }
  if (!best) throw std::runtime_error("normalized_distance: no interior center found");
  return {*best, best_scale};
}

inline Integer binomial(unsigned long n, unsigned long k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

}  // namespace detail

/// Sperner: a summand with k facets has at most C(k, ⌊k/2⌋) edges.
inline bool sperner_edge_check(const Polytope& S, const StackedRecipe& r) {
  for (const auto& s : r.summands) {
    const Polytope Si = subpolytope(S, s.labels);
    if (Integer(static_cast<unsigned long>(edges(Si).size())) > detail::binomial(Si.num_facets(), Si.num_facets() / 2))
      return false;
  }
  return true;
}

inline KStackedReport check_kstacked_lower_bound(std::size_t d, std::size_t k, std::size_t samples,
                                                 std::uint64_t seed) {
  if (d < 3) throw std::invalid_argument("check_kstacked_lower_bound: d >= 3 required");
  KStackedReport rep;
  rep.d = d;
  rep.k = k;
  rep.samples = samples;
  rep.seed = seed;
  rep.bound = kstacked_bound(static_cast<long>(k));
  Rng rng(seed);
  // 1 − 1/√2 < 3/10, so anything at or below 29/100 is in the lemma's regime.
  const Rational regime(29, 100);
  rep.pass = true;
  for (std::size_t i = 0; i < samples; ++i) {
    Rng srng = rng.split();
    const std::uint64_t s = srng.next();
    std::pair<Polytope, StackedRecipe> g = k == d + 1
                                              ? stacked_generator(d, 1 + srng.uniform_index(8), s)
                                              : kstacked_generator(d, k, 2 + srng.uniform_index(3), s);
    for (const auto& sm : g.second.summands)
      if (sm.facets > k) rep.pass = false;
    if (!sperner_edge_check(g.first, g.second)) rep.sperner_ok = rep.pass = false;
    auto [e, scale] = detail::normalized_distance(g.first);
    rep.per_sample.push_back(e);
    rep.scale.push_back(scale);
    if (e.upper <= regime) ++rep.in_regime;
    if (i == 0 || e.lower < rep.min_lower) rep.min_lower = e.lower;
    if (e.lower < rep.bound) rep.pass = false;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Sections of connected-sum recipes

/// Recipe of H ∩ S from the recipe of S: summands H ∩ S_i (empty or
/// lower-dimensional pieces dropped), gluings kept where the shared facet is
/// cut in codimension one.
inline std::pair<Polytope, StackedRecipe> section_recipe(const Polytope& S, const StackedRecipe& r, const Flat& H) {
  StackedRecipe out;
  out.d = r.d - 1;
  out.k = r.k;
  std::vector<std::optional<std::size_t>> index(r.summands.size());
  for (std::size_t i = 0; i < r.summands.size(); ++i) {
    const Polytope Si = subpolytope(S, r.summands[i].labels);
    const Polytope cut = hyperplane_section(Si, H);
    if (cut.dim != static_cast<int>(r.d) - 1) continue;
    index[i] = out.summands.size();
    out.summands.push_back({r.summands[i].kind + "-section", cut.labels(), cut.num_facets()});
  }
  for (const auto& g : r.gluings) {
    if (!index[g.onto] || !index[g.added]) continue;
    const auto& a = out.summands[*index[g.onto]].labels;
    const auto& b = out.summands[*index[g.added]].labels;
    std::vector<std::string> shared;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(shared));
    if (shared.size() < r.d - 1) continue;
    out.gluings.push_back({*index[g.onto], *index[g.added], shared});
  }
  return {hyperplane_section(S, H), out};
}

struct RatsubReport {
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::size_t sections = 0;       // nonempty sections examined
  std::size_t max_summand_facets = 0;
  bool pass = false;
  std::string failure;
};

/// Random stacked recipes cut by random hyperplanes through an interior point.
inline RatsubReport check_ratsub(std::size_t trials, std::uint64_t seed, std::size_t d = 3) {
  RatsubReport rep;
  rep.trials = trials;
  rep.seed = seed;
  rep.pass = true;
  Rng rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    Rng trng = rng.split();
    const std::size_t k = d + 1 + trng.uniform_index(3);
    const std::uint64_t s = trng.next();
    auto [S, r] = k == d + 1 ? stacked_generator(d, 2 + trng.uniform_index(6), s)
                             : kstacked_generator(d, k, 2 + trng.uniform_index(3), s);
    // Interior point: a random strictly positive combination of the vertices.
    Point x(d, Scalar(0));
    Rational total(0);
    for (const auto& [l, p] : S.vertices.points()) {
      const Rational w(static_cast<long>(1 + trng.uniform_index(16)));
      total += w;
      for (std::size_t j = 0; j < d; ++j) x[j] += p[j] * Scalar(w);
    }
    for (auto& c : x) c /= Scalar(total);
    std::vector<Scalar> eq(d + 1, Scalar(0));
    bool nonzero = false;
    for (std::size_t j = 0; j < d; ++j) {
      eq[j] = Scalar(trng.uniform_rational(9, 4));
      nonzero |= !eq[j].is_zero();
    }
    if (!nonzero) eq[0] = Scalar(1);
    for (std::size_t j = 0; j < d; ++j) eq[d] -= eq[j] * x[j];
    const Flat H = Flat::from_equations({eq}, d);
    auto [cut, rec] = section_recipe(S, r, H);
    ++rep.sections;
    for (const auto& sm : rec.summands) {
      rep.max_summand_facets = std::max(rep.max_summand_facets, sm.facets);
      if (sm.facets > k && rep.pass) {
        rep.pass = false;
        rep.failure = "trial " + std::to_string(t) + ": section summand with " + std::to_string(sm.facets) +
                      " facets exceeds k = " + std::to_string(k);
      }
    }
    if (rec.summands.empty() && rep.pass) {
      rep.pass = false;
      rep.failure = "trial " + std::to_string(t) + ": hyperplane through an interior point missed every summand";
    }
  }
  return rep;
}

}  // namespace projuniq

#endif  // PROJUNIQ_SHEPHARD_HPP
