// projuniq — build, check, render and report on configurations and polytopes.
//
// Exit codes: 0 pass, 1 check failure (with witness), 2 usage error or
// infeasible request.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "projuniq/projuniq.hpp"

using namespace projuniq;
using io::Json;

namespace {

constexpr int kPass = 0, kFail = 1, kUsage = 2;

/// Raised for requests that are well-formed but cannot be carried out.
struct Infeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string verb, target;
  std::size_t dim = 3;
  std::string field, point, polytope, config, cert, out, op, poly, plane;
  std::uint64_t seed = 1;
  bool seed_given = false;
  std::size_t trials = 0, samples = 0, k = 0;
  int precision = 3;
  bool timing = false;
};

std::string replace_extension(const std::string& path, const std::string& ext) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + ext;
  return path.substr(0, dot) + ext;
}

class Runner {
 public:
  explicit Runner(Options o) : o_(std::move(o)), t0_(std::chrono::steady_clock::now()) {}

  int run() {
    if (o_.verb == "build") return build();
    if (o_.verb == "check") return check();
    if (o_.verb == "render") return render();
    return report();
  }

 private:
  // -------------------------------------------------------------------------
  // Output helpers

  /// Main document goes to --out (with a one-line note on stdout) or to stdout.
  void emit(const std::string& text, const std::string& what) {
    if (o_.out.empty()) {
      std::cout << text;
      return;
    }
    io::write_text(o_.out, text);
    outputs_.push_back(o_.out);
    std::cout << "wrote " << o_.out << " (" << what << ")\n";
  }

  void emit_side(const std::string& path, const std::string& text, const std::string& what) {
    io::write_text(path, text);
    outputs_.push_back(path);
    std::cout << "wrote " << path << " (" << what << ")\n";
  }

  void emit_certificate(const DerivationCertificate& c) {
    if (o_.out.empty()) return;
    emit_side(replace_extension(o_.out, ".cert"), io::dump(io::to_json(c)),
              "certificate: frame " + std::to_string(c.frame.size()) + ", " + std::to_string(c.steps.size()) +
                  " steps");
  }

  void emit_manifest() {
    if (o_.out.empty()) return;
    io::Manifest m;
    m.command = o_.verb + " " + o_.target;
    auto put = [&](const char* k, const std::string& v) {
      if (!v.empty()) m.parameters[k] = v;
    };
    put("dim", std::to_string(o_.dim));
    put("point", o_.point);
    put("op", o_.op);
    put("poly", o_.poly);
    put("plane", o_.plane);
    put("precision", std::to_string(o_.precision));
    if (o_.trials) put("trials", std::to_string(o_.trials));
    if (o_.samples) put("samples", std::to_string(o_.samples));
    if (o_.k) put("k", std::to_string(o_.k));
    if (o_.seed_given) m.seed = o_.seed;
    m.field = o_.field;
    for (const auto& p : {o_.polytope, o_.config, o_.cert})
      if (!p.empty()) m.inputs.push_back(p);
    m.outputs = outputs_;
    if (o_.timing) m.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    io::write_text(o_.out + ".manifest.json", io::dump(io::to_json(m)));
  }

  FieldPtr field() const { return o_.field.empty() ? nullptr : io::parse_field(o_.field); }

  Point point() const {
    if (o_.point.empty()) throw std::invalid_argument("--point is required");
    return io::parse_point(o_.point, field());
  }

  Polytope polytope() const {
    if (o_.polytope.empty()) throw std::invalid_argument("--polytope is required");
    return io::polytope_from(io::read_json(o_.polytope));
  }

  static io::Roles roles_of(const FunctionalArrangement& fa) {
    return {{"input", fa.input_labels}, {"grid", fa.grid_labels}, {"aux", fa.aux_labels}, {"output", {fa.output_label}}};
  }

  std::string decimal(const Rational& q) const { return io::detail::fixed(q, o_.precision); }

  // -------------------------------------------------------------------------
  // build

  /// `replay_on` is the configuration the certificate derives (defaults to `c`).
  int build_config(const PointConfiguration& c, io::Roles roles, const std::optional<DerivationCertificate>& cert,
                   const std::optional<PointConfiguration>& replay_on = std::nullopt) {
    emit(io::dump(io::to_json(io::ConfigFile{c, std::move(roles)})),
         "configuration: " + std::to_string(c.size()) + " points in R^" + std::to_string(c.ambient_dim()));
    if (cert) {
      // Never write a certificate that does not replay.
      if (auto chk = check_certificate(replay_on ? *replay_on : c, *cert); !chk)
        throw std::logic_error("built certificate fails: " + chk.reason);
      emit_certificate(*cert);
    }
    emit_manifest();
    return kPass;
  }

  int build() {
    const std::string& t = o_.target;
    if (t == "qd") return build_config(qd(o_.dim), {}, qd_frame_certificate(o_.dim));
    // W frames Q³: its certificate replays on Q³, not on W alone.
    if (t == "w") return build_config(w_config(), {}, w_frame_certificate(), qd(3));
    if (t == "proj-box") {
      const Point p = point();
      return build_config(proj_box(p), {}, proj_box_certificate(p.size()));
    }
    if (t == "coor") {
      const Point p = point();
      if (p.size() == 1) {
        CoorScalar cs = coor_scalar(p[0]);
        io::Roles roles{{"grid", cs.grid_labels}, {"aux", cs.aux_labels}, {"input", cs.input_labels}};
        return build_config(cs.config, roles, cs.certificate);
      }
      if (p.size() == 2) throw std::invalid_argument("coor: points need 1 or at least 3 coordinates");
      CoorPoint cp = coor_point(p);
      return build_config(cp.config, {{"output", {cp.zeta_label}}}, cp.certificate);
    }
    if (t == "gadget") {
      const Point p = point();
      if (p.size() != 2) throw std::invalid_argument("gadget: --point needs two values a,b");
      static const std::map<std::string, GadgetOp> ops{
          {"ADD", GadgetOp::add}, {"MLT", GadgetOp::mlt}, {"SUB", GadgetOp::sub}, {"DIV", GadgetOp::div}};
      auto it = ops.find(o_.op);
      if (it == ops.end()) throw std::invalid_argument("gadget: --op must be ADD, MLT, SUB or DIV");
      if (it->second == GadgetOp::div && p[1].is_zero()) throw Infeasible("DIV by zero");
      FunctionalArrangement fa = instantiate(ArrangementTemplate::single(it->second), {p[0], p[1]});
      return build_config(fa.config, roles_of(fa), fa.certificate);
    }
    if (t == "functional") {
      if (o_.poly.empty()) throw std::invalid_argument("functional: --poly is required");
      const Point p = point();
      if (p.size() != 1) throw std::invalid_argument("functional: --point needs one value");
      FunctionalArrangement fa = instantiate(compile_polynomial(io::parse_polynomial(o_.poly)), {p[0]});
      return build_config(fa.config, roles_of(fa), fa.certificate);
    }
    if (t == "universal") {
      UniversalResult r = universal_polytope(polytope());
      emit(io::dump(io::to_json(io::universal_file(r))),
           "universal: dim " + std::to_string(r.dimension) + ", " + std::to_string(r.vertex_count) + " vertices, #Q " +
               std::to_string(r.num_Q) + ", #R " + std::to_string(r.num_R));
      emit_certificate(r.triple.certificate);
      emit_manifest();
      return r.base_face_verified && r.base_to_input ? kPass : kFail;
    }
    if (t == "lawrence") {
      if (o_.config.empty()) throw std::invalid_argument("lawrence: --config with the free points is required");
      PPConfiguration pp{polytope().vertices, io::config_file_from(io::read_json(o_.config)).config};
      Polytope L = lawrence_extension(pp);
      emit(io::dump(io::to_json(L)), "Lawrence extension: dim " + std::to_string(L.dim) + ", " +
                                         std::to_string(L.num_vertices()) + " vertices");
      emit_manifest();
      return kPass;
    }
    if (t == "subdirect") {
      WeakProjectiveTriple tr = build_triple(polytope());
      SubdirectCone c = subdirect_cone(tr);
      Json j = io::to_json(c.pyramid);
      j["apex_label"] = c.apex_label;
      j["apex"] = io::point_json(c.apex);
      j["cut"] = io::point_json(c.cut);
      j["base_labels"] = c.base_labels;
      emit(io::dump(j), "subdirect cone: " + std::to_string(c.pyramid.num_vertices()) + " vertices in R^" +
                            std::to_string(c.pyramid.ambient_dim));
      emit_manifest();
      return kPass;
    }
    throw std::invalid_argument("unknown build target: " + t);
  }

  // -------------------------------------------------------------------------
  // check

  int finish_report(Json rep) {
    const bool pass = rep.at("pass").get<bool>();
    const std::string text = io::dump(rep);
    if (o_.out.empty()) {
      std::cout << text;
    } else {
      io::write_text(o_.out, text);
      outputs_.push_back(o_.out);
      std::cout << "wrote " << o_.out << "\n";
      emit_manifest();
    }
    std::cout << (pass ? "PASS" : "FAIL") << " " << o_.target << "\n";
    return pass ? kPass : kFail;
  }

  Json report_header() const {
    Json j = io::header("report");
    j["target"] = o_.target;
    if (o_.seed_given || o_.target != "certificate") j["seed"] = std::to_string(o_.seed);
    return j;
  }

  int check() {
    const std::string& t = o_.target;
    Json rep = report_header();
    if (t == "certificate") {
      if (o_.config.empty() || o_.cert.empty()) throw std::invalid_argument("certificate: --config and --cert required");
      const PointConfiguration c = io::config_file_from(io::read_json(o_.config)).config;
      const DerivationCertificate cert = io::read_certificate(o_.cert);
      const CertificateCheck chk = check_certificate(c, cert);
      std::set<std::string> covered;
      std::vector<std::string> missing;
      if (chk) {
        for (const auto& f : cert.frame) covered.insert(c.resolve(f));
        for (const auto& l : cert.derived())
          if (c.contains(l)) covered.insert(c.resolve(l));
        for (const auto& l : c.labels())
          if (!covered.count(l)) missing.push_back(l);
      }
      rep["points"] = c.size();
      rep["frame"] = cert.frame.size();
      rep["derived"] = chk ? covered.size() - std::min(covered.size(), cert.frame.size()) : 0;
      rep["steps"] = cert.steps.size();
      rep["replay"] = chk.ok;
      rep["underived"] = missing;
      rep["pass"] = chk.ok && missing.empty();
      if (!chk) rep["witness"] = chk.reason;
      else if (!missing.empty()) rep["witness"] = "not derived: " + missing.front();
      return finish_report(rep);
    }
    if (t == "gadgets") {
      const GadgetCheckReport g = check_gadgets(o_.trials ? o_.trials : 200, o_.seed);
      rep["trials"] = g.trials;
      rep["instances"] = g.checked;
      rep["pass"] = g.pass;
      if (!g.pass) rep["witness"] = g.witness;
      return finish_report(rep);
    }
    if (t == "lemma-dist") {
      const Rational eps(1, 100);
      BallApproximation b = ball_approx(3, eps, o_.seed);
      if (!b.feasible) throw Infeasible("no base polytope: " + b.reason);
      const LemmaDistReport r = check_subpolytope_lemma(*b.polytope, eps, o_.trials ? o_.trials : 100, o_.seed);
      rep["epsilon"] = eps.get_str();
      rep["base_vertices"] = b.polytope->num_vertices();
      rep["base"] = io::enclosure_json(r.base);
      rep["bound"] = r.bound.get_str();
      rep["trials"] = r.trials;
      Json per = Json::array();
      for (std::size_t i = 0; i < r.per_trial.size(); ++i) {
        Json e = io::enclosure_json(r.per_trial[i]);
        e["extra_vertices"] = r.extra_vertices[i];
        per.push_back(e);
      }
      rep["per_trial"] = per;
      rep["worst_upper"] = r.worst_upper.get_str();
      rep["worst_upper_decimal"] = decimal(r.worst_upper);
      rep["worst_ratio_decimal"] = decimal(r.bound > 0 ? Rational(r.worst_upper / r.bound) : Rational(0));
      rep["pass"] = r.pass;
      if (!r.pass) rep["witness"] = r.failure;
      return finish_report(rep);
    }
    if (t == "lemma-dist2") {
      const KStackedReport r = check_kstacked_lower_bound(3, o_.k ? o_.k : 5, o_.samples ? o_.samples : 50, o_.seed);
      rep["d"] = r.d;
      rep["k"] = r.k;
      rep["samples"] = r.samples;
      rep["bound"] = r.bound.get_str();
      Json per = Json::array();
      for (std::size_t i = 0; i < r.per_sample.size(); ++i) {
        Json e = io::enclosure_json(r.per_sample[i]);
        e["scale"] = r.scale[i].get_str();
        per.push_back(e);
      }
      rep["per_sample"] = per;
      rep["min_lower"] = r.min_lower.get_str();
      rep["min_lower_decimal"] = decimal(r.min_lower);
      rep["in_normalized_regime"] = r.in_regime;
      rep["sperner_edges_ok"] = r.sperner_ok;
      rep["pass"] = r.pass;
      return finish_report(rep);
    }
    if (t == "ratsub") {
      const RatsubReport r = check_ratsub(o_.trials ? o_.trials : 20, o_.seed);
      rep["trials"] = r.trials;
      rep["sections"] = r.sections;
      rep["max_summand_facets"] = r.max_summand_facets;
      rep["pass"] = r.pass;
      if (!r.pass) rep["witness"] = r.failure;
      return finish_report(rep);
    }
    throw std::invalid_argument("unknown check target: " + t);
  }

  // -------------------------------------------------------------------------
  // render

  int render() {
    const std::string path = !o_.config.empty() ? o_.config : o_.target;
    if (path.empty()) throw std::invalid_argument("render: configuration file required (--config)");
    io::ConfigFile f = io::config_file_from(io::read_json(path));
    std::optional<DerivationCertificate> cert;
    if (!o_.cert.empty()) cert = io::read_certificate(o_.cert);
    io::SvgOptions opt;
    opt.precision = o_.precision;
    if (!o_.plane.empty()) {
      auto parts = projuniq::detail::split(o_.plane, ',');
      if (parts.size() != 2) throw std::invalid_argument("--plane expects i,j");
      opt.axis_x = std::stoul(parts[0]);
      opt.axis_y = std::stoul(parts[1]);
      opt.allow_projection = true;
    }
    emit(io::render_svg(f.config, f.roles, cert, opt), "svg");
    emit_manifest();
    return kPass;
  }

  // -------------------------------------------------------------------------
  // report

  int report() {
    if (o_.target == "shephard") {
      const long k = o_.k ? static_cast<long>(o_.k) : 6;
      const Rational eps = shephard_bound(k);
      BallApproximation b = ball_approx(3, eps, o_.seed);
      Json j = io::header("report");
      j["target"] = "shephard";
      j["k"] = k;
      j["epsilon"] = eps.get_str();
      j["feasible"] = b.feasible;
      j["vertex_estimate"] = b.vertex_estimate.get_str();
      j["vertex_estimate_decimal"] = decimal(b.vertex_estimate);
      j["reason"] = b.reason;
      if (b.feasible) {
        j["vertices"] = b.polytope->num_vertices();
        j["enclosure"] = io::enclosure_json(b.enclosure);
      }
      std::cout << io::dump(j);
      if (!b.feasible) {
        std::cerr << "infeasible: " << b.reason << "\n";
        return kUsage;
      }
      return kPass;
    }
    const std::string path = !o_.config.empty() ? o_.config : o_.target;
    const Json j = io::read_json(path);
    const std::string kind = j.value("kind", std::string());
    std::cout << path << ": " << kind << " (format_version " << j.value("format_version", 0) << ")\n";
    if (kind == "configuration") {
      io::ConfigFile f = io::config_file_from(j);
      std::cout << "points " << f.config.size() << ", ambient dim " << f.config.ambient_dim() << ", aliases "
                << f.config.aliases().size() << "\n";
      for (const auto& [r, ls] : f.roles) std::cout << "role " << r << ": " << ls.size() << "\n";
    } else if (kind == "polytope") {
      Polytope P = io::polytope_from(j);
      std::cout << "dim " << P.dim << ", f-vector";
      for (auto x : f_vector(P)) std::cout << " " << x;
      std::cout << "\n";
    } else if (kind == "certificate") {
      DerivationCertificate c = io::certificate_from(j);
      std::cout << "frame " << c.frame.size() << ", steps " << c.steps.size() << ", derived labels "
                << c.derived().size() << "\n";
    } else if (kind == "universal") {
      io::UniversalFile u = io::universal_from(j);
      std::cout << "dim " << u.dimension << ", vertices " << u.vertex_count << ", #Q " << u.num_Q << ", #R " << u.num_R
                << ", base face " << (u.base_face_verified ? "verified" : "NOT verified") << ", map "
                << (u.base_to_input ? "found" : "none") << "\n";
      for (const auto& e : u.provenance) std::cout << "  " << e.step << ": " << e.detail << "\n";
    } else if (kind == "manifest") {
      io::Manifest m = io::manifest_from(j);
      std::cout << "command " << m.command << ", outputs " << m.outputs.size() << "\n";
    } else if (kind == "report") {
      std::cout << "target " << j.value("target", std::string()) << ": " << (j.value("pass", false) ? "PASS" : "FAIL")
                << "\n";
    } else {
      throw std::invalid_argument("unknown document kind: " + kind);
    }
    return kPass;
  }

  Options o_;
  std::chrono::steady_clock::time_point t0_;
  std::vector<std::string> outputs_;
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--dim", o.dim, "dimension")->check(CLI::Range(1, 12));
  sub->add_option("--field", o.field, "number field, e.g. \"x^2-2:[1,2]\"");
  sub->add_option("--seed", o.seed, "random seed");
  sub->add_option("--trials", o.trials, "number of trials");
  sub->add_option("--samples", o.samples, "number of samples");
  sub->add_option("--k", o.k, "facet bound k");
  sub->add_option("--out", o.out, "output file");
  sub->add_option("--precision", o.precision, "decimals in rendered output")->check(CLI::Range(0, 30));
  sub->add_option("--point", o.point, "comma-separated coordinates, e.g. \"sqrt2,1,1\"");
  sub->add_option("--polytope", o.polytope, "polytope file");
  sub->add_option("--config", o.config, "configuration file");
  sub->add_option("--cert", o.cert, "certificate file");
  sub->add_option("--op", o.op, "gadget operation: ADD, MLT, SUB, DIV");
  sub->add_option("--poly", o.poly, "integer polynomial in x, e.g. \"x^2-2\"");
  sub->add_option("--plane", o.plane, "coordinate plane i,j for rendering");
  sub->add_flag("--timing", o.timing, "record wall time in the manifest");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Projectively unique polytopes: constructions, certificates and experiments"};
  app.require_subcommand(1);
  Options o;

  auto* build = app.add_subcommand("build", "build a configuration, certificate or polytope");
  build->add_option("target", o.target)
      ->required()
      ->check(CLI::IsMember({"qd", "w", "proj-box", "coor", "universal", "lawrence", "subdirect", "gadget",
                             "functional"}));
  add_common(build, o);

  auto* check = app.add_subcommand("check", "run a check and report pass/fail");
  check->add_option("target", o.target)
      ->required()
      ->check(CLI::IsMember({"certificate", "lemma-dist", "lemma-dist2", "ratsub", "gadgets"}));
  add_common(check, o);

  auto* render = app.add_subcommand("render", "render a planar configuration as SVG");
  render->add_option("file", o.target, "configuration file (or --config)");
  add_common(render, o);

  auto* report = app.add_subcommand("report", "summarize a file, or 'shephard' for the scale statement");
  report->add_option("target", o.target, "file or 'shephard'");
  add_common(report, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }
  for (auto* s : {build, check, render, report})
    if (s->parsed()) {
      o.verb = s->get_name();
      o.seed_given = s->count("--seed") > 0;
    }
  if (o.verb == "report" && o.target.empty() && o.config.empty()) {
    std::cerr << "report: file or 'shephard' required\n";
    return kUsage;
  }

  try {
    return Runner(o).run();
  } catch (const Infeasible& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed input: " << e.what() << "\n";
    return kUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return kFail;
  }
}
