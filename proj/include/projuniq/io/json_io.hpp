#ifndef PROJUNIQ_IO_JSON_IO_HPP
#define PROJUNIQ_IO_JSON_IO_HPP

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "projuniq/derive.hpp"
#include "projuniq/hull.hpp"
#include "projuniq/shephard.hpp"
#include "projuniq/universal.hpp"

namespace projuniq::io {

// Insertion-ordered so that written files are stable and readable.
using Json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

/// Point roles used by the renderer.
using Roles = std::map<std::string, std::vector<std::string>>;

struct ConfigFile {
  PointConfiguration config;
  Roles roles;  // "input", "grid", "aux", "output"
};

inline Json scalar_json(const Scalar& s) { return s.to_string(); }

inline Scalar scalar_from(const Json& j) {
  if (!j.is_string()) throw std::invalid_argument("scalar must be an exact string, got " + j.dump());
  return parse_scalar(j.get<std::string>());
}

inline Json point_json(const Point& p) {
  Json a = Json::array();
  for (const auto& x : p) a.push_back(scalar_json(x));
  return a;
}

inline Point point_from(const Json& j) {
  Point p;
  for (const auto& x : j) p.push_back(scalar_from(x));
  return p;
}

inline Json header(const std::string& kind) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = kind;
  return j;
}

inline void expect_kind(const Json& j, const std::string& kind) {
  if (!j.contains("format_version") || j.at("format_version").get<int>() != kFormatVersion)
    throw std::invalid_argument("unsupported or missing format_version");
  if (j.value("kind", std::string()) != kind)
    throw std::invalid_argument("expected a '" + kind + "' document, got '" + j.value("kind", std::string()) + "'");
}

// ---------------------------------------------------------------------------
// Configurations

inline Json points_json(const PointConfiguration& c) {
  Json pts = Json::array();
  for (const auto& [l, p] : c.points()) pts.push_back(Json{{"label", l}, {"coords", point_json(p)}});
  return pts;
}

inline Json config_body(const PointConfiguration& c) {
  Json j;
  j["ambient_dim"] = c.ambient_dim();
  j["points"] = points_json(c);
  Json al = Json::object();
  for (const auto& [a, t] : c.aliases()) al[a] = t;
  j["aliases"] = al;
  return j;
}

inline PointConfiguration config_from_body(const Json& j) {
  PointConfiguration c(j.at("ambient_dim").get<std::size_t>());
  for (const auto& e : j.at("points")) {
    const std::string l = e.at("label").get<std::string>();
    if (c.insert(l, point_from(e.at("coords"))) != l) throw std::invalid_argument("duplicate point: " + l);
  }
  if (j.contains("aliases"))
    for (const auto& [a, t] : j.at("aliases").items()) c.add_alias(a, t.get<std::string>());
  return c;
}

inline Json to_json(const ConfigFile& f) {
  Json j = header("configuration");
  const Json body = config_body(f.config);
  for (const auto& [k, v] : body.items()) j[k] = v;
  Json roles = Json::object();
  for (const auto& [r, ls] : f.roles) roles[r] = ls;
  j["roles"] = roles;
  return j;
}

inline ConfigFile config_file_from(const Json& j) {
  expect_kind(j, "configuration");
  ConfigFile f;
  f.config = config_from_body(j);
  if (j.contains("roles"))
    for (const auto& [r, ls] : j.at("roles").items()) f.roles[r] = ls.get<std::vector<std::string>>();
  return f;
}

// ---------------------------------------------------------------------------
// Certificates

inline Json to_json(const DerivationCertificate& c) {
  Json j = header("certificate");
  j["frame"] = c.frame;
  Json steps = Json::array();
  for (const auto& s : c.steps) steps.push_back(Json{{"target", s.target}, {"joins", s.joins}});
  j["steps"] = steps;
  return j;
}

inline DerivationCertificate certificate_from(const Json& j) {
  expect_kind(j, "certificate");
  DerivationCertificate c;
  c.frame = j.at("frame").get<std::vector<std::string>>();
  for (const auto& s : j.at("steps"))
    c.steps.push_back({s.at("target").get<std::string>(), s.at("joins").get<std::vector<std::vector<std::string>>>()});
  return c;
}

// ---------------------------------------------------------------------------
// Polytopes

inline Json to_json(const Polytope& P) {
  Json j = header("polytope");
  j["ambient_dim"] = P.ambient_dim;
  j["dim"] = P.dim;
  j["vertices"] = points_json(P.vertices);
  Json fs = Json::array();
  for (const auto& f : P.facets)
    fs.push_back(Json{{"normal", point_json(f.normal)}, {"offset", scalar_json(f.offset)}, {"vertices", f.vertices}});
  j["facets"] = fs;
  return j;
}

/// Facets, when present, must agree with the hull recomputed from the vertices.
inline Polytope polytope_from(const Json& j) {
  expect_kind(j, "polytope");
  PointConfiguration c(j.at("ambient_dim").get<std::size_t>());
  for (const auto& e : j.at("vertices")) c.insert(e.at("label").get<std::string>(), point_from(e.at("coords")));
  Polytope P = convex_hull(c);
  if (P.num_vertices() != c.size()) throw std::invalid_argument("polytope file lists non-vertices");
  if (j.contains("facets") && !j.at("facets").empty()) {
    std::set<std::vector<std::string>> want, have;
    for (const auto& f : j.at("facets")) want.insert(f.at("vertices").get<std::vector<std::string>>());
    for (const auto& f : P.facets) have.insert(f.vertices);
    if (want != have) throw std::invalid_argument("polytope file facets disagree with the vertex hull");
  }
  return P;
}

inline Json to_json(const PPConfiguration& pp) {
  Json j = header("pp_configuration");
  j["vertices"] = config_body(pp.vertices);
  j["free_points"] = config_body(pp.free_points);
  return j;
}

inline PPConfiguration pp_from(const Json& j) {
  expect_kind(j, "pp_configuration");
  return {config_from_body(j.at("vertices")), config_from_body(j.at("free_points"))};
}

// ---------------------------------------------------------------------------
// Pipeline results

inline Json to_json(const std::vector<ProvenanceEvent>& log) {
  Json a = Json::array();
  for (const auto& e : log) {
    Json d = Json::object();
    for (const auto& [k, v] : e.data) d[k] = v;
    a.push_back(Json{{"step", e.step}, {"detail", e.detail}, {"data", d}});
  }
  return a;
}

inline std::vector<ProvenanceEvent> provenance_from(const Json& a) {
  std::vector<ProvenanceEvent> log;
  for (const auto& e : a)
    log.push_back({e.at("step").get<std::string>(), e.at("detail").get<std::string>(),
                   e.at("data").get<std::map<std::string, std::string>>()});
  return log;
}

inline Json matrix_json(const Matrix<Scalar>& m) {
  Json a = Json::array();
  for (const auto& row : m) a.push_back(point_json(row));
  return a;
}

/// Sparse Lawrence coordinates: base part plus (axis, height).
inline Json to_json(const LawrenceCoordinates& L) {
  Json j;
  j["base_dim"] = L.base_dim;
  j["num_axes"] = L.num_axes;
  j["axis_labels"] = L.axis_labels;
  j["base_labels"] = L.base_labels;
  Json vs = Json::array();
  for (std::size_t i = 0; i < L.vertices.size(); ++i) {
    const auto& v = L.vertices[i];
    Json e{{"label", L.labels[i]}, {"base", point_json(v.base)}};
    if (v.axis) {
      e["axis"] = *v.axis;
      e["height"] = scalar_json(v.height);
    }
    vs.push_back(e);
  }
  j["vertices"] = vs;
  return j;
}

inline LawrenceCoordinates lawrence_from(const Json& j) {
  LawrenceCoordinates L;
  L.base_dim = j.at("base_dim").get<std::size_t>();
  L.num_axes = j.at("num_axes").get<std::size_t>();
  L.axis_labels = j.at("axis_labels").get<std::vector<std::string>>();
  L.base_labels = j.at("base_labels").get<std::vector<std::string>>();
  for (const auto& e : j.at("vertices")) {
    LawrenceVertex v{point_from(e.at("base")), std::nullopt, Scalar(0)};
    if (e.contains("axis")) {
      v.axis = e.at("axis").get<std::size_t>();
      v.height = scalar_from(e.at("height"));
    }
    L.labels.push_back(e.at("label").get<std::string>());
    L.vertices.push_back(std::move(v));
  }
  return L;
}

/// The parts of a UniversalResult that are written to disk.
struct UniversalFile {
  std::size_t dimension = 0, vertex_count = 0, num_Q = 0, num_R = 0;
  LawrenceCoordinates polytope;
  std::vector<std::string> base_face_labels;
  std::vector<Scalar> base_hyperplane;
  bool base_face_verified = false;
  std::optional<Matrix<Scalar>> base_to_input;
  std::vector<ProvenanceEvent> provenance;
};

inline UniversalFile universal_file(const UniversalResult& r) {
  UniversalFile f{r.dimension, r.vertex_count, r.num_Q, r.num_R, r.polytope, r.base_face_labels,
                  r.base_hyperplane, r.base_face_verified, std::nullopt, r.provenance};
  if (r.base_to_input) f.base_to_input = r.base_to_input->matrix();
  return f;
}

inline Json to_json(const UniversalFile& f) {
  Json j = header("universal");
  j["dimension"] = f.dimension;
  j["vertex_count"] = f.vertex_count;
  j["num_Q"] = f.num_Q;
  j["num_R"] = f.num_R;
  j["base_face_verified"] = f.base_face_verified;
  j["base_face_labels"] = f.base_face_labels;
  j["base_hyperplane"] = point_json(f.base_hyperplane);
  j["base_to_input"] = f.base_to_input ? matrix_json(*f.base_to_input) : Json(nullptr);
  j["provenance"] = to_json(f.provenance);
  j["polytope"] = to_json(f.polytope);
  return j;
}

inline UniversalFile universal_from(const Json& j) {
  expect_kind(j, "universal");
  UniversalFile f;
  f.dimension = j.at("dimension").get<std::size_t>();
  f.vertex_count = j.at("vertex_count").get<std::size_t>();
  f.num_Q = j.at("num_Q").get<std::size_t>();
  f.num_R = j.at("num_R").get<std::size_t>();
  f.base_face_verified = j.at("base_face_verified").get<bool>();
  f.base_face_labels = j.at("base_face_labels").get<std::vector<std::string>>();
  f.base_hyperplane = point_from(j.at("base_hyperplane"));
  if (!j.at("base_to_input").is_null()) {
    Matrix<Scalar> m;
    for (const auto& row : j.at("base_to_input")) m.push_back(point_from(row));
    f.base_to_input = m;
  }
  f.provenance = provenance_from(j.at("provenance"));
  f.polytope = lawrence_from(j.at("polytope"));
  return f;
}

// ---------------------------------------------------------------------------
// Reports and manifests

inline Json enclosure_json(const DistanceEnclosure& e) {
  return Json{{"lower", e.lower.get_str()}, {"upper", e.upper.get_str()}};
}

/// Run manifest: enough to reproduce a run. Timing is opt-in so that
/// repeated runs stay byte-identical by default.
struct Manifest {
  std::string command;
  std::map<std::string, std::string> parameters;
  std::optional<std::uint64_t> seed;
  std::string field;
  std::vector<std::string> inputs, outputs;
  std::optional<double> seconds;
};

inline Json to_json(const Manifest& m) {
  Json j = header("manifest");
  j["command"] = m.command;
  Json p = Json::object();
  for (const auto& [k, v] : m.parameters) p[k] = v;
  j["parameters"] = p;
  j["seed"] = m.seed ? Json(std::to_string(*m.seed)) : Json(nullptr);
  j["field"] = m.field;
  j["inputs"] = m.inputs;
  j["outputs"] = m.outputs;
  j["timing"] = m.seconds ? Json(*m.seconds) : Json(nullptr);
  return j;
}

inline Manifest manifest_from(const Json& j) {
  expect_kind(j, "manifest");
  Manifest m;
  m.command = j.at("command").get<std::string>();
  m.parameters = j.at("parameters").get<std::map<std::string, std::string>>();
  if (!j.at("seed").is_null()) m.seed = std::stoull(j.at("seed").get<std::string>());
  m.field = j.at("field").get<std::string>();
  m.inputs = j.at("inputs").get<std::vector<std::string>>();
  m.outputs = j.at("outputs").get<std::vector<std::string>>();
  if (!j.at("timing").is_null()) m.seconds = j.at("timing").get<double>();
  return m;
}

// ---------------------------------------------------------------------------
// Files

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

/// Certificates are JSON; the line-based text form is accepted as well.
inline DerivationCertificate read_certificate(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return certificate_from(Json::parse(text));
  return parse_certificate(text);
}

}  // namespace projuniq::io

#endif  // PROJUNIQ_IO_JSON_IO_HPP
