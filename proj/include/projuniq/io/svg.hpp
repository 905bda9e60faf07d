#ifndef PROJUNIQ_IO_SVG_HPP
#define PROJUNIQ_IO_SVG_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "projuniq/derive.hpp"
#include "projuniq/io/json_io.hpp"

namespace projuniq::io {

struct SvgOptions {
  int precision = 3;               // decimals in coordinates
  std::size_t axis_x = 0, axis_y = 1;  // coordinate plane for non-planar input
  bool allow_projection = false;   // required when ambient_dim != 2
  Rational size = 480;             // drawing extent in px
};

namespace detail {

/// Fixed-point decimal of q rounded half away from zero; exact, no doubles.
inline std::string fixed(const Rational& q, int precision) {
  Integer scale = 1;
  for (int i = 0; i < precision; ++i) scale *= 10;
  Rational s = abs(q) * scale + Rational(1, 2);
  Integer n = s.get_num() / s.get_den();
  std::string digits = n.get_str();
  if (precision > 0) {
    if (digits.size() <= static_cast<std::size_t>(precision))
      digits.insert(0, static_cast<std::size_t>(precision) + 1 - digits.size(), '0');
    digits.insert(digits.size() - static_cast<std::size_t>(precision), ".");
  }
  return (sgn(q) < 0 && n != 0 ? "-" : "") + digits;
}

/// Display value of a scalar (field elements via a tight rational enclosure).
inline Rational display(const Scalar& s) {
  if (s.is_rational()) return s.rational();
  auto [lo, hi] = s.enclosure(64);
  return Rational((lo + hi) / 2);
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

/// Fill colors by role, drawn in this order (later on top).
inline const std::vector<std::pair<std::string, std::string>>& role_colors() {
  static const std::vector<std::pair<std::string, std::string>> c{
      {"grid", "red"}, {"aux", "yellow"}, {"input", "blue"}, {"output", "green"}};
  return c;
}

/// Points as circles coloured by role; other points grey. Join lines of the
/// certificate are drawn as segments between their two defining points.
inline std::string render_svg(const PointConfiguration& c, const Roles& roles,
                              const std::optional<DerivationCertificate>& cert = std::nullopt,
                              const SvgOptions& opt = {}) {
  if (c.ambient_dim() != 2 && !c.empty() && !opt.allow_projection)
    throw std::invalid_argument("render: configuration is not planar; select a coordinate plane");
  if (!c.empty() && std::max(opt.axis_x, opt.axis_y) >= c.ambient_dim())
    throw std::invalid_argument("render: plane selection out of range");

  std::map<std::string, std::pair<Rational, Rational>> xy;
  for (const auto& [l, p] : c.points()) xy[l] = {detail::display(p[opt.axis_x]), detail::display(p[opt.axis_y])};

  std::ostringstream os;
  if (xy.empty()) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"0\" height=\"0\" viewBox=\"0 0 0 0\"></svg>\n";
    return os.str();
  }
  Rational x0 = xy.begin()->second.first, x1 = x0, y0 = xy.begin()->second.second, y1 = y0;
  for (const auto& [l, q] : xy) {
    x0 = std::min(x0, q.first);
    x1 = std::max(x1, q.first);
    y0 = std::min(y0, q.second);
    y1 = std::max(y1, q.second);
  }
  Rational span = std::max(Rational(x1 - x0), Rational(y1 - y0));
  if (span == 0) span = 1;
  const Rational scale = opt.size / span, margin = 20;
  auto px = [&](const Rational& x) { return detail::fixed(margin + (x - x0) * scale, opt.precision); };
  auto py = [&](const Rational& y) { return detail::fixed(margin + (y1 - y) * scale, opt.precision); };
  const std::string W = detail::fixed(2 * margin + (x1 - x0) * scale, opt.precision);
  const std::string H = detail::fixed(2 * margin + (y1 - y0) * scale, opt.precision);

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
     << " " << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  if (cert) {
    std::set<std::pair<std::string, std::string>> seen;
    os << "<g stroke=\"#888\" stroke-width=\"0.8\">\n";
    for (const auto& s : cert->steps)
      for (const auto& j : s.joins) {
        if (j.size() != 2 || !c.contains(j[0]) || !c.contains(j[1])) continue;
        auto a = c.resolve(j[0]), b = c.resolve(j[1]);
        if (a == b) continue;
        if (b < a) std::swap(a, b);
        if (!seen.insert({a, b}).second) continue;
        os << "<line x1=\"" << px(xy[a].first) << "\" y1=\"" << py(xy[a].second) << "\" x2=\"" << px(xy[b].first)
           << "\" y2=\"" << py(xy[b].second) << "\"/>\n";
      }
    os << "</g>\n";
  }

  std::set<std::string> with_role;
  for (const auto& [r, ls] : roles)
    for (const auto& l : ls)
      if (c.contains(l)) with_role.insert(c.resolve(l));
  for (const auto& [l, q] : xy)
    if (!with_role.count(l))
      os << "<circle cx=\"" << px(q.first) << "\" cy=\"" << py(q.second) << "\" r=\"3\" fill=\"grey\"><title>"
         << detail::escape(l) << "</title></circle>\n";
  // One marker per role label; coincident markers shrink so every role stays visible.
  int layer = 0;
  for (const auto& [role, color] : role_colors()) {
    auto it = roles.find(role);
    if (it == roles.end()) continue;
    const std::string r = detail::fixed(Rational(6 - layer, 1), 1);
    for (const auto& l : it->second) {
      if (!c.contains(l)) throw std::invalid_argument("render: role label not in configuration: " + l);
      const auto& q = xy.at(c.resolve(l));
      os << "<circle cx=\"" << px(q.first) << "\" cy=\"" << py(q.second) << "\" r=\"" << r << "\" fill=\"" << color
         << "\" stroke=\"black\" stroke-width=\"0.5\"><title>" << detail::escape(l) << "</title></circle>\n";
    }
    ++layer;
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace projuniq::io

#endif  // PROJUNIQ_IO_SVG_HPP
