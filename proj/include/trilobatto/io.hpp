#pragma once

// Rule files (JSON), CSV export and SVG node plots.
//
// Rule schema, numbers as 17-significant-digit decimal strings:
//   { "weight": {"alpha","beta","gamma"}, "precision",
//     "interior": [{"x","y","w"}], "edge_y0": [{"t","w"}], "edge_x0": [...],
//     "edge_diag": [...], "corners": {"mu0","mu1","mu2"},
//     "meta": {"conforming","tags","seed","tolerance"} }   (meta optional)
// Interior-rule schema:
//   { "weight": {...}, "degree", "nodes": [{"x","y","w"}] }

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <system_error>

#include <json.hpp>

#include "trilobatto/error.hpp"
#include "trilobatto/interior.hpp"
#include "trilobatto/rule.hpp"

namespace trilobatto::io {

using Json = nlohmann::ordered_json;

/// Shortest "%.17g"-equivalent text; parses back to the same double.
inline std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return {buf, res.ptr};
}

inline std::string format_fixed(double v, int digits) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, digits);
  return {buf, res.ptr};
}

namespace detail {

[[noreturn]] inline void bad(const std::string& what) {
  fail(ErrorKind::parse, "malformed rule file: " + what);
}

inline double number(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing \"") + key + "\"");
  const Json& v = j.at(key);
  if (v.is_number()) return v.get<double>();
  if (!v.is_string()) bad(std::string("\"") + key + "\" is not a number");
  const std::string s = v.get<std::string>();
  double out = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    bad(std::string("\"") + key + "\" is not a decimal number: " + s);
  }
  return out;
}

inline int integer(const Json& j, const char* key) {
  const double v = number(j, key);
  if (v != std::floor(v) || v < 0 || v > 1e6) bad(std::string("\"") + key + "\" is not a count");
  return static_cast<int>(v);
}

inline const Json& array(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    bad(std::string("\"") + key + "\" must be an array");
  }
  return j.at(key);
}

inline Json weight_json(const JacobiExponents& w) {
  return Json{{"alpha", format_number(w.alpha)},
              {"beta", format_number(w.beta)},
              {"gamma", format_number(w.gamma)}};
}

inline JacobiExponents weight_from(const Json& j) {
  if (!j.contains("weight")) bad("missing \"weight\"");
  const Json& w = j.at("weight");
  JacobiExponents out{number(w, "alpha"), number(w, "beta"), number(w, "gamma")};
  if (!out.valid()) bad("Jacobi exponents must exceed -1");
  return out;
}

}  // namespace detail

inline Json to_json(const TriangleRule& r) {
  Json j;
  j["weight"] = detail::weight_json(r.weight);
  j["precision"] = r.precision;
  Json interior = Json::array();
  for (const auto& p : r.interior) {
    interior.push_back({{"x", format_number(p.point.x)},
                        {"y", format_number(p.point.y)},
                        {"w", format_number(p.weight)}});
  }
  j["interior"] = std::move(interior);
  for (const EdgeLabel e : all_edges) {
    Json nodes = Json::array();
    for (const auto& n : r.edge(e)) {
      nodes.push_back({{"t", format_number(n.t)}, {"w", format_number(n.weight)}});
    }
    j[std::string(to_string(e))] = std::move(nodes);
  }
  j["corners"] = {{"mu0", format_number(r.corners[0])},
                  {"mu1", format_number(r.corners[1])},
                  {"mu2", format_number(r.corners[2])}};
  const RuleMeta& m = r.meta;
  if (m.conforming || !m.tags.empty() || m.seed || m.tolerance) {
    Json meta = Json::object();
    if (m.conforming) meta["conforming"] = *m.conforming;
    meta["tags"] = m.tags;
    if (m.seed) meta["seed"] = *m.seed;
    if (m.tolerance) meta["tolerance"] = format_number(*m.tolerance);
    j["meta"] = std::move(meta);
  }
  return j;
}

inline TriangleRule rule_from_json(const Json& j) {
  if (!j.is_object()) detail::bad("top level must be an object");
  TriangleRule r;
  r.weight = detail::weight_from(j);
  r.precision = detail::integer(j, "precision");
  for (const auto& p : detail::array(j, "interior")) {
    r.interior.push_back({{detail::number(p, "x"), detail::number(p, "y")},
                          detail::number(p, "w")});
  }
  for (const EdgeLabel e : all_edges) {
    const std::string key(to_string(e));
    for (const auto& n : detail::array(j, key.c_str())) {
      r.edge(e).push_back({detail::number(n, "t"), detail::number(n, "w")});
    }
  }
  if (!j.contains("corners")) detail::bad("missing \"corners\"");
  const Json& c = j.at("corners");
  r.corners = {detail::number(c, "mu0"), detail::number(c, "mu1"), detail::number(c, "mu2")};
  if (j.contains("meta")) {
    const Json& m = j.at("meta");
    if (!m.is_object()) detail::bad("\"meta\" must be an object");
    if (m.contains("conforming")) {
      if (!m.at("conforming").is_boolean()) detail::bad("\"conforming\" must be boolean");
      r.meta.conforming = m.at("conforming").get<bool>();
    }
    if (m.contains("tags")) {
      for (const auto& t : detail::array(m, "tags")) {
        if (!t.is_string()) detail::bad("tags must be strings");
        r.meta.tags.push_back(t.get<std::string>());
      }
    }
    if (m.contains("seed")) {
      if (!m.at("seed").is_number_unsigned()) detail::bad("\"seed\" must be unsigned");
      r.meta.seed = m.at("seed").get<std::uint64_t>();
    }
    if (m.contains("tolerance")) r.meta.tolerance = detail::number(m, "tolerance");
  }
  return r;
}

inline Json to_json(const InteriorRule& r) {
  Json nodes = Json::array();
  for (std::size_t k = 0; k < r.size(); ++k) {
    nodes.push_back({{"x", format_number(r.nodes[k].x)},
                     {"y", format_number(r.nodes[k].y)},
                     {"w", format_number(r.weights[k])}});
  }
  return Json{{"weight", detail::weight_json(r.weight)}, {"degree", r.degree},
              {"nodes", std::move(nodes)}};
}

inline InteriorRule interior_rule_from_json(const Json& j) {
  if (!j.is_object()) detail::bad("top level must be an object");
  InteriorRule r;
  r.weight = detail::weight_from(j);
  r.degree = detail::integer(j, "degree");
  for (const auto& p : detail::array(j, "nodes")) {
    r.nodes.push_back({detail::number(p, "x"), detail::number(p, "y")});
    r.weights.push_back(detail::number(p, "w"));
  }
  return r;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(ErrorKind::parse, std::string("invalid JSON: ") + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::parse, "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::parameter, "cannot write " + path);
  out << text;
  if (!out) fail(ErrorKind::parameter, "failed writing " + path);
}

inline TriangleRule read_rule(const std::string& path) {
  try {
    return rule_from_json(parse(read_file(path)));
  } catch (const Json::exception& e) {
    fail(ErrorKind::parse, std::string("malformed rule file: ") + e.what());
  }
}

inline InteriorRule read_interior_rule(const std::string& path) {
  try {
    return interior_rule_from_json(parse(read_file(path)));
  } catch (const Json::exception& e) {
    fail(ErrorKind::parse, std::string("malformed interior rule file: ") + e.what());
  }
}

/// class,x,y,weight per node; class is interior, edge_y0, edge_x0,
/// edge_diag or corner.
inline std::string to_csv(const TriangleRule& r) {
  std::ostringstream os;
  os << "class,x,y,weight\n";
  for (const auto& p : r.interior) {
    os << "interior," << format_number(p.point.x) << ',' << format_number(p.point.y) << ','
       << format_number(p.weight) << '\n';
  }
  for (const EdgeLabel e : all_edges) {
    for (const auto& n : r.edge(e)) {
      const Point2 p = edge_point(e, n.t);
      os << to_string(e) << ',' << format_number(p.x) << ',' << format_number(p.y) << ','
         << format_number(n.weight) << '\n';
    }
  }
  if (r.corner_count() > 0) {
    for (std::size_t c = 0; c < 3; ++c) {
      os << "corner," << format_number(corner_points[c].x) << ','
         << format_number(corner_points[c].y) << ',' << format_number(r.corners[c]) << '\n';
    }
  }
  return os.str();
}

/// 512x512 SVG; the triangle (0,0),(1,0),(0,1) is drawn y-up. Interior
/// nodes are filled disks, edge nodes open disks, corners squares.
inline std::string to_svg(const TriangleRule& r) {
  constexpr double size = 512.0;
  constexpr double margin = 32.0;
  constexpr double span = size - 2.0 * margin;
  const auto px = [&](double x) { return format_fixed(margin + x * span, 2); };
  const auto py = [&](double y) { return format_fixed(size - margin - y * span, 2); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"512\" height=\"512\" "
        "viewBox=\"0 0 512 512\">\n";
  os << "  <rect width=\"512\" height=\"512\" fill=\"white\"/>\n";
  os << "  <polygon points=\"" << px(0) << ',' << py(0) << ' ' << px(1) << ',' << py(0) << ' '
     << px(0) << ',' << py(1) << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  for (const auto& p : r.interior) {
    os << "  <circle class=\"interior\" cx=\"" << px(p.point.x) << "\" cy=\"" << py(p.point.y)
       << "\" r=\"6\" fill=\"black\"/>\n";
  }
  for (const EdgeLabel e : all_edges) {
    for (const auto& n : r.edge(e)) {
      const Point2 p = edge_point(e, n.t);
      os << "  <circle class=\"" << to_string(e) << "\" cx=\"" << px(p.x) << "\" cy=\""
         << py(p.y) << "\" r=\"6\" fill=\"white\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
    }
  }
  if (r.corner_count() > 0) {
    for (const Point2 c : corner_points) {
      os << "  <rect class=\"corner\" x=\"" << format_fixed(margin + c.x * span - 6.0, 2)
         << "\" y=\"" << format_fixed(size - margin - c.y * span - 6.0, 2)
         << "\" width=\"12\" height=\"12\" fill=\"black\"/>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace trilobatto::io
