#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cachecast/rng.hpp"

namespace cachecast {

struct Point {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point&) const = default;
};

inline double dist2(const Point& a, const Point& b) {
  const double dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}

inline bool within(const Point& a, const Point& b, double radius) {
  return dist2(a, b) <= radius * radius;  // closed ball
}

// One spatial instance: node positions plus the radii and capacities that
// interpret them.
struct Layout {
  double region_radius_m = 0.0;
  double a_sig_m = 0.0;
  double a_cell_m = 0.0;
  double a_interf_m = 0.0;
  double c_front_bps = 0.0;
  double c_access_bps = 0.0;
  std::vector<Point> helpers;
  std::vector<Point> users;

  bool operator==(const Layout&) const = default;
};

// Homogeneous Poisson process on a disk of radius_m meters with intensity
// per square kilometer. Count then placement, both from the given stream.
inline std::vector<Point> sample_ppp(double intensity_per_km2, double radius_m, Rng& rng) {
  if (intensity_per_km2 < 0.0 || radius_m < 0.0) {
    throw std::invalid_argument("sample_ppp: negative intensity or radius");
  }
  const double radius_km = radius_m / 1000.0;
  const double mean = intensity_per_km2 * std::numbers::pi * radius_km * radius_km;
  const int n = rng.poisson(mean);
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double r = radius_m * std::sqrt(rng.uniform());
    const double theta = 2.0 * std::numbers::pi * rng.uniform();
    pts.push_back({r * std::cos(theta), r * std::sin(theta)});
  }
  return pts;
}

namespace detail {

inline void append_fixed6(std::string& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  out += buf;
}

inline void append_points(std::string& out, const std::vector<Point>& pts) {
  out += "[";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) out += ", ";
    out += "[";
    append_fixed6(out, pts[i].x);
    out += ", ";
    append_fixed6(out, pts[i].y);
    out += "]";
  }
  out += "]";
}

}  // namespace detail

// JSON text with every number rendered to six fractional digits, so that
// save -> load -> save is byte-identical.
inline std::string layout_to_json(const Layout& l) {
  std::string s = "{\n";
  auto field = [&s](const char* name, double v, bool comma = true) {
    s += "  \"";
    s += name;
    s += "\": ";
    detail::append_fixed6(s, v);
    if (comma) s += ",";
    s += "\n";
  };
  field("region_radius_m", l.region_radius_m);
  field("a_sig_m", l.a_sig_m);
  field("a_cell_m", l.a_cell_m);
  field("a_interf_m", l.a_interf_m);
  field("c_front_bps", l.c_front_bps);
  field("c_access_bps", l.c_access_bps);
  s += "  \"helpers\": ";
  detail::append_points(s, l.helpers);
  s += ",\n  \"users\": ";
  detail::append_points(s, l.users);
  s += "\n}\n";
  return s;
}

inline Layout layout_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Layout l;
  l.region_radius_m = j.at("region_radius_m").get<double>();
  l.a_sig_m = j.at("a_sig_m").get<double>();
  l.a_cell_m = j.at("a_cell_m").get<double>();
  l.a_interf_m = j.at("a_interf_m").get<double>();
  l.c_front_bps = j.at("c_front_bps").get<double>();
  l.c_access_bps = j.at("c_access_bps").get<double>();
  for (const auto& p : j.at("helpers")) {
    l.helpers.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  }
  for (const auto& p : j.at("users")) {
    l.users.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  }
  return l;
}

inline void save_layout(const Layout& l, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("save_layout: cannot open " + path);
  f << layout_to_json(l);
}

inline Layout load_layout(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("load_layout: cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return layout_from_json(ss.str());
}

}  // namespace cachecast
