#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "eegcloak/errors.hpp"

namespace eegcloak {

using Point2 = std::array<double, 2>;

struct Triangle {
  int a, b, c;
};

namespace detail {

inline double orient2d(const Point2& p, const Point2& q, const Point2& r) {
  return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]);
}

// > 0 when d lies inside the circumcircle of ccw triangle (a, b, c)
inline double in_circle(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
  const double ax = a[0] - d[0], ay = a[1] - d[1];
  const double bx = b[0] - d[0], by = b[1] - d[1];
  const double cx = c[0] - d[0], cy = c[1] - d[1];
  const double a2 = ax * ax + ay * ay;
  const double b2 = bx * bx + by * by;
  const double c2 = cx * cx + cy * cy;
  return ax * (by * c2 - b2 * cy) - ay * (bx * c2 - b2 * cx) + a2 * (bx * cy - by * cx);
}

}  // namespace detail

// Bowyer-Watson Delaunay triangulation. Throws DegenerateSites on duplicate
// points or when every site is collinear.
inline std::vector<Triangle> delaunay_triangulate(const std::vector<Point2>& sites) {
  const int n = static_cast<int>(sites.size());
  if (n < 3) throw DegenerateSites("need at least 3 sites");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double dx = sites[i][0] - sites[j][0], dy = sites[i][1] - sites[j][1];
      if (dx * dx + dy * dy < 1e-24) throw DegenerateSites("duplicate site coordinates");
    }

  double xmin = sites[0][0], xmax = xmin, ymin = sites[0][1], ymax = ymin;
  for (const auto& p : sites) {
    xmin = std::min(xmin, p[0]);
    xmax = std::max(xmax, p[0]);
    ymin = std::min(ymin, p[1]);
    ymax = std::max(ymax, p[1]);
  }
  const double span = std::max({xmax - xmin, ymax - ymin, 1.0}) * 64.0;
  const double cx = (xmin + xmax) / 2.0, cy = (ymin + ymax) / 2.0;

  std::vector<Point2> pts = sites;
  pts.push_back({cx - span, cy - span});        // super-triangle vertices n, n+1, n+2
  pts.push_back({cx + span, cy - span});
  pts.push_back({cx, cy + span});

  std::vector<Triangle> tris{{n, n + 1, n + 2}};
  for (int i = 0; i < n; ++i) {
    std::vector<std::array<int, 2>> hole;  // boundary edges of the removed cavity
    std::vector<Triangle> keep;
    for (const auto& t : tris) {
      Point2 a = pts[static_cast<std::size_t>(t.a)], b = pts[static_cast<std::size_t>(t.b)],
             c = pts[static_cast<std::size_t>(t.c)];
      if (detail::orient2d(a, b, c) < 0) std::swap(b, c);
      const bool bad = detail::in_circle(a, b, c, pts[static_cast<std::size_t>(i)]) > 0;
      if (!bad) {
        keep.push_back(t);
        continue;
      }
      const std::array<std::array<int, 2>, 3> edges{{{t.a, t.b}, {t.b, t.c}, {t.c, t.a}}};
      for (auto e : edges) {
        auto rev = std::array<int, 2>{e[1], e[0]};
        auto it = std::find_if(hole.begin(), hole.end(), [&](const std::array<int, 2>& h) {
          return (h == e) || (h == rev);
        });
        if (it != hole.end())
          hole.erase(it);  // interior edge, shared by two removed triangles
        else
          hole.push_back(e);
      }
    }
    for (const auto& e : hole) keep.push_back({e[0], e[1], i});
    tris = std::move(keep);
  }

  std::vector<Triangle> out;
  for (const auto& t : tris)
    if (t.a < n && t.b < n && t.c < n) out.push_back(t);
  if (out.empty()) throw DegenerateSites("collinear sites, no triangulation");
  return out;
}

}  // namespace eegcloak
