// SPDX-License-Identifier: Apache-2.0

#include "specpencil/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace specpencil {

double polygon_signed_area(const Polygon& poly) {
  double acc = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % n];
    acc += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * acc;
}

Eigen::Vector2d polygon_centroid(const Polygon& poly) {
  double cx = 0.0, cy = 0.0, a = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % n];
    const double cross = p.x() * q.y() - q.x() * p.y();
    a += cross;
    cx += (p.x() + q.x()) * cross;
    cy += (p.y() + q.y()) * cross;
  }
  a *= 0.5;
  return {cx / (6.0 * a), cy / (6.0 * a)};
}

double polygon_diameter(const Polygon& poly) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i)
    for (std::size_t j = i + 1; j < poly.size(); ++j)
      d2 = std::max(d2, (poly[i] - poly[j]).squaredNorm());
  return std::sqrt(d2);
}

Polygon clip_half_plane(const Polygon& poly, const Eigen::Vector2d& point,
                        const Eigen::Vector2d& normal) {
  Polygon out;
  const std::size_t n = poly.size();
  out.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector2d& a = poly[i];
    const Eigen::Vector2d& b = poly[(i + 1) % n];
    const double da = normal.dot(a - point);
    const double db = normal.dot(b - point);
    if (da <= 0.0) out.push_back(a);
    if ((da < 0.0 && db > 0.0) || (da > 0.0 && db <= 0.0)) {
      const double t = da / (da - db);
      out.push_back(a + t * (b - a));
    }
  }
  return out;
}

namespace {

bool segments_intersect(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                        const Eigen::Vector2d& c, const Eigen::Vector2d& d) {
  auto orient = [](const Eigen::Vector2d& p, const Eigen::Vector2d& q,
                   const Eigen::Vector2d& r) {
    const double v = (q.x() - p.x()) * (r.y() - p.y()) -
                     (q.y() - p.y()) * (r.x() - p.x());
    return (v > 0.0) - (v < 0.0);
  };
  const int o1 = orient(a, b, c);
  const int o2 = orient(a, b, d);
  const int o3 = orient(c, d, a);
  const int o4 = orient(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  auto on_segment = [](const Eigen::Vector2d& p, const Eigen::Vector2d& q,
                       const Eigen::Vector2d& r) {
    return std::min(p.x(), q.x()) <= r.x() && r.x() <= std::max(p.x(), q.x()) &&
           std::min(p.y(), q.y()) <= r.y() && r.y() <= std::max(p.y(), q.y());
  };
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

}  // namespace

bool polygon_is_simple(const Polygon& poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i)
    if ((poly[i] - poly[(i + 1) % n]).norm() == 0.0) return false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      // Skip adjacent edges (they share a vertex).
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_intersect(poly[i], poly[(i + 1) % n], poly[j],
                             poly[(j + 1) % n]))
        return false;
    }
  }
  return true;
}

double kernel_ball_radius(const Polygon& poly) {
  const std::size_t n = poly.size();
  std::vector<Eigen::Vector2d> points(n), normals(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector2d t = poly[(i + 1) % n] - poly[i];
    const double len = t.norm();
    if (len == 0.0) return 0.0;
    points[i] = poly[i];
    normals[i] = Eigen::Vector2d(t.y(), -t.x()) / len;  // outward for CCW
  }
  auto feasible = [&](double r) {
    Polygon region = poly;
    for (std::size_t i = 0; i < n; ++i) {
      region = clip_half_plane(region, points[i] - r * normals[i], normals[i]);
      if (region.empty()) return false;
    }
    return true;
  };
  double lo = 0.0;
  double hi = 0.5 * polygon_diameter(poly);
  if (!feasible(0.0)) return 0.0;
  for (int iter = 0; iter < 60; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace specpencil
