// SPDX-License-Identifier: Apache-2.0

#include "specpencil/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "specpencil/errors.hpp"

namespace specpencil {

namespace {

GaussRule compute_gauss_legendre(int n) {
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    // Newton iteration from the Chebyshev estimate of the i-th root.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] =
        2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

std::vector<QuadratureNode> triangle_quadrature(const Eigen::Vector2d& a,
                                                const Eigen::Vector2d& b,
                                                const Eigen::Vector2d& c,
                                                int degree) {
  // Duffy map (u,v) in [0,1]^2 -> a + u(b-a) + uv(c-b): a degree-d
  // integrand becomes degree d+1 in u and d in v, with Jacobian 2|T| u.
  const int nu = (degree + 3) / 2;
  const int nv = (degree + 2) / 2;
  const GaussRule& gu = gauss_legendre(nu);
  const GaussRule& gv = gauss_legendre(nv);
  const double area2 = (b.x() - a.x()) * (c.y() - a.y()) -
                       (c.x() - a.x()) * (b.y() - a.y());
  std::vector<QuadratureNode> nodes;
  nodes.reserve(static_cast<std::size_t>(nu) * nv);
  for (int i = 0; i < nu; ++i) {
    const double u = 0.5 * (gu.nodes[static_cast<std::size_t>(i)] + 1.0);
    const double wu = 0.5 * gu.weights[static_cast<std::size_t>(i)];
    for (int j = 0; j < nv; ++j) {
      const double v = 0.5 * (gv.nodes[static_cast<std::size_t>(j)] + 1.0);
      const double wv = 0.5 * gv.weights[static_cast<std::size_t>(j)];
      QuadratureNode node;
      node.x = a + u * (b - a) + u * v * (c - b);
      node.w = wu * wv * area2 * u;
      nodes.push_back(node);
    }
  }
  return nodes;
}

std::vector<QuadratureNode> polygon_quadrature(const Polygon& poly,
                                               int degree) {
  const Eigen::Vector2d center = polygon_centroid(poly);
  const double area = polygon_signed_area(poly);
  std::vector<QuadratureNode> nodes;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Eigen::Vector2d& p = poly[i];
    const Eigen::Vector2d& q = poly[(i + 1) % poly.size()];
    const double tri2 = (p.x() - center.x()) * (q.y() - center.y()) -
                        (q.x() - center.x()) * (p.y() - center.y());
    if (tri2 <= 1e-14 * std::abs(area))
      throw NonStarShapedError(
          "polygon_quadrature: centroid fan produces a flipped triangle");
    auto tri = triangle_quadrature(center, p, q, degree);
    nodes.insert(nodes.end(), tri.begin(), tri.end());
  }
  return nodes;
}

}  // namespace specpencil
