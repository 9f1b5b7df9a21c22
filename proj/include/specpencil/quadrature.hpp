// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <vector>

#include "specpencil/geometry.hpp"

namespace specpencil {

struct QuadratureNode {
  Eigen::Vector2d x;
  double w = 0.0;
};

/// Gauss-Legendre nodes and weights on [-1, 1], exact for degree 2n - 1.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int n);

/// Quadrature on a triangle exact for polynomials of the given total
/// degree (tensor Gauss rule under the Duffy map).
std::vector<QuadratureNode> triangle_quadrature(const Eigen::Vector2d& a,
                                                const Eigen::Vector2d& b,
                                                const Eigen::Vector2d& c,
                                                int degree);

/// Quadrature on a polygon exact for the given degree, obtained by fanning
/// triangles from the centroid. Throws NonStarShapedError when a fan
/// triangle is inverted (centroid outside the kernel).
std::vector<QuadratureNode> polygon_quadrature(const Polygon& poly,
                                               int degree);

}  // namespace specpencil
