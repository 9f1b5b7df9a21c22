// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <vector>

namespace specpencil {

using Polygon = std::vector<Eigen::Vector2d>;

/// Signed area (positive for counterclockwise loops).
double polygon_signed_area(const Polygon& poly);

Eigen::Vector2d polygon_centroid(const Polygon& poly);

/// Maximum pairwise vertex distance.
double polygon_diameter(const Polygon& poly);

/// Clips a polygon against the half-plane {x : normal . (x - point) <= 0}.
/// May return fewer than three vertices when the intersection degenerates.
Polygon clip_half_plane(const Polygon& poly, const Eigen::Vector2d& point,
                        const Eigen::Vector2d& normal);

/// True when no two non-adjacent edges intersect and no edge degenerates.
bool polygon_is_simple(const Polygon& poly);

/// Radius of the largest ball contained in the polygon's kernel (the set
/// of points seeing the whole polygon), found by bisection on inward edge
/// offsets. Zero when the polygon is not star-shaped with respect to a
/// ball. Exactly the Chebyshev radius for convex polygons.
double kernel_ball_radius(const Polygon& poly);

}  // namespace specpencil
