#pragma once

#include "csf/curve.hpp"

#include <array>
#include <span>
#include <vector>

namespace csf {

/// Counterclockwise convex polygon. `indices` refer to the input points.
struct Polygon2 {
    std::vector<Eigen::Vector2d> vertices;
    std::vector<std::size_t> indices;
};

/// Monotone-chain hull. Drops vertices within 1e-12 * diameter of the line
/// through their neighbours. Throws DegenerateGeometry(Collinear) when fewer
/// than three hull vertices remain.
Polygon2 hull_2d(std::span<const Eigen::Vector2d> points);

/// Closed triangulated hull surface with outward unit normals; face k is the
/// plane normals[k] . y = offsets[k] and `faces` index the input points.
struct Hull3 {
    std::vector<std::array<std::size_t, 3>> faces;
    std::vector<Eigen::Vector3d> normals;
    std::vector<double> offsets;

    /// Sorted, unique indices of the input points used as hull vertices.
    std::vector<std::size_t> vertex_indices() const;
};

/// Incremental hull. Points within 1e-12 * scale of the current hull are
/// absorbed without becoming vertices. Throws DegenerateGeometry(Coplanar)
/// (or Collinear) when the input does not span three dimensions.
Hull3 hull_3d(std::span<const Eigen::Vector3d> points);

/// Convex body in half-space form {y : n_k . y <= d_k}, in 2 or 3 dimensions.
struct ConvexBody {
    std::vector<Eigen::VectorXd> normals;
    std::vector<double> offsets;

    static ConvexBody from(const Hull3& hull);
    static ConvexBody from(const Polygon2& polygon);

    int dim() const { return normals.empty() ? 0 : static_cast<int>(normals.front().size()); }
    /// Same body with the origin moved to `origin`.
    ConvexBody translated(const Eigen::VectorXd& origin) const;
    bool contains(const Eigen::VectorXd& x, double slack = 0.0) const;
};

/// inf{lambda > 0 : x / lambda in K}. For a body containing the origin in its
/// interior this is max_k (n_k . x) / d_k, clamped at 0. Throws
/// DegenerateGeometry(OriginNotInterior) if some d_k <= 0.
double minkowski_functional(const ConvexBody& body, const Eigen::VectorXd& x);

}  // namespace csf
