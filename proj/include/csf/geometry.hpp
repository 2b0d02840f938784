#pragma once

#include "csf/curve.hpp"

#include <optional>
#include <vector>

namespace csf {

/// Per-vertex discrete Frenet data.
///
/// curvature_vector (the discrete d^2X/ds^2) is the primary quantity and is
/// defined everywhere. normal/binormal/torsion are derived from it and are
/// absent where the curvature falls below the requested floor.
struct FrenetData {
    PointMatrix tangent;
    PointMatrix curvature_vector;
    Vector curvature;
    PointMatrix normal;                 // rows valid only where has_normal
    std::vector<unsigned char> has_normal;
    PointMatrix binormal;               // dim 3 only; rows valid where has_normal
    std::vector<std::optional<double>> torsion;
    Vector arclength_weights;           // dual edge lengths (a_i + b_i) / 2
    double total_length = 0.0;

    std::size_t size() const noexcept { return static_cast<std::size_t>(tangent.rows()); }
    std::optional<Vector> normal_at(std::size_t i) const;
    std::optional<Vector> binormal_at(std::size_t i) const;
    double max_curvature() const { return curvature.size() ? curvature.maxCoeff() : 0.0; }
};

/// Discrete d^k X / ds^k, k in {1, 2}, from the nonuniform three-point
/// stencils that are exact on quadratics in the chord parameter. For vertex
/// i with backward edge a and forward edge b:
///   first:  (a^2 (X+ - X) + b^2 (X - X-)) / (a b (a + b))
///   second: 2 (a X+ - (a + b) X + b X-) / (a b (a + b))
PointMatrix arclength_derivative(const DiscreteCurve& curve, int order);

/// 1e-8 / scale, with the bounding-box diagonal as the scale.
double default_kappa_floor(const DiscreteCurve& curve);

FrenetData frenet(const DiscreteCurve& curve, double kappa_floor);
inline FrenetData frenet(const DiscreteCurve& curve) { return frenet(curve, default_kappa_floor(curve)); }

/// n vertices on the input polyline, first vertex anchored at the input's
/// first vertex, with all n edges of the output polygon of equal length.
/// Tangential redistribution only: the output lies on the input polyline.
DiscreteCurve resample_uniform(const DiscreteCurve& curve, std::size_t n);

/// Cumulative polyline arclength at each vertex (0 at vertex 0).
Vector cumulative_arclength(const DiscreteCurve& curve);

}  // namespace csf
