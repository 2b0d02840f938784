#pragma once

#include "csf/curve.hpp"
#include "csf/flow.hpp"
#include "csf/geometry.hpp"
#include "csf/hull.hpp"

#include <optional>
#include <vector>

namespace csf {

/// Rank-2 orthogonal projection given by an orthonormal basis of its range.
class Projection {
  public:
    /// Throws std::invalid_argument unless e1, e2 are unit and orthogonal
    /// within 1e-12.
    Projection(Eigen::VectorXd e1, Eigen::VectorXd e2);

    static Projection xy(int dim = 3);

    int dim() const { return static_cast<int>(e1_.size()); }
    const Eigen::VectorXd& e1() const { return e1_; }
    const Eigen::VectorXd& e2() const { return e2_; }

    Eigen::Vector2d apply(const Eigen::Ref<const Eigen::VectorXd>& x) const { return {e1_.dot(x), e2_.dot(x)}; }
    std::vector<Eigen::Vector2d> apply(const DiscreteCurve& curve) const;

  private:
    Eigen::VectorXd e1_, e2_;
};

struct ConvexityResult {
    bool convex = false;
    /// max over vertices of the radial distance from the vertex to the hull
    /// boundary, seen from the hull centroid (length units)
    double max_defect = 0.0;
    std::size_t argmax_vertex = 0;
    bool planar_fallback = false;
};

/// 1e-6 * diameter.
double default_convexity_tolerance(const DiscreteCurve& curve);

/// Convexity of a space curve: every vertex lies on the boundary of the
/// convex hull of the vertices, measured through the Minkowski functional of
/// the hull recentred at its vertex centroid. Coplanar curves fall back to the
/// 2D hull in their plane.
ConvexityResult is_convex_space_curve(const DiscreteCurve& curve, double tol);
inline ConvexityResult is_convex_space_curve(const DiscreteCurve& curve) {
    return is_convex_space_curve(curve, default_convexity_tolerance(curve));
}

/// min over vertices of |X - x| - |<X - x, T>|. Positive values certify that
/// a planar curve is star-shaped with respect to x.
double phi_star(const DiscreteCurve& curve, const Eigen::VectorXd& x);
inline bool is_star_shaped(const DiscreteCurve& curve, const Eigen::VectorXd& x) { return phi_star(curve, x) > 0.0; }

/// Per-vertex Frenet data of the projected polyline and its relation to the
/// projected space-curve normal.
struct ProjectedFrame {
    std::vector<Eigen::Vector2d> tangent;       // unit tangent of the projected curve
    std::vector<std::optional<Eigen::Vector2d>> normal;
    std::vector<double> curvature;              // kappa_P
    std::vector<double> pt_norm;                // |P T|
    std::vector<unsigned char> regular;         // pt_norm > threshold and no edge reversal at the vertex
    std::vector<std::optional<double>> pn_dot_np;  // <P N, N_P> where kappa, kappa_P > floor

    std::size_t size() const { return curvature.size(); }
    double min_pt_norm() const;
};

inline constexpr double kDefaultRegularity = 1e-3;

ProjectedFrame projected_frame(const DiscreteCurve& curve, const FrenetData& frenet_data, const Projection& projection,
                               double kappa_floor, double regularity = kDefaultRegularity);
ProjectedFrame projected_frame(const DiscreteCurve& curve, const Projection& projection,
                               double regularity = kDefaultRegularity);

struct ConvexityDefectSample {
    double t = 0.0;
    double phi_max = 0.0;       // max distance from a projected vertex to the hull boundary
    std::size_t argmax_vertex = 0;
    bool regular = true;
    double min_pt_norm = 0.0;
    std::size_t reversals = 0;  // vertices where consecutive projected edges point backwards
};

/// Max over vertices of the distance from the projected vertex to the
/// boundary of the convex hull of the projection. Zero iff the projected
/// polygon is convex. Throws DegenerateGeometry(Collinear) for a degenerate
/// projection.
ConvexityDefectSample convexity_defect(const DiscreteCurve& curve, const Projection& projection,
                                       double regularity = kDefaultRegularity);

/// Columns phi_max, proj_regular_min (min |PT|, 0 when a projected edge reverses).
class ProjectedConvexityMonitor : public Monitor {
  public:
    explicit ProjectedConvexityMonitor(Projection projection, double regularity = kDefaultRegularity)
        : projection_(std::move(projection)), regularity_(regularity) {}
    std::vector<std::string> columns() const override { return {"phi_max", "proj_regular_min"}; }
    std::vector<double> sample(const FlowState& state) const override;

  private:
    Projection projection_;
    double regularity_;
};

/// Column convex_defect_3d.
class SpaceConvexityMonitor : public Monitor {
  public:
    std::vector<std::string> columns() const override { return {"convex_defect_3d"}; }
    std::vector<double> sample(const FlowState& state) const override;
};

}  // namespace csf
