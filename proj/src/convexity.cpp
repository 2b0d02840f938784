#include "csf/convexity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace csf {

Projection::Projection(Eigen::VectorXd e1, Eigen::VectorXd e2) : e1_(std::move(e1)), e2_(std::move(e2)) {
    if (e1_.size() != e2_.size() || e1_.size() < 2) throw std::invalid_argument("projection: basis dimension mismatch");
    if (std::abs(e1_.norm() - 1.0) > 1e-12 || std::abs(e2_.norm() - 1.0) > 1e-12) {
        throw std::invalid_argument("projection: basis vectors must be unit length");
    }
    if (std::abs(e1_.dot(e2_)) > 1e-12) throw std::invalid_argument("projection: basis vectors must be orthogonal");
}

Projection Projection::xy(int dim) { return Projection(Eigen::VectorXd::Unit(dim, 0), Eigen::VectorXd::Unit(dim, 1)); }

std::vector<Eigen::Vector2d> Projection::apply(const DiscreteCurve& curve) const {
    if (curve.dim() != dim()) throw std::invalid_argument("projection: curve dimension does not match the basis");
    std::vector<Eigen::Vector2d> out;
    out.reserve(curve.size());
    for (std::size_t i = 0; i < curve.size(); ++i) out.push_back(apply(curve.point(static_cast<std::ptrdiff_t>(i)).transpose()));
    return out;
}

double default_convexity_tolerance(const DiscreteCurve& curve) { return 1e-6 * diameter(curve); }

namespace {

double distance_to_polygon_boundary(const Eigen::Vector2d& p, const std::vector<Eigen::Vector2d>& poly) {
    double best = std::numeric_limits<double>::infinity();
    const std::size_t m = poly.size();
    for (std::size_t k = 0; k < m; ++k) {
        const Eigen::Vector2d& a = poly[k];
        const Eigen::Vector2d& b = poly[(k + 1) % m];
        const Eigen::Vector2d ab = b - a;
        const double lambda = std::clamp((p - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
        best = std::min(best, (a + lambda * ab - p).norm());
    }
    return best;
}

/// Radial distance from each point to the body boundary as seen from the
/// origin, i.e. |x| (1/M(x) - 1).
template <class Points>
ConvexityResult radial_defects(const ConvexBody& body, const Points& pts, double tol) {
    ConvexityResult res;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Eigen::VectorXd x = pts[i];
        const double m = minkowski_functional(body, x);
        const double defect = m > 0.0 ? x.norm() * (1.0 / m - 1.0) : std::numeric_limits<double>::infinity();
        if (defect > res.max_defect) {
            res.max_defect = defect;
            res.argmax_vertex = i;
        }
    }
    res.convex = res.max_defect < tol;
    return res;
}

}  // namespace

ConvexityResult is_convex_space_curve(const DiscreteCurve& curve, double tol) {
    const auto n = curve.size();
    if (curve.dim() == 3) {
        std::vector<Eigen::Vector3d> pts(n);
        for (std::size_t i = 0; i < n; ++i) pts[i] = curve.point(static_cast<std::ptrdiff_t>(i)).transpose();
        try {
            const Hull3 hull = hull_3d(pts);
            Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
            const auto verts = hull.vertex_indices();
            for (std::size_t v : verts) centroid += pts[v];
            centroid /= static_cast<double>(verts.size());
            const ConvexBody body = ConvexBody::from(hull).translated(centroid);
            std::vector<Eigen::Vector3d> shifted(n);
            for (std::size_t i = 0; i < n; ++i) shifted[i] = pts[i] - centroid;
            return radial_defects(body, shifted, tol);
        } catch (const DegenerateGeometry& e) {
            if (e.kind() != DegenerateGeometry::Kind::Coplanar) throw;
        }
    } else if (curve.dim() != 2) {
        throw std::invalid_argument("is_convex_space_curve: needs a curve in R^2 or R^3");
    }

    // Planar: hull in the best-fit plane.
    const Eigen::RowVectorXd mean = curve.points().colwise().mean();
    const PointMatrix centered = curve.points().rowwise() - mean;
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
    const Eigen::VectorXd u = svd.matrixV().col(0), v = svd.matrixV().col(1);
    std::vector<Eigen::Vector2d> flat(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Eigen::VectorXd c = centered.row(static_cast<Eigen::Index>(i)).transpose();
        flat[i] = Eigen::Vector2d(u.dot(c), v.dot(c));
    }
    const Polygon2 poly = hull_2d(flat);
    Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
    for (const auto& p : poly.vertices) centroid += p;
    centroid /= static_cast<double>(poly.vertices.size());
    const ConvexBody body = ConvexBody::from(poly).translated(centroid);
    for (auto& p : flat) p -= centroid;
    auto res = radial_defects(body, flat, tol);
    res.planar_fallback = true;
    return res;
}

double phi_star(const DiscreteCurve& curve, const Eigen::VectorXd& x) {
    const PointMatrix tangent = arclength_derivative(curve, 1).rowwise().normalized();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < curve.size(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        const Eigen::VectorXd d = curve.points().row(k).transpose() - x;
        best = std::min(best, d.norm() - std::abs(d.dot(tangent.row(k).transpose())));
    }
    return best;
}

double ProjectedFrame::min_pt_norm() const {
    return pt_norm.empty() ? 0.0 : *std::min_element(pt_norm.begin(), pt_norm.end());
}

ProjectedFrame projected_frame(const DiscreteCurve& curve, const FrenetData& fd, const Projection& projection,
                               double kappa_floor, double regularity) {
    const auto y = projection.apply(curve);
    const std::size_t n = y.size();
    Eigen::Vector2d lo = y[0], hi = y[0];
    for (const auto& p : y) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    const double tiny = 1e-14 * (hi - lo).norm();

    ProjectedFrame pf;
    pf.tangent.assign(n, Eigen::Vector2d::Zero());
    pf.normal.assign(n, std::nullopt);
    pf.curvature.assign(n, 0.0);
    pf.pt_norm.assign(n, 0.0);
    pf.regular.assign(n, 0);
    pf.pn_dot_np.assign(n, std::nullopt);

    for (std::size_t i = 0; i < n; ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        pf.pt_norm[i] = projection.apply(fd.tangent.row(k).transpose()).norm();
        const Eigen::Vector2d& prev = y[(i + n - 1) % n];
        const Eigen::Vector2d& cur = y[i];
        const Eigen::Vector2d& next = y[(i + 1) % n];
        // PT vanishing between samples shows up as a reversal of consecutive projected edges
        pf.regular[i] = pf.pt_norm[i] > regularity && (cur - prev).dot(next - cur) > 0.0;
        const double a = (cur - prev).norm();
        const double b = (next - cur).norm();
        if (a <= tiny || b <= tiny) continue;
        const double denom = a * b * (a + b);
        pf.tangent[i] = ((a * a * (next - cur) + b * b * (cur - prev)) / denom).normalized();
        const Eigen::Vector2d d2 = 2.0 * (a * next - (a + b) * cur + b * prev) / denom;
        pf.curvature[i] = d2.norm();
        if (pf.curvature[i] < kappa_floor || pf.curvature[i] == 0.0) continue;
        pf.normal[i] = d2 / pf.curvature[i];
        if (fd.has_normal[i]) {
            const Eigen::Vector2d pn = projection.apply(fd.normal.row(k).transpose());
            pf.pn_dot_np[i] = pn.dot(*pf.normal[i]);
        }
    }
    return pf;
}

ProjectedFrame projected_frame(const DiscreteCurve& curve, const Projection& projection, double regularity) {
    const double floor = default_kappa_floor(curve);
    return projected_frame(curve, frenet(curve, floor), projection, floor, regularity);
}

ConvexityDefectSample convexity_defect(const DiscreteCurve& curve, const Projection& projection, double regularity) {
    const auto y = projection.apply(curve);
    const Polygon2 hull = hull_2d(y);
    ConvexityDefectSample s;
    std::vector<unsigned char> on_hull(y.size(), 0);
    for (std::size_t idx : hull.indices) on_hull[idx] = 1;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (on_hull[i]) continue;
        const double d = distance_to_polygon_boundary(y[i], hull.vertices);
        if (d > s.phi_max) {
            s.phi_max = d;
            s.argmax_vertex = i;
        }
    }
    const PointMatrix tangent = arclength_derivative(curve, 1).rowwise().normalized();
    s.min_pt_norm = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < tangent.rows(); ++i) {
        s.min_pt_norm = std::min(s.min_pt_norm, projection.apply(tangent.row(i).transpose()).norm());
    }
    for (std::size_t i = 0; i < y.size(); ++i) {
        const auto& prev = y[(i + y.size() - 1) % y.size()];
        const auto& next = y[(i + 1) % y.size()];
        if ((y[i] - prev).dot(next - y[i]) <= 0.0) ++s.reversals;
    }
    s.regular = s.min_pt_norm > regularity && s.reversals == 0;
    return s;
}

std::vector<double> ProjectedConvexityMonitor::sample(const FlowState& state) const {
    try {
        const auto s = convexity_defect(state.curve, projection_, regularity_);
        return {s.phi_max, s.reversals ? 0.0 : s.min_pt_norm};
    } catch (const DegenerateGeometry&) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        return {nan, nan};
    }
}

std::vector<double> SpaceConvexityMonitor::sample(const FlowState& state) const {
    return {is_convex_space_curve(state.curve).max_defect};
}

}  // namespace csf
