#include "csf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace csf {

std::optional<Vector> FrenetData::normal_at(std::size_t i) const {
    if (!has_normal[i]) return std::nullopt;
    return Vector(normal.row(static_cast<Eigen::Index>(i)).transpose());
}

std::optional<Vector> FrenetData::binormal_at(std::size_t i) const {
    if (binormal.rows() == 0 || !has_normal[i]) return std::nullopt;
    return Vector(binormal.row(static_cast<Eigen::Index>(i)).transpose());
}

PointMatrix arclength_derivative(const DiscreteCurve& curve, int order) {
    if (order != 1 && order != 2) throw std::invalid_argument("arclength_derivative: order must be 1 or 2");
    const auto n = static_cast<std::ptrdiff_t>(curve.size());
    const auto& pts = curve.points();
    PointMatrix out(pts.rows(), pts.cols());

    Vector edges(n);
    for (std::ptrdiff_t i = 0; i < n; ++i) edges[i] = curve.edge_length(i);
    const double floor = 1e-12 * (pts.colwise().maxCoeff() - pts.colwise().minCoeff()).norm();
    if (edges.minCoeff() <= floor) {
        throw DegenerateGeometry(DegenerateGeometry::Kind::DegenerateEdge, "arclength_derivative: degenerate edge");
    }

    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const double a = edges[curve.wrap(i - 1)];
        const double b = edges[i];
        const auto prev = pts.row(curve.wrap(i - 1));
        const auto cur = pts.row(i);
        const auto next = pts.row(curve.wrap(i + 1));
        const double denom = a * b * (a + b);
        if (order == 1) {
            out.row(i) = (a * a * (next - cur) + b * b * (cur - prev)) / denom;
        } else {
            out.row(i) = 2.0 * (a * next - (a + b) * cur + b * prev) / denom;
        }
    }
    return out;
}

double default_kappa_floor(const DiscreteCurve& curve) {
    const auto& pts = curve.points();
    return 1e-8 / (pts.colwise().maxCoeff() - pts.colwise().minCoeff()).norm();
}

FrenetData frenet(const DiscreteCurve& curve, double kappa_floor) {
    if (kappa_floor < 0) throw std::invalid_argument("frenet: kappa_floor must be non-negative");
    const auto n = static_cast<Eigen::Index>(curve.size());
    const int dim = curve.dim();

    FrenetData fd;
    fd.tangent = arclength_derivative(curve, 1);
    fd.tangent.rowwise().normalize();
    fd.curvature_vector = arclength_derivative(curve, 2);
    fd.curvature = fd.curvature_vector.rowwise().norm();
    fd.normal = PointMatrix::Zero(n, dim);
    fd.has_normal.assign(static_cast<std::size_t>(n), 0);
    fd.arclength_weights.resize(n);
    fd.torsion.assign(static_cast<std::size_t>(n), std::nullopt);

    Vector edges(n);
    for (Eigen::Index i = 0; i < n; ++i) edges[i] = curve.edge_length(i);
    fd.total_length = edges.sum();
    for (Eigen::Index i = 0; i < n; ++i) fd.arclength_weights[i] = 0.5 * (edges[curve.wrap(i - 1)] + edges[i]);

    for (Eigen::Index i = 0; i < n; ++i) {
        if (fd.curvature[i] >= kappa_floor && fd.curvature[i] > 0.0) {
            fd.normal.row(i) = fd.curvature_vector.row(i) / fd.curvature[i];
            fd.has_normal[static_cast<std::size_t>(i)] = 1;
        }
    }

    if (dim != 3) return fd;

    fd.binormal = PointMatrix::Zero(n, 3);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!fd.has_normal[static_cast<std::size_t>(i)]) continue;
        const Eigen::Vector3d t = fd.tangent.row(i).transpose();
        const Eigen::Vector3d nn = fd.normal.row(i).transpose();
        fd.binormal.row(i) = t.cross(nn).normalized().transpose();
    }
    // tau = -<dB/ds, N>, central difference of B over the dual cell.
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto ip = static_cast<std::size_t>(curve.wrap(i + 1));
        const auto im = static_cast<std::size_t>(curve.wrap(i - 1));
        if (!fd.has_normal[static_cast<std::size_t>(i)] || !fd.has_normal[ip] || !fd.has_normal[im]) continue;
        const double span = edges[curve.wrap(i - 1)] + edges[i];
        const auto db = (fd.binormal.row(static_cast<Eigen::Index>(ip)) - fd.binormal.row(static_cast<Eigen::Index>(im))) / span;
        fd.torsion[static_cast<std::size_t>(i)] = -db.dot(fd.normal.row(i));
    }
    return fd;
}

Vector cumulative_arclength(const DiscreteCurve& curve) {
    const auto n = static_cast<Eigen::Index>(curve.size());
    Vector s(n);
    s[0] = 0.0;
    for (Eigen::Index i = 1; i < n; ++i) s[i] = s[i - 1] + curve.edge_length(i - 1);
    return s;
}

namespace {

/// Walks forward along a closed polyline placing points at a fixed chord
/// distance from their predecessor.
class ChordWalker {
  public:
    ChordWalker(const DiscreteCurve& curve) : curve_(curve), n_(static_cast<std::ptrdiff_t>(curve.size())) {
        edge_.resize(n_);
        for (std::ptrdiff_t i = 0; i < n_; ++i) edge_[i] = curve.edge_length(i);
        length_ = edge_.sum();
    }

    double length() const { return length_; }

    /// Places `count` points after the anchor with chord spacing d. Returns
    /// the arclength position (unwrapped) of the point following the last
    /// one, i.e. where a closing point would fall. Fills `out` rows 1..count.
    double walk(double d, std::size_t count, PointMatrix* out) const {
        const int dim = curve_.dim();
        Eigen::RowVectorXd p = curve_.point(0);
        std::ptrdiff_t seg = 0;   // unwrapped segment index
        double lambda = 0.0;
        double seg_start = 0.0;   // unwrapped arclength at start of seg
        const double d2 = d * d;
        double position = 0.0;
        for (std::size_t m = 1; m <= count + 1; ++m) {
            // Bounded to two laps; a closing point can only be that far.
            while (true) {
                if (seg >= 3 * n_) return std::numeric_limits<double>::infinity();
                const auto a = curve_.point(seg);
                const auto b = curve_.point(seg + 1);
                if ((b - p).squaredNorm() >= d2) {
                    const Eigen::RowVectorXd dir = b - a;
                    const Eigen::RowVectorXd off = a - p;
                    const double qa = dir.squaredNorm();
                    const double qb = 2.0 * dir.dot(off);
                    const double qc = off.squaredNorm() - d2;
                    const double disc = std::max(0.0, qb * qb - 4.0 * qa * qc);
                    double root = (-qb + std::sqrt(disc)) / (2.0 * qa);
                    root = std::clamp(root, lambda, 1.0);
                    lambda = root;
                    p = a + lambda * dir;
                    break;
                }
                seg_start += edge_[curve_.wrap(seg)];
                ++seg;
                lambda = 0.0;
            }
            position = seg_start + lambda * edge_[curve_.wrap(seg)];
            if (out != nullptr && m <= count) {
                for (int k = 0; k < dim; ++k) (*out)(static_cast<Eigen::Index>(m), k) = p[k];
            }
        }
        return position;
    }

  private:
    const DiscreteCurve& curve_;
    std::ptrdiff_t n_;
    Vector edge_;
    double length_ = 0.0;
};

}  // namespace

DiscreteCurve resample_uniform(const DiscreteCurve& curve, std::size_t n) {
    if (n < kMinCurveVertices) throw std::invalid_argument("resample_uniform: need at least 8 points");
    const ChordWalker walker(curve);
    const double length = walker.length();

    // closing(d) = arclength where the (n)-th point lands; we need it to
    // equal the full loop. closing is increasing in d; chords never exceed
    // arcs, so d = L/n overshoots. Regula falsi (Illinois) on the bracket.
    auto closing = [&](double d) { return walker.walk(d, n - 1, nullptr) - length; };
    double hi = length / static_cast<double>(n);
    double f_hi = closing(hi);
    double lo = 0.5 * hi;
    double f_lo = closing(lo);
    while (f_lo > 0.0 && lo > 1e-6 * hi) {
        lo *= 0.5;
        f_lo = closing(lo);
    }

    double d = hi;
    if (f_hi > 0.0 && f_lo < 0.0) {
        int side = 0;
        for (int iter = 0; iter < 200; ++iter) {
            d = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
            const double fd = closing(d);
            if (std::abs(fd) <= 1e-15 * length || hi - lo <= 1e-16 * hi) break;
            if (fd > 0.0) {
                hi = d;
                f_hi = fd;
                if (side == 1) f_lo *= 0.5;
                side = 1;
            } else {
                lo = d;
                f_lo = fd;
                if (side == -1) f_hi *= 0.5;
                side = -1;
            }
        }
    }

    PointMatrix out(static_cast<Eigen::Index>(n), curve.dim());
    out.row(0) = curve.point(0);
    walker.walk(d, n - 1, &out);
    return DiscreteCurve(std::move(out));
}

}  // namespace csf
