#include "csf/hull.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace csf {

namespace {

double cross(const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

}  // namespace

Polygon2 hull_2d(std::span<const Eigen::Vector2d> points) {
    const std::size_t n = points.size();
    if (n < 3) throw DegenerateGeometry(DegenerateGeometry::Kind::Collinear, "hull_2d: fewer than 3 points");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return points[i].x() < points[j].x() || (points[i].x() == points[j].x() && points[i].y() < points[j].y());
    });

    double diam = 0.0;
    {
        Eigen::Vector2d lo = points[0], hi = points[0];
        for (const auto& p : points) {
            lo = lo.cwiseMin(p);
            hi = hi.cwiseMax(p);
        }
        diam = (hi - lo).norm();
    }
    const double tol = 1e-12 * diam;

    // Pop while the middle point lies within tol of (or right of) the chord.
    auto keeps_turn = [&](std::size_t o, std::size_t a, std::size_t b) {
        const double len = (points[b] - points[o]).norm();
        return cross(points[o], points[a], points[b]) > tol * len;
    };

    std::vector<std::size_t> chain(2 * n);
    std::size_t k = 0;
    for (std::size_t idx : order) {
        while (k >= 2 && !keeps_turn(chain[k - 2], chain[k - 1], idx)) --k;
        chain[k++] = idx;
    }
    for (std::size_t t = n - 1, lower = k + 1; t-- > 0;) {
        const std::size_t idx = order[t];
        while (k >= lower && !keeps_turn(chain[k - 2], chain[k - 1], idx)) --k;
        chain[k++] = idx;
    }
    chain.resize(k - 1);
    if (chain.size() < 3) throw DegenerateGeometry(DegenerateGeometry::Kind::Collinear, "hull_2d: points are collinear");

    Polygon2 poly;
    poly.indices = std::move(chain);
    poly.vertices.reserve(poly.indices.size());
    for (std::size_t i : poly.indices) poly.vertices.push_back(points[i]);
    return poly;
}

std::vector<std::size_t> Hull3::vertex_indices() const {
    std::vector<std::size_t> out;
    for (const auto& f : faces) out.insert(out.end(), f.begin(), f.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

struct Face {
    std::array<std::size_t, 3> v;
    Eigen::Vector3d normal;
    double offset;
    bool alive = true;
};

std::uint64_t edge_key(std::size_t a, std::size_t b) { return (static_cast<std::uint64_t>(a) << 32) | b; }

}  // namespace

Hull3 hull_3d(std::span<const Eigen::Vector3d> points) {
    const std::size_t n = points.size();
    if (n < 4) throw DegenerateGeometry(DegenerateGeometry::Kind::Coplanar, "hull_3d: fewer than 4 points");

    Eigen::Vector3d lo = points[0], hi = points[0];
    for (const auto& p : points) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    const double scale = (hi - lo).norm();
    const double eps = 1e-12 * scale;

    // Initial tetrahedron from extreme points.
    std::size_t i0 = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (points[i].x() < points[i0].x()) i0 = i;
    }
    std::size_t i1 = i0;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = (points[i] - points[i0]).squaredNorm();
        if (d > best) best = d, i1 = i;
    }
    const Eigen::Vector3d axis = (points[i1] - points[i0]).normalized();
    std::size_t i2 = i0;
    best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = (points[i] - points[i0]).cross(axis).squaredNorm();
        if (d > best) best = d, i2 = i;
    }
    if (std::sqrt(best) <= eps) throw DegenerateGeometry(DegenerateGeometry::Kind::Collinear, "hull_3d: points are collinear");
    const Eigen::Vector3d plane_n = (points[i1] - points[i0]).cross(points[i2] - points[i0]).normalized();
    std::size_t i3 = i0;
    best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = std::abs(plane_n.dot(points[i] - points[i0]));
        if (d > best) best = d, i3 = i;
    }
    if (best <= 1e-10 * scale) throw DegenerateGeometry(DegenerateGeometry::Kind::Coplanar, "hull_3d: points are coplanar");

    const Eigen::Vector3d inside = 0.25 * (points[i0] + points[i1] + points[i2] + points[i3]);
    std::vector<Face> faces;
    std::unordered_map<std::uint64_t, std::size_t> edge_face;

    auto add_face = [&](std::size_t a, std::size_t b, std::size_t c) {
        Eigen::Vector3d nrm = (points[b] - points[a]).cross(points[c] - points[a]);
        if (nrm.dot(points[a] - inside) < 0.0) {
            std::swap(b, c);
            nrm = -nrm;
        }
        nrm.normalize();
        faces.push_back({{a, b, c}, nrm, nrm.dot(points[a]), true});
        const std::size_t id = faces.size() - 1;
        edge_face[edge_key(a, b)] = id;
        edge_face[edge_key(b, c)] = id;
        edge_face[edge_key(c, a)] = id;
    };
    add_face(i0, i1, i2);
    add_face(i0, i1, i3);
    add_face(i0, i2, i3);
    add_face(i1, i2, i3);

    std::vector<unsigned char> visible_mark;
    for (std::size_t p = 0; p < n; ++p) {
        if (p == i0 || p == i1 || p == i2 || p == i3) continue;
        const Eigen::Vector3d& q = points[p];

        std::size_t seed = faces.size();
        double seed_dist = eps;
        for (std::size_t f = 0; f < faces.size(); ++f) {
            if (!faces[f].alive) continue;
            const double d = faces[f].normal.dot(q) - faces[f].offset;
            if (d > seed_dist) seed_dist = d, seed = f;
        }
        if (seed == faces.size()) continue;  // inside or on the hull

        // Connected region of faces that see q.
        visible_mark.assign(faces.size(), 0);
        std::vector<std::size_t> stack{seed}, visible;
        visible_mark[seed] = 1;
        while (!stack.empty()) {
            const std::size_t f = stack.back();
            stack.pop_back();
            visible.push_back(f);
            for (int e = 0; e < 3; ++e) {
                const std::size_t a = faces[f].v[e], b = faces[f].v[(e + 1) % 3];
                const std::size_t g = edge_face.at(edge_key(b, a));
                if (visible_mark[g]) continue;
                if (faces[g].normal.dot(q) - faces[g].offset > eps) {
                    visible_mark[g] = 1;
                    stack.push_back(g);
                }
            }
        }

        std::vector<std::pair<std::size_t, std::size_t>> horizon;
        for (std::size_t f : visible) {
            for (int e = 0; e < 3; ++e) {
                const std::size_t a = faces[f].v[e], b = faces[f].v[(e + 1) % 3];
                if (!visible_mark[edge_face.at(edge_key(b, a))]) horizon.emplace_back(a, b);
            }
        }
        for (std::size_t f : visible) {
            faces[f].alive = false;
            for (int e = 0; e < 3; ++e) edge_face.erase(edge_key(faces[f].v[e], faces[f].v[(e + 1) % 3]));
        }
        for (const auto& [a, b] : horizon) {
            // Orientation inherited from the removed face keeps normals outward.
            Eigen::Vector3d nrm = (points[b] - points[a]).cross(q - points[a]);
            const double len = nrm.norm();
            nrm /= len;
            faces.push_back({{a, b, p}, nrm, nrm.dot(points[a]), true});
            const std::size_t id = faces.size() - 1;
            edge_face[edge_key(a, b)] = id;
            edge_face[edge_key(b, p)] = id;
            edge_face[edge_key(p, a)] = id;
        }
    }

    Hull3 hull;
    for (const auto& f : faces) {
        if (!f.alive) continue;
        hull.faces.push_back(f.v);
        hull.normals.push_back(f.normal);
        hull.offsets.push_back(f.offset);
    }
    return hull;
}

ConvexBody ConvexBody::from(const Hull3& hull) {
    ConvexBody body;
    for (std::size_t k = 0; k < hull.faces.size(); ++k) {
        body.normals.emplace_back(hull.normals[k]);
        body.offsets.push_back(hull.offsets[k]);
    }
    return body;
}

ConvexBody ConvexBody::from(const Polygon2& polygon) {
    ConvexBody body;
    const std::size_t m = polygon.vertices.size();
    for (std::size_t k = 0; k < m; ++k) {
        const Eigen::Vector2d& a = polygon.vertices[k];
        const Eigen::Vector2d& b = polygon.vertices[(k + 1) % m];
        const Eigen::Vector2d edge = b - a;
        const Eigen::Vector2d outward = Eigen::Vector2d(edge.y(), -edge.x()).normalized();  // CCW polygon
        body.normals.emplace_back(outward);
        body.offsets.push_back(outward.dot(a));
    }
    return body;
}

ConvexBody ConvexBody::translated(const Eigen::VectorXd& origin) const {
    ConvexBody out = *this;
    for (std::size_t k = 0; k < normals.size(); ++k) out.offsets[k] -= normals[k].dot(origin);
    return out;
}

bool ConvexBody::contains(const Eigen::VectorXd& x, double slack) const {
    for (std::size_t k = 0; k < normals.size(); ++k) {
        if (normals[k].dot(x) > offsets[k] + slack) return false;
    }
    return true;
}

double minkowski_functional(const ConvexBody& body, const Eigen::VectorXd& x) {
    double max_offset = 0.0;
    for (double d : body.offsets) max_offset = std::max(max_offset, std::abs(d));
    double m = 0.0;
    for (std::size_t k = 0; k < body.normals.size(); ++k) {
        if (!(body.offsets[k] > 1e-12 * max_offset)) {
            throw DegenerateGeometry(DegenerateGeometry::Kind::OriginNotInterior,
                                     "minkowski_functional: origin is not interior to the body; recenter first");
        }
        m = std::max(m, body.normals[k].dot(x) / body.offsets[k]);
    }
    return m;
}

}  // namespace csf
