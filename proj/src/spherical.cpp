#include "csf/spherical.hpp"

#include "csf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace csf {

SphereFit fit_sphere(const PointMatrix& points) {
    const auto n = points.rows();
    const auto dim = points.cols();
    if (n < dim + 1) throw DegenerateGeometry(DegenerateGeometry::Kind::Coplanar, "fit_sphere: too few points");

    const Eigen::RowVectorXd mean = points.colwise().mean();
    const Eigen::MatrixXd centered = points.rowwise() - mean;
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered);
    const auto& sv = svd.singularValues();
    if (sv(dim - 1) <= 1e-9 * sv(0)) {
        throw DegenerateGeometry(DegenerateGeometry::Kind::Coplanar, "fit_sphere: points are coplanar, sphere not unique");
    }

    // Work relative to the mean for conditioning.
    Eigen::MatrixXd a(n, dim + 1);
    a.leftCols(dim) = 2.0 * centered;
    a.col(dim).setOnes();
    const Eigen::VectorXd rhs = centered.rowwise().squaredNorm();
    const Eigen::VectorXd sol = a.colPivHouseholderQr().solve(rhs);

    SphereFit fit;
    const Eigen::VectorXd c = sol.head(dim);
    const double r2 = sol(dim) + c.squaredNorm();
    if (!(r2 > 0.0)) throw DegenerateGeometry(DegenerateGeometry::Kind::Coplanar, "fit_sphere: no real sphere fits");
    fit.center = c + mean.transpose();
    fit.radius = std::sqrt(r2);
    const Eigen::VectorXd dev = (centered.rowwise() - c.transpose()).rowwise().norm().array() - fit.radius;
    fit.rms_deviation = std::sqrt(dev.squaredNorm() / static_cast<double>(n));
    return fit;
}

SphereFit fit_sphere(const DiscreteCurve& curve) { return fit_sphere(curve.points()); }

ChordField chord_field(const DiscreteCurve& curve) {
    const auto n = static_cast<Eigen::Index>(curve.size());
    const auto& p = curve.points();
    const Vector s = cumulative_arclength(curve);
    const double length = total_length(curve);

    ChordField field;
    field.vertex_count = curve.size();
    field.length = length;
    field.values.setZero(n, n);
    field.arc_distances.setZero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double f = (p.row(j) - p.row(i)).squaredNorm();
            const double d = s[j] - s[i];
            const double arc = std::min(d, length - d);
            field.values(i, j) = field.values(j, i) = f;
            field.arc_distances(i, j) = field.arc_distances(j, i) = arc;
        }
    }
    return field;
}

std::vector<ChordMinimum> chord_minima(const ChordField& field, double exclude_arc) {
    if (!(exclude_arc > 0.0)) throw std::invalid_argument("chord_minima: exclude_arc must be positive");
    const auto n = static_cast<Eigen::Index>(field.vertex_count);
    auto wrap = [n](Eigen::Index k) { return ((k % n) + n) % n; };
    std::vector<ChordMinimum> out;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            if (field.arc_distances(i, j) < exclude_arc) continue;
            const double f = field.values(i, j);
            bool minimum = true, strict = true;
            for (int di = -1; di <= 1 && minimum; ++di) {
                for (int dj = -1; dj <= 1; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    const double g = field.values(wrap(i + di), wrap(j + dj));
                    if (g < f) {
                        minimum = false;
                        break;
                    }
                    if (g == f) strict = false;
                }
            }
            if (minimum) out.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), f, strict});
        }
    }
    return out;
}

double tangent_collinearity(const PointMatrix& unit_tangents, std::size_t i, std::size_t j) {
    if (i == j) return 1.0;
    const auto a = unit_tangents.row(static_cast<Eigen::Index>(i));
    const auto b = unit_tangents.row(static_cast<Eigen::Index>(j));
    return std::min(1.0, std::abs(a.dot(b)));
}

double tangent_collinearity(const DiscreteCurve& curve, std::size_t i, std::size_t j) {
    return tangent_collinearity(arclength_derivative(curve, 1).rowwise().normalized(), i, j);
}

double heat_residual(std::span<const ChordField> history, double dt_rec, std::size_t pairs, std::uint64_t seed) {
    if (history.size() < 3) throw std::invalid_argument("heat_residual: needs three chord fields");
    if (!(dt_rec > 0.0)) throw std::invalid_argument("heat_residual: dt_rec must be positive");
    const ChordField& f0 = history[history.size() - 3];
    const ChordField& f1 = history[history.size() - 2];
    const ChordField& f2 = history[history.size() - 1];
    if (f0.vertex_count != f1.vertex_count || f1.vertex_count != f2.vertex_count) {
        throw std::invalid_argument("heat_residual: vertex counts differ between fields");
    }
    const auto n = static_cast<Eigen::Index>(f1.vertex_count);
    const auto& F = f1.values;
    auto wrap = [n](Eigen::Index k) { return ((k % n) + n) % n; };

    // Edge k joins k and k+1.
    Vector edge(n);
    for (Eigen::Index k = 0; k < n; ++k) edge[k] = std::sqrt(F(k, wrap(k + 1)));

    auto second = [&](Eigen::Index i, Eigen::Index j, bool first_index) {
        const Eigen::Index k = first_index ? i : j;
        const double a = edge[wrap(k - 1)], b = edge[k];
        const double fp = first_index ? F(wrap(i + 1), j) : F(i, wrap(j + 1));
        const double fm = first_index ? F(wrap(i - 1), j) : F(i, wrap(j - 1));
        return 2.0 * (a * fp - (a + b) * F(i, j) + b * fm) / (a * b * (a + b));
    };

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
    double worst = 0.0;
    for (std::size_t s = 0; s < pairs; ++s) {
        Eigen::Index i = pick(rng), j = pick(rng);
        while (j == i) j = pick(rng);
        const double dt_f = (f2.values(i, j) - f0.values(i, j)) / (2.0 * dt_rec);
        const double lap = second(i, j, true) + second(i, j, false);
        worst = std::max(worst, std::abs(dt_f - lap + 4.0));
    }
    return worst;
}

double schur_bound(const ChordField& field, double curvature_bound) {
    if (!(curvature_bound > 0.0)) throw std::invalid_argument("schur_bound: curvature bound must be positive");
    const double c = curvature_bound;
    const double reach = std::numbers::pi / c;
    const auto n = static_cast<Eigen::Index>(field.vertex_count);
    double margin = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double arc = field.arc_distances(i, j);
            if (arc <= 0.0 || arc > reach) continue;
            const double s = std::sin(0.5 * c * arc);
            margin = std::min(margin, field.values(i, j) - 4.0 / (c * c) * s * s);
        }
    }
    return margin;
}

AvoidanceSample avoidance_sample(const DiscreteCurve& curve, double max_kappa, double t) {
    const auto n = static_cast<Eigen::Index>(curve.size());
    const auto& p = curve.points();
    Vector edge(n);
    for (Eigen::Index k = 0; k < n; ++k) edge[k] = curve.edge_length(k);
    const double length = edge.sum();

    AvoidanceSample out;
    out.t = t;
    out.C_emp = kCurvatureHeadroom * max_kappa;
    const double c = out.C_emp;
    const double reach = c > 0.0 ? std::numbers::pi / c : std::numeric_limits<double>::infinity();
    const double inv_c2 = c > 0.0 ? 4.0 / (c * c) : 0.0;

    double min_d = std::numeric_limits<double>::infinity();
    double margin = std::numeric_limits<double>::infinity();
    double max_f = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        double along = 0.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            along += edge[j - 1];
            const double arc = std::min(along, length - along);
            const double f = (p.row(j) - p.row(i)).squaredNorm();
            max_f = std::max(max_f, f);
            if (arc < reach) {
                const double s = std::sin(0.5 * c * arc);
                margin = std::min(margin, f - inv_c2 * s * s);
            } else {
                min_d = std::min(min_d, f);
            }
        }
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out.min_f_on_D = std::isfinite(min_d) ? min_d : nan;
    out.schur_margin = std::isfinite(margin) ? margin : nan;
    const double floor = 1e-4 * std::sqrt(max_f);
    out.self_intersect = std::isfinite(min_d) && min_d < floor * floor;
    return out;
}

std::vector<double> AvoidanceMonitor::sample(const FlowState& state) const {
    const auto s = avoidance_sample(state.curve, state.frenet.max_curvature(), state.t);
    return {s.min_f_on_D, s.C_emp, s.schur_margin, s.self_intersect ? 1.0 : 0.0};
}

std::vector<double> SphericityMonitor::sample(const FlowState& state) const {
    try {
        const auto fit = fit_sphere(state.curve);
        return {fit.rms_deviation, fit.radius};
    } catch (const DegenerateGeometry&) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        return {nan, nan};
    }
}

namespace {

double point_segment(const Eigen::RowVectorXd& x, const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b) {
    const Eigen::RowVectorXd ab = b - a;
    const double lambda = std::clamp((x - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
    return (a + lambda * ab - x).norm();
}

double one_sided(const DiscreteCurve& from, const DiscreteCurve& to) {
    double best = std::numeric_limits<double>::infinity();
    const auto n = static_cast<std::ptrdiff_t>(to.size());
    for (std::size_t i = 0; i < from.size(); ++i) {
        const Eigen::RowVectorXd x = from.point(static_cast<std::ptrdiff_t>(i));
        for (std::ptrdiff_t k = 0; k < n; ++k) best = std::min(best, point_segment(x, to.point(k), to.point(k + 1)));
    }
    return best;
}

}  // namespace

double min_pair_distance(const DiscreteCurve& a, const DiscreteCurve& b) { return std::min(one_sided(a, b), one_sided(b, a)); }

std::vector<double> PairDistanceMonitor::sample(std::span<const FlowState> family) const {
    double best = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < family.size(); ++i) {
        for (std::size_t j = i + 1; j < family.size(); ++j) {
            const double d = min_pair_distance(family[i].curve, family[j].curve);
            best = std::isnan(best) ? d : std::min(best, d);
        }
    }
    return {best};
}

std::vector<double> MutualSphereMonitor::sample(std::span<const FlowState> family) const {
    Eigen::Index rows = 0;
    for (const auto& s : family) rows += s.curve.points().rows();
    PointMatrix all(rows, family.front().curve.points().cols());
    Eigen::Index at = 0;
    for (const auto& s : family) {
        all.middleRows(at, s.curve.points().rows()) = s.curve.points();
        at += s.curve.points().rows();
    }
    try {
        return {fit_sphere(all).rms_deviation};
    } catch (const DegenerateGeometry&) {
        return {std::numeric_limits<double>::quiet_NaN()};
    }
}

}  // namespace csf
