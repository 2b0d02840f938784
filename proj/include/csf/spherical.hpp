#pragma once

#include "csf/curve.hpp"
#include "csf/flow.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace csf {

struct SphereFit {
    Vector center;
    double radius = 0.0;
    double rms_deviation = 0.0;  // rms of |p - center| - radius
};

/// Algebraic least squares: |p|^2 = 2 c.p + (r^2 - |c|^2) solved for c and the
/// constant. Throws DegenerateGeometry(Coplanar) when the vertices lie in a
/// hyperplane (no unique sphere).
SphereFit fit_sphere(const DiscreteCurve& curve);
SphereFit fit_sphere(const PointMatrix& points);

/// f(i, j) = |X_j - X_i|^2 on the sample torus, with the shorter-side
/// polygonal arclength between samples. O(N^2) memory and time.
struct ChordField {
    Eigen::MatrixXd values;
    Eigen::MatrixXd arc_distances;
    std::size_t vertex_count = 0;
    double length = 0.0;
};

ChordField chord_field(const DiscreteCurve& curve);

struct ChordMinimum {
    std::size_t i = 0;
    std::size_t j = 0;  // i < j
    double f = 0.0;
    bool strict = false;  // strictly below all 8 neighbours
};

/// Grid points (i < j, arc distance >= exclude_arc) where f is <= all eight
/// cyclic neighbours. Plateau points come back with strict = false.
std::vector<ChordMinimum> chord_minima(const ChordField& field, double exclude_arc);

/// |<T_i, T_j>| with the unit tangents of the stencil derivative. Any dimension.
double tangent_collinearity(const DiscreteCurve& curve, std::size_t i, std::size_t j);
double tangent_collinearity(const PointMatrix& unit_tangents, std::size_t i, std::size_t j);

/// max over sampled off-diagonal pairs of |d_t f - (d_s1^2 + d_s2^2) f + 4|.
/// Uses the last three fields of `history`, spaced dt_rec apart: central
/// difference in time, nonuniform second differences on the middle field
/// with edge lengths read off the field itself. Pairs are drawn from a
/// fixed-seed generator. Throws std::invalid_argument with fewer than three
/// fields or mismatched vertex counts.
double heat_residual(std::span<const ChordField> history, double dt_rec, std::size_t pairs = 256,
                     std::uint64_t seed = 0);

/// min over pairs with 0 < arc <= pi/C of f - (4/C^2) sin^2(C arc / 2).
/// Nonnegative when the chord bound holds. +inf if no pair qualifies.
double schur_bound(const ChordField& field, double curvature_bound);

inline constexpr double kCurvatureHeadroom = 1.1;

struct AvoidanceSample {
    double t = 0.0;
    double min_f_on_D = 0.0;
    double C_emp = 0.0;
    double schur_margin = 0.0;
    bool self_intersect = false;
};

/// Streams over all vertex pairs without storing the field. C_emp is
/// kCurvatureHeadroom * max_kappa; pairs with arc < pi/C_emp form E, the rest
/// D. self_intersect when min f on D < (1e-4 diameter)^2.
AvoidanceSample avoidance_sample(const DiscreteCurve& curve, double max_kappa, double t = 0.0);

/// Columns min_f_D, C_emp, schur_margin, self_intersect.
class AvoidanceMonitor : public Monitor {
  public:
    std::vector<std::string> columns() const override { return {"min_f_D", "C_emp", "schur_margin", "self_intersect"}; }
    std::vector<double> sample(const FlowState& state) const override;
};

/// Columns sphere_rms, sphere_radius. Planar curves give absent samples.
class SphericityMonitor : public Monitor {
  public:
    std::vector<std::string> columns() const override { return {"sphere_rms", "sphere_radius"}; }
    std::vector<double> sample(const FlowState& state) const override;
};

/// Smallest vertex-to-segment distance between any two members.
double min_pair_distance(const DiscreteCurve& a, const DiscreteCurve& b);

/// Column pair_min_dist: min over member pairs of min_pair_distance.
class PairDistanceMonitor : public FamilyMonitor {
  public:
    std::vector<std::string> columns() const override { return {"pair_min_dist"}; }
    std::vector<double> sample(std::span<const FlowState> family) const override;
};

/// Column mutual_sphere_dev: rms deviation of one sphere fitted to the
/// vertices of all members together.
class MutualSphereMonitor : public FamilyMonitor {
  public:
    std::vector<std::string> columns() const override { return {"mutual_sphere_dev"}; }
    std::vector<double> sample(std::span<const FlowState> family) const override;
};

}  // namespace csf
