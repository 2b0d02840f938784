#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>

namespace csf {

/// Row-major N x dim storage: one row per vertex.
using PointMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Raised for curves that violate the DiscreteCurve invariants.
class InvalidCurve : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when an input is geometrically degenerate for the requested
/// operation (collinear hull input, coplanar sphere fit, ...).
class DegenerateGeometry : public std::runtime_error {
  public:
    enum class Kind { Collinear, Coplanar, OriginNotInterior, DegenerateEdge };

    DegenerateGeometry(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

  private:
    Kind kind_;
};

inline constexpr std::size_t kMinCurveVertices = 8;

/// Closed polyline in R^n sampled on the circle. Indexing is cyclic.
///
/// Construction validates the vertex count and that no edge collapses
/// (edge length below 1e-12 * diameter). Values are immutable afterwards.
class DiscreteCurve {
  public:
    explicit DiscreteCurve(PointMatrix points);

    std::size_t size() const noexcept { return static_cast<std::size_t>(points_.rows()); }
    int dim() const noexcept { return static_cast<int>(points_.cols()); }
    const PointMatrix& points() const noexcept { return points_; }

    /// Vertex i, cyclic.
    Eigen::Ref<const Eigen::RowVectorXd> point(std::ptrdiff_t i) const {
        return points_.row(wrap(i));
    }

    Eigen::Index wrap(std::ptrdiff_t i) const noexcept {
        const auto n = static_cast<std::ptrdiff_t>(points_.rows());
        auto r = i % n;
        return r < 0 ? r + n : r;
    }

    /// Length of edge (i, i+1).
    double edge_length(std::ptrdiff_t i) const { return (point(i + 1) - point(i)).norm(); }

  private:
    PointMatrix points_;
};

double total_length(const DiscreteCurve& curve);

/// Max pairwise vertex distance. O(N^2).
double diameter(const DiscreteCurve& curve);

double diameter(const PointMatrix& points);

double min_edge_length(const DiscreteCurve& curve);

/// Snapshot of a curve at simulation time t.
struct CurveSnapshot {
    PointMatrix points;
    double t = 0.0;
};

/// Structured-text snapshot: {"dim": n, "t": t, "points": [[...], ...]}.
/// Numbers are written with 17 significant digits so the round trip is exact.
std::string serialize_snapshot(const PointMatrix& points, double t);
CurveSnapshot parse_snapshot(const std::string& text);

void write_snapshot(const std::string& path, const PointMatrix& points, double t);
CurveSnapshot read_snapshot(const std::string& path);

}  // namespace csf
