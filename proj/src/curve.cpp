#include "csf/curve.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <fstream>
#include <sstream>

namespace csf {

namespace {

double bounding_diagonal(const PointMatrix& points) {
    return (points.colwise().maxCoeff() - points.colwise().minCoeff()).norm();
}

void append_number(std::string& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

}  // namespace

DiscreteCurve::DiscreteCurve(PointMatrix points) : points_(std::move(points)) {
    if (points_.rows() < static_cast<Eigen::Index>(kMinCurveVertices)) {
        throw InvalidCurve("curve needs at least " + std::to_string(kMinCurveVertices) + " vertices, got " +
                           std::to_string(points_.rows()));
    }
    if (points_.cols() < 2) throw InvalidCurve("ambient dimension must be at least 2");
    if (!points_.allFinite()) throw InvalidCurve("curve contains non-finite coordinates");

    // The bounding-box diagonal stands in for the diameter here: it is O(N)
    // and within a factor sqrt(dim) of it.
    const double floor = 1e-12 * bounding_diagonal(points_);
    const auto n = points_.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        const double e = (points_.row((i + 1) % n) - points_.row(i)).norm();
        if (!(e > floor)) {
            throw InvalidCurve("degenerate edge " + std::to_string(i) + " (length " + std::to_string(e) + ")");
        }
    }
}

double total_length(const DiscreteCurve& curve) {
    double sum = 0.0;
    for (std::size_t i = 0; i < curve.size(); ++i) sum += curve.edge_length(static_cast<std::ptrdiff_t>(i));
    return sum;
}

double diameter(const PointMatrix& points) {
    const auto n = points.rows();
    double best = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) best = std::max(best, (points.row(i) - points.row(j)).squaredNorm());
    }
    return std::sqrt(best);
}

double diameter(const DiscreteCurve& curve) { return diameter(curve.points()); }

double min_edge_length(const DiscreteCurve& curve) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < curve.size(); ++i) best = std::min(best, curve.edge_length(static_cast<std::ptrdiff_t>(i)));
    return best;
}

std::string serialize_snapshot(const PointMatrix& points, double t) {
    std::string out;
    out.reserve(static_cast<std::size_t>(points.size()) * 26 + 64);
    out += "{\n  \"dim\": ";
    out += std::to_string(points.cols());
    out += ",\n  \"t\": ";
    append_number(out, t);
    out += ",\n  \"points\": [\n";
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        out += "    [";
        for (Eigen::Index k = 0; k < points.cols(); ++k) {
            if (k) out += ", ";
            append_number(out, points(i, k));
        }
        out += i + 1 < points.rows() ? "],\n" : "]\n";
    }
    out += "  ]\n}\n";
    return out;
}

CurveSnapshot parse_snapshot(const std::string& text) {
    const auto doc = nlohmann::json::parse(text);
    const int dim = doc.at("dim").get<int>();
    const auto& rows = doc.at("points");
    if (!rows.is_array() || dim < 2) throw InvalidCurve("snapshot: malformed 'points' or 'dim'");
    CurveSnapshot snap;
    snap.t = doc.value("t", 0.0);
    snap.points.resize(static_cast<Eigen::Index>(rows.size()), dim);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (!row.is_array() || static_cast<int>(row.size()) != dim) {
            throw InvalidCurve("snapshot: row " + std::to_string(i) + " does not have " + std::to_string(dim) + " entries");
        }
        for (int k = 0; k < dim; ++k) snap.points(static_cast<Eigen::Index>(i), k) = row[static_cast<std::size_t>(k)].get<double>();
    }
    return snap;
}

void write_snapshot(const std::string& path, const PointMatrix& points, double t) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << serialize_snapshot(points, t);
}

CurveSnapshot read_snapshot(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open snapshot " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_snapshot(ss.str());
}

}  // namespace csf
