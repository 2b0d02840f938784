#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "csf/curves.hpp"
#include "csf/geometry.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace csf;
namespace cv = csf::curves;

namespace {

constexpr double kPi = std::numbers::pi;

// Adaptive Simpson quadrature; test-only oracle.
template <class F>
double simpson(F f, double a, double b, double eps, int depth = 40) {
    auto rec = [&](auto&& self, double lo, double hi, double flo, double fmid, double fhi, double whole, double tol,
                   int d) -> double {
        const double mid = 0.5 * (lo + hi);
        const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
        const double flm = f(lm), frm = f(rm);
        const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
        const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
        if (d <= 0 || std::abs(left + right - whole) <= 15.0 * tol) return left + right + (left + right - whole) / 15.0;
        return self(self, lo, mid, flo, flm, fmid, left, 0.5 * tol, d - 1) +
               self(self, mid, hi, fmid, frm, fhi, right, 0.5 * tol, d - 1);
    };
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    return rec(rec, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), eps, depth);
}

DiscreteCurve skewed_circle(double r, std::size_t n) {
    PointMatrix pts(static_cast<Eigen::Index>(n), 3);
    for (std::size_t k = 0; k < n; ++k) {
        const double th = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
        const double u = th + 0.3 * std::sin(th);
        pts.row(static_cast<Eigen::Index>(k)) << r * std::cos(u), r * std::sin(u), 0.0;
    }
    return DiscreteCurve(std::move(pts));
}

bool is_helical_vertex(std::size_t i, std::size_t n) { return i >= 3 && i + 3 < n; }

}  // namespace

TEST_CASE("curve validation") {
    CHECK_THROWS_AS(DiscreteCurve{PointMatrix(PointMatrix::Zero(5, 3))}, InvalidCurve);
    PointMatrix pts = cv::circle(1.0, 16).points();
    pts.row(3) = pts.row(4);
    CHECK_THROWS_AS(DiscreteCurve{pts}, InvalidCurve);
    const DiscreteCurve c = cv::circle(1.0, 16);
    CHECK(c.point(-1) == c.point(15));
    CHECK(c.point(16) == c.point(0));
}

TEST_CASE("second arclength derivative on circles") {
    const auto c = cv::circle(1.0, 256);
    const auto d2 = arclength_derivative(c, 2);
    for (Eigen::Index i = 0; i < d2.rows(); ++i) {
        CHECK(std::abs(d2.row(i).norm() - 1.0) < 1e-3);
        CHECK((d2.row(i) + c.points().row(i)).norm() < 1e-3);  // points to the center
    }

    // Nearly straight: radius 1e3 arc curvature.
    const auto big = cv::circle(1e3, 256);
    const auto d2big = arclength_derivative(big, 2);
    for (Eigen::Index i = 0; i < d2big.rows(); ++i) CHECK(std::abs(d2big.row(i).norm() - 1e-3) < 1e-9);

    CHECK_THROWS_AS(arclength_derivative(c, 3), std::invalid_argument);
}

TEST_CASE("first arclength derivative has unit magnitude to second order") {
    const auto c = skewed_circle(1.0, 512);
    const auto d1 = arclength_derivative(c, 1);
    for (Eigen::Index i = 0; i < d1.rows(); ++i) CHECK(std::abs(d1.row(i).norm() - 1.0) < 1e-3);
}

TEST_CASE("helix curvature and torsion match the analytic frame") {
    // (cos u, sin u, u/2): kappa = r/(r^2+c^2) = 0.8, tau = c/(r^2+c^2) = 0.4.
    const std::size_t n = 512;
    const auto h = cv::helix_loop(1.0, 0.5, 2.0, n);
    const auto fd = frenet(h, 1e-8);
    for (std::size_t i = 0; i < n; ++i) {
        if (!is_helical_vertex(i, n)) continue;
        CHECK(std::abs(fd.curvature[static_cast<Eigen::Index>(i)] - 0.8) < 1e-3);
        REQUIRE(fd.torsion[i].has_value());
        CHECK(std::abs(*fd.torsion[i] - 0.4) < 1e-3);
    }
}

TEST_CASE("frenet on the unit circle") {
    const auto c = cv::circle(1.0, 256);
    const auto fd = frenet(c, 1e-8);
    CHECK(std::abs(fd.total_length - 2.0 * kPi) < 1e-3);
    for (std::size_t i = 0; i < fd.size(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        CHECK(std::abs(fd.curvature[k] - 1.0) < 1e-3);
        const auto n = fd.normal_at(i);
        REQUIRE(n.has_value());
        CHECK((*n + c.points().row(k).transpose()).norm() < 1e-3);
        const auto b = fd.binormal_at(i);
        REQUIRE(b.has_value());
        CHECK((*b - Eigen::Vector3d::UnitZ()).norm() < 1e-12);
        REQUIRE(fd.torsion[i].has_value());
        CHECK(std::abs(*fd.torsion[i]) < 1e-3);
    }
}

TEST_CASE("stadium flats carry no normal") {
    const double flat = 2.0, r = 1.0;
    const std::size_t n = 256;
    const auto s = cv::stadium(flat, r, n);
    const auto fd = frenet(s, 1e-6);
    const double length = 2.0 * flat + 2.0 * kPi * r;
    std::size_t flat_vertices = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double arc = length * static_cast<double>(i) / static_cast<double>(n);
        const double h = length / static_cast<double>(n);
        // interior of the first straight segment, both neighbours on it
        if (arc > h && arc < flat - h) {
            ++flat_vertices;
            CHECK_FALSE(fd.has_normal[i]);
            CHECK_FALSE(fd.normal_at(i).has_value());
            CHECK_FALSE(fd.torsion[i].has_value());
        }
    }
    CHECK(flat_vertices > 10);
}

TEST_CASE("frenet data invariants") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto c = cv::random_space_curve(seed, 400);
        const auto fd = frenet(c);
        const double kmax = fd.max_curvature();
        for (std::size_t i = 0; i < fd.size(); ++i) {
            const auto k = static_cast<Eigen::Index>(i);
            CHECK(std::abs(fd.tangent.row(k).norm() - 1.0) < 1e-12);
            CHECK(std::abs(fd.curvature[k] - fd.curvature_vector.row(k).norm()) < 1e-12);
            if (!fd.has_normal[i]) continue;
            const Eigen::VectorXd nn = *fd.normal_at(i);
            CHECK((fd.curvature_vector.row(k).transpose() - fd.curvature[k] * nn).norm() < 1e-9 * kmax);
            CHECK(std::abs(fd.tangent.row(k).dot(nn.transpose())) < 1e-2);
            const Eigen::Vector3d t = fd.tangent.row(k).transpose();
            const Eigen::Vector3d b = *fd.binormal_at(i);
            CHECK(std::abs(b.norm() - 1.0) < 1e-12);
            CHECK(std::abs(b.dot(t)) < 1e-12);
            CHECK(t.cross(Eigen::Vector3d(nn)).dot(b) > 0.0);
        }
    }
}

TEST_CASE("curvature converges at second order on nonuniform circles") {
    for (double r : {0.5, 1.0, 2.0}) {
        double prev_err = 0.0;
        for (std::size_t n : {128u, 256u, 512u}) {
            const auto d2 = arclength_derivative(skewed_circle(r, n), 2);
            double err = 0.0;
            for (Eigen::Index i = 0; i < d2.rows(); ++i) err = std::max(err, std::abs(d2.row(i).norm() - 1.0 / r));
            if (prev_err > 0.0) CHECK(std::log2(prev_err / err) >= 1.9);
            prev_err = err;
        }
    }
}

TEST_CASE("curvature is invariant under rigid motions") {
    const auto c = cv::random_space_curve(7, 300);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0.0, 1.0);
    const Eigen::Matrix3d rot = Eigen::Quaterniond(g(rng), g(rng), g(rng), g(rng)).normalized().toRotationMatrix();
    const Eigen::RowVector3d shift(3.0, -1.0, 0.5);
    PointMatrix moved = (c.points() * rot.transpose()).rowwise() + shift;
    const auto a = frenet(c), b = frenet(DiscreteCurve(moved));
    CHECK((a.curvature - b.curvature).cwiseAbs().maxCoeff() < 1e-12 * a.max_curvature());
}

TEST_CASE("resample_uniform") {
    SUBCASE("circle 256 -> 128 has equal edges") {
        const auto c = cv::circle(1.0, 256);
        const auto r = resample_uniform(c, 128);
        REQUIRE(r.size() == 128);
        CHECK(r.point(0) == c.point(0));
        const double e0 = r.edge_length(0);
        for (std::size_t i = 0; i < r.size(); ++i) CHECK(std::abs(r.edge_length(static_cast<std::ptrdiff_t>(i)) - e0) < 1e-12);
    }
    SUBCASE("idempotent on uniform input") {
        const auto c = cv::circle(1.0, 256);
        const auto r = resample_uniform(c, 256);
        CHECK((r.points() - c.points()).cwiseAbs().maxCoeff() < 1e-12);
        const auto rr = resample_uniform(resample_uniform(cv::ellipse(2.0, 1.0, 200, 0.4), 200), 200);
        const auto r2 = resample_uniform(rr, 200);
        CHECK((r2.points() - rr.points()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(std::abs(total_length(r2) - total_length(rr)) < 1e-10 * total_length(rr));
    }
    SUBCASE("nonuniform ellipse becomes equispaced") {
        const auto e = cv::ellipse(2.0, 1.0, 256, 0.5);
        const auto r = resample_uniform(e, 256);
        double mean = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i) mean += r.edge_length(static_cast<std::ptrdiff_t>(i));
        mean /= static_cast<double>(r.size());
        double var = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i) var += std::pow(r.edge_length(static_cast<std::ptrdiff_t>(i)) - mean, 2);
        var /= static_cast<double>(r.size());
        CHECK(var < 1e-20);
        // Output stays on the input polyline: cutting corners can only shorten it.
        CHECK(total_length(r) <= total_length(e));
        CHECK(total_length(r) > (1.0 - 1e-3) * total_length(e));
    }
    CHECK_THROWS_AS(resample_uniform(cv::circle(1.0, 64), 4), std::invalid_argument);
}

TEST_CASE("length and diameter") {
    const auto c = cv::circle(1.0, 256);
    CHECK(std::abs(total_length(c) - 2.0 * kPi) < 1e-3);
    CHECK(std::abs(diameter(c) - 2.0) < 1e-3);

    // Example 1 length against quadrature of |X0'(u)|.
    const auto k = cv::example1_constants();
    auto speed = [&](double u) {
        const double dphase = 3.0 * k.a * u * u + k.b;
        const double dz = std::cos(u) - std::cos(2.0 * u);
        return std::sqrt(dphase * dphase + dz * dz);
    };
    const double exact = simpson(speed, -kPi, kPi, 1e-12);
    CHECK(std::abs(exact - 15.2186165) < 1e-6);
    const double poly = total_length(cv::example1(4096));
    CHECK(std::abs(poly - exact) / exact < 1e-5);
    CHECK(poly < exact);
}

TEST_CASE("snapshot round trip is bit exact") {
    const auto c = cv::random_space_curve(11, 64);
    const double t = 0.1234567890123456789;
    const auto text = serialize_snapshot(c.points(), t);
    const auto snap = parse_snapshot(text);
    CHECK(snap.t == t);
    REQUIRE(snap.points.rows() == c.points().rows());
    CHECK((snap.points.array() == c.points().array()).all());
    CHECK(serialize_snapshot(snap.points, snap.t) == text);
    CHECK_THROWS(parse_snapshot(R"({"dim": 3, "t": 0, "points": [[1, 2]]})"));
}
