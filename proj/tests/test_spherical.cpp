#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "csf/curves.hpp"
#include "csf/geometry.hpp"
#include "csf/spherical.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace csf;
namespace cv = csf::curves;

namespace {

constexpr double kPi = std::numbers::pi;

// Chord fields at t1 - m dt, t1, t1 + m dt, fixed dt, no redistribution.
std::vector<ChordField> window(const DiscreteCurve& c, double t1, int m, double* dt_rec) {
    FlowParams p;
    p.redistribution_every = 1 << 30;
    FlowState s = FlowState::initial(resample_uniform(c, c.size()), p);
    const double dt = 0.25 * std::pow(min_edge_length(s.curve), 2);
    const long steps = std::lround(t1 / dt);
    for (long k = 0; k < steps - m; ++k) s = step(s, p, dt);
    std::vector<ChordField> out;
    for (int rep = 0; rep < 3; ++rep) {
        out.push_back(chord_field(s.curve));
        if (rep < 2) {
            for (int k = 0; k < m; ++k) s = step(s, p, dt);
        }
    }
    *dt_rec = m * dt;
    return out;
}

}  // namespace

TEST_CASE("fit_sphere") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g(0.0, 1.0);
    const Eigen::RowVector3d center(1, 2, 3);
    PointMatrix pts(64, 3), noisy(64, 3);
    for (int k = 0; k < 64; ++k) {
        const Eigen::RowVector3d d = Eigen::RowVector3d(g(rng), g(rng), g(rng)).normalized();
        pts.row(k) = center + 2.0 * d;
        noisy.row(k) = center + (2.0 + 1e-4 * g(rng)) * d;
    }
    const auto fit = fit_sphere(pts);
    CHECK((fit.center.transpose() - center).norm() < 1e-10);
    CHECK(fit.radius == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fit.rms_deviation < 1e-10);

    const auto nf = fit_sphere(noisy);
    CHECK(nf.rms_deviation == doctest::Approx(1e-4).epsilon(0.3));

    // curve input, 1e-4 radial noise
    PointMatrix bb = cv::baseball(0.5, 512).points();
    for (Eigen::Index k = 0; k < bb.rows(); ++k) bb.row(k) *= 1.0 + 1e-4 * g(rng);
    CHECK(fit_sphere(DiscreteCurve(bb)).rms_deviation == doctest::Approx(1e-4).epsilon(0.2));

    try {
        fit_sphere(cv::circle(1.0, 64));
        FAIL("expected DegenerateGeometry");
    } catch (const DegenerateGeometry& e) {
        CHECK(e.kind() == DegenerateGeometry::Kind::Coplanar);
    }
}

TEST_CASE("chord field") {
    const auto oct = cv::circle(1.0, 8);
    const auto f8 = chord_field(oct);
    CHECK(f8.values(0, 4) == doctest::Approx(4.0).epsilon(1e-15));

    const auto c = cv::random_space_curve(4, 200);
    const auto f = chord_field(c);
    CHECK(f.values == f.values.transpose());
    CHECK(f.arc_distances == f.arc_distances.transpose());
    CHECK(f.values.diagonal().isZero(0.0));
    const double diam = diameter(c);
    CHECK(f.values.maxCoeff() <= diam * diam * (1 + 1e-15));

    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> pick(0, 199);
    const double len = total_length(c);
    for (int k = 0; k < 20; ++k) {
        const int i = pick(rng), j = pick(rng);
        CHECK(f.values(i, j) == doctest::Approx((c.point(i) - c.point(j)).squaredNorm()).epsilon(1e-15));
        // arc along increasing index, then the shorter side
        double along = 0.0;
        for (int m = std::min(i, j); m < std::max(i, j); ++m) along += c.edge_length(m);
        CHECK(f.arc_distances(i, j) == doctest::Approx(std::min(along, len - along)).epsilon(1e-12));
    }
}

TEST_CASE("chord minima") {
    SUBCASE("circle: no interior minima") {
        // f = 2(1 - cos theta) grows with the arc, so antipodes are maxima.
        const auto f = chord_field(cv::circle(1.0, 128));
        CHECK(chord_minima(f, 0.3 * f.length).empty());
    }
    SUBCASE("waisted curve: minimum at the waist") {
        // Oracle: minimum of f over the two waist regions at 8x resolution.
        const std::size_t n = 256, fine = 2048;
        const auto c = cv::random_waisted(3, n);
        const auto f = chord_field(c);
        const auto mins = chord_minima(f, 0.3 * f.length);
        REQUIRE(mins.size() == 1);
        const auto cf = cv::random_waisted(3, fine);
        const auto ff = chord_field(cf);
        const auto fine_mins = chord_minima(ff, 0.3 * ff.length);
        REQUIRE(fine_mins.size() == 1);
        CHECK(mins[0].f == doctest::Approx(fine_mins[0].f).epsilon(1e-3));
        CHECK(std::abs(static_cast<double>(mins[0].i) * 8 - static_cast<double>(fine_mins[0].i)) <= 16);
        CHECK(std::abs(static_cast<double>(mins[0].j) * 8 - static_cast<double>(fine_mins[0].j)) <= 16);
    }
    SUBCASE("remark4d: minima exist and tangents are not collinear") {
        const auto c = cv::remark4d(512);
        const auto f = chord_field(c);
        const auto mins = chord_minima(f, 0.3 * f.length);
        REQUIRE(mins.size() == 2);
        const PointMatrix t = arclength_derivative(c, 1).rowwise().normalized();
        for (const auto& m : mins) {
            CHECK(m.strict);
            CHECK(tangent_collinearity(t, m.i, m.j) == doctest::Approx(0.4045).epsilon(1e-2));
        }
        // (pi/2, 3pi/2) is not among them: f decreases in some direction
        bool found = false;
        for (const auto& m : mins) found |= (m.i == 128 && m.j == 384);
        CHECK_FALSE(found);
    }
    CHECK_THROWS_AS(chord_minima(chord_field(cv::circle(1.0, 16)), 0.0), std::invalid_argument);
}

TEST_CASE("tangents at chord minima of spherical curves are collinear") {
    std::size_t minima = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto c = cv::random_waisted(seed, 512);
        const auto f = chord_field(c);
        const PointMatrix t = arclength_derivative(c, 1).rowwise().normalized();
        for (const auto& m : chord_minima(f, 0.3 * f.length)) {
            ++minima;
            CHECK(tangent_collinearity(t, m.i, m.j) > 1 - 1e-3);
        }
    }
    CHECK(minima >= 15);
    for (double gap : {0.12, 0.06, 0.03}) {
        const auto c = cv::horseshoe(gap, 1024);
        const auto f = chord_field(c);
        const PointMatrix t = arclength_derivative(c, 1).rowwise().normalized();
        for (const auto& m : chord_minima(f, 0.3 * f.length)) CHECK(tangent_collinearity(t, m.i, m.j) > 1 - 1e-3);
    }
    CHECK(tangent_collinearity(cv::circle(1.0, 32), 5, 5) == 1.0);
}

TEST_CASE("heat residual") {
    SUBCASE("shrinking circle") {
        double dt_rec = 0.0;
        const auto w = window(cv::circle(1.0, 512), 0.1, 4, &dt_rec);
        CHECK(heat_residual(w, dt_rec, 64) < 0.05);
        CHECK(heat_residual(w, dt_rec) < 0.05);
    }
    SUBCASE("static circle is a pure spatial check") {
        // d_t f = 0 and the stencil Laplacian of 2(1 - cos theta) is 4 cos theta,
        // so the residual is max 4 (1 - cos theta) = 8 at antipodes.
        const auto f = chord_field(cv::circle(1.0, 16));
        const std::vector<ChordField> same = {f, f, f};
        CHECK(heat_residual(same, 1.0, 5000) == doctest::Approx(8.0).epsilon(1e-9));
    }
    SUBCASE("spherical curve mid-run") {
        double dt_rec = 0.0;
        const auto w = window(cv::baseball(0.5, 512), 0.02, 4, &dt_rec);
        CHECK(heat_residual(w, dt_rec) < 0.1);
    }
    const auto f = chord_field(cv::circle(1.0, 16));
    const std::vector<ChordField> two = {f, f};
    CHECK_THROWS_AS(heat_residual(two, 1.0), std::invalid_argument);
    const std::vector<ChordField> mixed = {f, f, chord_field(cv::circle(1.0, 20))};
    CHECK_THROWS_AS(heat_residual(mixed, 1.0), std::invalid_argument);
}

TEST_CASE("schur bound") {
    const double c = 2.0;
    const auto tight = chord_field(cv::circle(1.0 / c, 512));
    CHECK(std::abs(schur_bound(tight, c)) < 1e-6);
    CHECK(schur_bound(chord_field(cv::circle(1.0, 512)), 1.5) >= 0.0);

    // the bound at arc pi/C is 4/C^2
    ChordField probe;
    probe.vertex_count = 2;
    probe.values = Eigen::MatrixXd::Zero(2, 2);
    probe.arc_distances = Eigen::MatrixXd::Zero(2, 2);
    probe.arc_distances(0, 1) = probe.arc_distances(1, 0) = kPi / c;
    CHECK(schur_bound(probe, c) == doctest::Approx(-4.0 / (c * c)).epsilon(1e-15));

    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto curve = cv::random_spherical(seed, 256);
        const double diam = diameter(curve);
        CHECK(schur_bound(chord_field(curve), kCurvatureHeadroom * frenet(curve).max_curvature()) >= -1e-6 * diam * diam);
    }
    CHECK_THROWS_AS(schur_bound(tight, 0.0), std::invalid_argument);
}

TEST_CASE("avoidance sample") {
    const auto c = cv::random_spherical(6, 256);
    const double kmax = frenet(c).max_curvature();
    const auto s = avoidance_sample(c, kmax, 0.5);
    CHECK(s.t == 0.5);
    CHECK(s.C_emp == doctest::Approx(1.1 * kmax));
    CHECK_FALSE(s.self_intersect);

    // Oracle from the stored field.
    const auto f = chord_field(c);
    const double reach = kPi / s.C_emp;
    double min_d = 1e300;
    for (Eigen::Index i = 0; i < 256; ++i)
        for (Eigen::Index j = i + 1; j < 256; ++j)
            if (f.arc_distances(i, j) >= reach) min_d = std::min(min_d, f.values(i, j));
    CHECK(s.min_f_on_D == doctest::Approx(min_d).epsilon(1e-12));
    CHECK(s.schur_margin == doctest::Approx(schur_bound(f, s.C_emp)).epsilon(1e-9).scale(1e-12));

    // planar figure eight: the crossing vertices coincide
    PointMatrix eight(200, 3);
    for (int k = 0; k < 200; ++k) {
        const double u = 2 * kPi * k / 200;
        eight.row(k) << std::sin(u), std::sin(u) * std::cos(u), 0.0;
    }
    const DiscreteCurve e{eight};
    CHECK(avoidance_sample(e, frenet(e).max_curvature()).self_intersect);
}

TEST_CASE("monitors") {
    FlowParams p;
    p.stop_max_time = 0.02;
    const auto r = evolve(cv::baseball(0.5, 256), p, {std::make_shared<AvoidanceMonitor>(), std::make_shared<SphericityMonitor>()});
    REQUIRE(r.report.has_column("min_f_D"));
    for (double v : r.report.series("min_f_D")) CHECK(v > 0.0);
    for (double v : r.report.series("self_intersect")) CHECK(v == 0.0);
    for (double v : r.report.series("sphere_rms")) CHECK(v < 5e-3);
    const auto ts = r.report.series("t");
    const auto radius = r.report.series("sphere_radius");
    for (std::size_t k = 0; k < ts.size(); ++k) CHECK(radius[k] == doctest::Approx(std::sqrt(1 - 2 * ts[k])).epsilon(1e-3));

    // planar input: absent samples, the run still completes
    const auto planar = evolve(cv::circle(1.0, 64), p, {std::make_shared<SphericityMonitor>()});
    CHECK(planar.report.reason == StopReason::MaxTime);
    for (double v : planar.report.series("sphere_rms")) CHECK(std::isnan(v));
}

TEST_CASE("family on one sphere") {
    // inner vertices face the midpoints of the outer chords
    CHECK(min_pair_distance(cv::circle(1.0, 64), cv::circle(2.0, 64)) == doctest::Approx(std::cos(kPi / 64)).epsilon(1e-14));

    FlowParams p;
    p.stop_max_time = 0.1;
    const auto out = evolve_family({cv::latitude(0.6, 256, 0.1, 3), cv::latitude(kPi - 0.9, 256, 0.15, 2)}, p, {},
                                   {std::make_shared<PairDistanceMonitor>(), std::make_shared<MutualSphereMonitor>()});
    for (double d : out[0].report.series("pair_min_dist")) CHECK(d > 0.0);
    for (double d : out[0].report.series("mutual_sphere_dev")) CHECK(d < 5e-3);
}
