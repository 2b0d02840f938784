#include "csf/verify.hpp"

#include "csf/convexity.hpp"
#include "csf/curves.hpp"
#include "csf/flow.hpp"
#include "csf/geometry.hpp"
#include "csf/spherical.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>

namespace csf::verify {

namespace cv = csf::curves;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

Check make(std::string name, double measured, std::string relation, double tolerance, std::string note = {}) {
    Check c{std::move(name), false, measured, std::move(relation), tolerance, std::move(note)};
    if (c.relation == "<") c.passed = measured < tolerance;
    else if (c.relation == "<=") c.passed = measured <= tolerance;
    else if (c.relation == ">") c.passed = measured > tolerance;
    else if (c.relation == ">=") c.passed = measured >= tolerance;
    else if (c.relation == "==") c.passed = measured == tolerance;
    else throw std::logic_error("unknown relation " + c.relation);
    return c;
}

Check in_range(std::string name, double measured, double lo, double hi, std::string note = {}) {
    char rel[64];
    std::snprintf(rel, sizeof rel, "in [%.3g, %.3g]", lo, hi);
    Check c{std::move(name), measured >= lo && measured <= hi, measured, rel, hi, std::move(note)};
    return c;
}

std::string fmt(const char* pattern, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, pattern, a, b);
    return buf;
}

PointMatrix unit_tangents(const DiscreteCurve& c) { return arclength_derivative(c, 1).rowwise().normalized(); }

// Chord fields at t1 - m dt, t1, t1 + m dt with a fixed dt = h^2 / 4 and no
// redistribution. dt_rec = m dt, so it quarters when N doubles.
std::vector<ChordField> heat_window(const DiscreteCurve& c, double t1, int m, double* dt_rec) {
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

struct Trace {
    std::vector<AvoidanceSample> samples;
    std::vector<double> diam;
    StopReason reason = StopReason::MaxTime;
};

Trace avoidance_trace(const DiscreteCurve& c0, double t_end) {
    FlowParams p;
    p.stop_max_time = t_end;
    Trace tr;
    const auto r = evolve(c0, p, {}, [&](const FlowState& s) {
        tr.samples.push_back(avoidance_sample(s.curve, s.frenet.max_curvature(), s.t));
        tr.diam.push_back(diameter(s.curve));
    });
    tr.reason = r.report.reason;
    return tr;
}

std::vector<DiscreteCurve> spherical_fixtures(std::uint64_t seed0, std::size_t count, std::size_t n) {
    std::vector<DiscreteCurve> out;
    for (std::uint64_t s = 1; s <= count; ++s) out.push_back(cv::random_spherical(seed0 + s, n));
    return out;
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"frenet", "convexity", "projection", "lemma2",     "lemma3",
                                                   "lemma4", "schur",     "avoidance",  "sphericity", "family"};
    return names;
}

std::vector<Check> run_suite(const std::string& suite, const Options& o) {
    if (suite == "frenet") return frenet_suite(o);
    if (suite == "convexity") return convexity_suite(o);
    if (suite == "projection") return projection_suite(o);
    if (suite == "lemma2") return lemma2_suite(o);
    if (suite == "lemma3") return lemma3_suite(o);
    if (suite == "lemma4") return lemma4_suite(o);
    if (suite == "schur") return schur_suite(o);
    if (suite == "avoidance") return avoidance_suite(o);
    if (suite == "sphericity") return sphericity_suite(o);
    if (suite == "family") return family_suite(o);
    throw std::invalid_argument("unknown suite '" + suite + "'");
}

std::vector<Check> frenet_suite(const Options&) {
    std::vector<Check> out;
    // (r cos u, r sin u, c u): kappa = r/(r^2+c^2), tau = c/(r^2+c^2)
    for (const auto& [r, c] : {std::pair{1.0, 0.5}, std::pair{2.0, 1.0}}) {
        const std::size_t n = 1024;
        const auto h = cv::helix_loop(r, c, 2.0, n);
        const auto fd = frenet(h, 1e-8);
        const double kappa = r / (r * r + c * c), tau = c / (r * r + c * c);
        double ek = 0.0, et = 0.0;
        // skip the vertices next to the closing chord
        for (std::size_t i = 3; i + 3 < n; ++i) {
            ek = std::max(ek, std::abs(fd.curvature[static_cast<Eigen::Index>(i)] - kappa) / kappa);
            et = std::max(et, fd.torsion[i] ? std::abs(*fd.torsion[i] - tau) / tau : kInf);
        }
        const std::string tag = fmt("helix r=%g c=%g", r, c);
        out.push_back(make(tag + " curvature rel. error", ek, "<", 1e-3, fmt("kappa = %.6g", kappa)));
        out.push_back(make(tag + " torsion rel. error", et, "<", 1e-3, fmt("tau = %.6g", tau)));
    }
    const auto fd = frenet(cv::circle(2.0, 512));
    out.push_back(make("circle r=2 curvature error", (fd.curvature.array() - 0.5).abs().maxCoeff(), "<", 1e-4));
    return out;
}

std::vector<Check> convexity_suite(const Options&) {
    std::vector<Check> out;
    const auto c0 = cv::example1(512);
    const double tol = default_convexity_tolerance(c0);
    const auto initial = is_convex_space_curve(c0, tol);
    out.push_back(make("example1 initial 3D defect / tolerance", initial.max_defect / tol, "<=", 1.0));

    FlowParams p;
    p.stop_max_time = 0.05;
    double worst = 0.0, t_first = -1.0;
    evolve(c0, p, {}, [&](const FlowState& s) {
        const double tol_t = default_convexity_tolerance(s.curve);
        const double ratio = is_convex_space_curve(s.curve, tol_t).max_defect / tol_t;
        if (ratio > 10.0 && t_first < 0.0) t_first = s.t;
        worst = std::max(worst, ratio);
    });
    out.push_back(make("example1 3D defect / tolerance during run", worst, ">", 10.0,
                       t_first >= 0.0 ? fmt("first exceeded at t = %.3g", t_first) : std::string("never exceeded")));
    return out;
}

std::vector<Check> projection_suite(const Options&) {
    std::vector<Check> out;
    struct Fixture {
        std::string name;
        DiscreteCurve curve;
    };
    const std::size_t n = 512;
    std::vector<Fixture> fixtures;
    fixtures.push_back({"example1", cv::example1(n)});
    const double tilted[5][4] = {{1.5, 1.0, 0.3, 0.3}, {1.2, 1.0, 0.5, 0.2}, {2.0, 1.0, 0.2, 0.5}, {1.0, 1.0, 0.4, 0.1}, {1.8, 1.2, 0.25, 0.25}};
    for (const auto& t : tilted) {
        fixtures.push_back({fmt("tilted_convex a=%g b=%g", t[0], t[1]) + fmt(" z=%g tilt=%g", t[2], t[3]),
                            cv::tilted_convex(t[0], t[1], t[2], t[3], n)});
    }
    const Projection P = Projection::xy(3);
    FlowParams p;
    p.stop_max_time = 0.1;
    for (const auto& f : fixtures) {
        const auto d0 = convexity_defect(f.curve, P);
        out.push_back(make(f.name + " initial phi / diameter", d0.phi_max / diameter(f.curve), "<", 1e-6));
        // the hypothesis is regularity on all of [0, t]; steps after the first irregular one do not count
        double worst = 0.0, worst_all = 0.0;
        long regular = 0;
        bool holds = true;
        double t_lost = -1.0;
        evolve(f.curve, p, {}, [&](const FlowState& s) {
            const auto d = convexity_defect(s.curve, P);
            worst_all = std::max(worst_all, d.phi_max / diameter(s.curve));
            if (holds && !d.regular) {
                holds = false;
                t_lost = s.t;
            }
            if (!holds) return;
            ++regular;
            worst = std::max(worst, d.phi_max / diameter(s.curve));
        });
        std::string note = fmt("%.0f regular steps", static_cast<double>(regular));
        if (t_lost >= 0.0) note += fmt(", projection irregular from t = %.3g (max over all steps %.3g)", t_lost, worst_all);
        out.push_back(make(f.name + " max phi / diameter", worst, "<", 5e-3, note));
    }
    return out;
}

std::vector<Check> lemma2_suite(const Options& o) {
    std::mt19937_64 rng(0x1e2a + o.seed);
    std::normal_distribution<double> g(0.0, 1.0);
    const std::size_t target = 1000;
    std::size_t samples = 0, violations = 0;
    double min_dot = kInf;
    for (std::uint64_t seed = 1 + o.seed; samples < target && seed < 1000 + o.seed; ++seed) {
        const auto c = cv::random_space_curve(seed, 256);
        const double floor = default_kappa_floor(c);
        const auto fd = frenet(c, floor);
        // random orthonormal basis for the projection
        Eigen::Vector3d e1(g(rng), g(rng), g(rng));
        e1.normalize();
        Eigen::Vector3d e2(g(rng), g(rng), g(rng));
        e2 = (e2 - e2.dot(e1) * e1).normalized();
        const auto pf = projected_frame(c, fd, Projection(e1, e2), floor);
        std::uniform_int_distribution<std::size_t> pick(0, c.size() - 1);
        for (int tries = 0; tries < 40 && samples < target; ++tries) {
            const std::size_t i = pick(rng);
            if (fd.curvature[static_cast<Eigen::Index>(i)] <= 10 * floor || pf.curvature[i] <= 10 * floor) continue;
            if (pf.pt_norm[i] <= 0.1 || !pf.pn_dot_np[i]) continue;
            ++samples;
            min_dot = std::min(min_dot, *pf.pn_dot_np[i]);
            if (!(*pf.pn_dot_np[i] > 0.0)) ++violations;
        }
    }
    return {make("sampled vertices", static_cast<double>(samples), "==", static_cast<double>(target)),
            make("violations of <PN, N_P> > 0", static_cast<double>(violations), "==", 0.0, fmt("min <PN, N_P> = %.4g", min_dot))};
}

std::vector<Check> lemma3_suite(const Options& o) {
    std::vector<Check> out;
    double worst = kInf;
    std::size_t minima = 0, curves_with = 0;
    for (std::uint64_t s = 1; s <= 20; ++s) {
        const auto c = cv::random_waisted(s + o.seed, 512);
        const auto f = chord_field(c);
        const auto t = unit_tangents(c);
        const auto mins = chord_minima(f, 0.3 * f.length);
        if (!mins.empty()) ++curves_with;
        for (const auto& m : mins) {
            ++minima;
            worst = std::min(worst, tangent_collinearity(t, m.i, m.j));
        }
    }
    out.push_back(make("spherical fixtures min |<Ti,Tj>| at chord minima", minima ? worst : kInf, ">", 1 - 1e-3,
                       fmt("%.0f minima on %.0f of 20 curves", static_cast<double>(minima), static_cast<double>(curves_with))));

    const auto r4 = cv::remark4d(512);
    const auto f4 = chord_field(r4);
    const auto t4 = unit_tangents(r4);
    double best = kInf;
    std::size_t bi = 0, bj = 0;
    for (const auto& m : chord_minima(f4, 0.3 * f4.length)) {
        const double v = tangent_collinearity(t4, m.i, m.j);
        if (v < best) {
            best = v;
            bi = m.i;
            bj = m.j;
        }
    }
    const double du = 2 * kPi / 512;
    out.push_back(make("remark4d R^4 exception: min |<Ti,Tj>| at chord minima", best, "<", 1e-3,
                       fmt("at u = (%.3f, ", du * static_cast<double>(bi)) + fmt("%.3f)", du * static_cast<double>(bj))));
    return out;
}

std::vector<Check> lemma4_suite(const Options&) {
    std::vector<Check> out;
    std::vector<double> res;
    for (std::size_t n : {256u, 512u, 1024u}) {
        double dt_rec = 0.0;
        const auto w = heat_window(cv::circle(1.0, n), 0.1, 4, &dt_rec);
        res.push_back(heat_residual(w, dt_rec));
    }
    out.push_back(make("circle N=512 heat residual", res[1], "<", 0.05));
    out.push_back(in_range("residual ratio N=256 -> 512", res[1] / res[0], 0.35, 0.65, fmt("%.3e -> %.3e", res[0], res[1])));
    out.push_back(in_range("residual ratio N=512 -> 1024", res[2] / res[1], 0.35, 0.65, fmt("%.3e -> %.3e", res[1], res[2])));
    double dt_rec = 0.0;
    const auto w = heat_window(cv::baseball(0.5, 512), 0.02, 4, &dt_rec);
    out.push_back(make("baseball N=512 heat residual", heat_residual(w, dt_rec), "<", 0.1));
    return out;
}

std::vector<Check> schur_suite(const Options& o) {
    std::vector<Check> out;
    const double C = 2.0;
    const auto tight = chord_field(cv::circle(1.0 / C, 512));
    out.push_back(make("circle of radius 1/C |margin|", std::abs(schur_bound(tight, C)), "<", 1e-6));
    // antipodal vertices sit at arc pi/C
    double err = 0.0;
    for (Eigen::Index i = 0; i < 256; ++i) {
        err = std::max(err, std::abs(tight.values(i, i + 256) - 4 / (C * C)) / (4 / (C * C)));
    }
    out.push_back(make("chord at arc pi/C equals 4/C^2 (rel. error)", err, "<", 1e-12,
                       fmt("arc %.6f vs pi/C %.6f", tight.arc_distances(0, 256), kPi / C)));

    auto fixtures = spherical_fixtures(o.seed, 10, 256);
    fixtures.push_back(cv::baseball(0.5, 256));
    double worst = kInf;
    std::size_t rows = 0;
    for (const auto& c : fixtures) {
        const auto tr = avoidance_trace(c, 0.1);
        for (std::size_t k = 0; k < tr.samples.size(); ++k) {
            worst = std::min(worst, tr.samples[k].schur_margin / (tr.diam[k] * tr.diam[k]));
            ++rows;
        }
    }
    out.push_back(make("spherical runs min margin / diameter^2", worst, ">=", -1e-6,
                       fmt("%.0f recorded steps on %.0f runs", static_cast<double>(rows), static_cast<double>(fixtures.size()))));
    return out;
}

std::vector<Check> avoidance_suite(const Options& o) {
    struct Fixture {
        std::string name;
        DiscreteCurve curve;
    };
    std::vector<Fixture> fixtures;
    for (std::uint64_t s = 1; s <= 17; ++s) fixtures.push_back({fmt("random_spherical %.0f", static_cast<double>(s + o.seed)), cv::random_spherical(s + o.seed, 256)});
    for (double gap : {0.06, 0.09, 0.12}) fixtures.push_back({fmt("horseshoe gap %g", gap), cv::horseshoe(gap, 512)});

    double min_f = kInf, min_ratio = kInf;
    std::size_t flagged = 0;
    std::string worst_name;
    for (const auto& f : fixtures) {
        const auto tr = avoidance_trace(f.curve, 0.1);
        const double initial = tr.samples.front().min_f_on_D;
        for (const auto& s : tr.samples) {
            min_f = std::min(min_f, s.min_f_on_D);
            const double barrier = std::min(initial, 4.0 / (s.C_emp * s.C_emp));
            const double ratio = s.min_f_on_D / barrier;
            if (ratio < min_ratio) {
                min_ratio = ratio;
                worst_name = f.name;
            }
            if (s.self_intersect) ++flagged;
        }
    }
    return {make("min_f_on_D over all runs", min_f, ">", 0.0, fmt("%.0f curves", static_cast<double>(fixtures.size()))),
            make("min_f_on_D / min(initial, 4/C_emp^2)", min_ratio, ">=", 0.95, "worst: " + worst_name),
            make("self_intersect flags", static_cast<double>(flagged), "==", 0.0)};
}

std::vector<Check> sphericity_suite(const Options& o) {
    std::vector<Check> out;
    FlowParams p;
    p.stop_max_time = 0.15;
    const auto r = evolve(cv::baseball(0.5, 512), p, {std::make_shared<SphericityMonitor>()});
    const auto ts = r.report.series("t");
    const auto radius = r.report.series("sphere_radius");
    const auto rms = r.report.series("sphere_rms");
    double e4 = 0.0, e2 = 0.0, worst_rms = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        e4 = std::max(e4, std::abs(radius[k] / std::sqrt(1 - 4 * ts[k]) - 1));
        e2 = std::max(e2, std::abs(radius[k] / std::sqrt(1 - 2 * ts[k]) - 1));
        worst_rms = std::max(worst_rms, std::isnan(rms[k]) ? kInf : rms[k]);
    }
    out.push_back(make("baseball radius vs sqrt(1-4t) rel. error", e4, "<", 0.01, fmt("final R = %.5f at t = %.3f", radius.back(), ts.back())));
    out.push_back(make("baseball radius vs sqrt(1-2t) rel. error", e2, "<", 0.01, "supplementary"));
    out.push_back(make("baseball sphere rms", worst_rms, "<", 5e-3));

    double worst = 0.0;
    std::string reasons;
    FlowParams full;
    for (const auto& c : spherical_fixtures(o.seed, 10, 256)) {
        const auto run = evolve(c, full, {std::make_shared<SphericityMonitor>()});
        const auto rr = run.report.series("sphere_rms");
        const auto rad = run.report.series("sphere_radius");
        for (std::size_t k = 0; k < rr.size(); ++k) {
            if (std::isnan(rr[k])) continue;
            worst = std::max(worst, rr[k] / rad[k]);
        }
        if (reasons.find(to_string(run.report.reason)) == std::string::npos) reasons += (reasons.empty() ? "" : ",") + to_string(run.report.reason);
    }
    out.push_back(make("random spherical seeds 1-10 rms / radius", worst, "<", 5e-3, "stopped by " + reasons));
    return out;
}

std::vector<Check> family_suite(const Options&) {
    FlowParams p;
    const auto runs = evolve_family({cv::latitude(0.6, 256, 0.1, 3), cv::latitude(kPi - 0.9, 256, 0.15, 2)}, p, {},
                                    {std::make_shared<PairDistanceMonitor>(), std::make_shared<MutualSphereMonitor>()});
    const auto& rep = runs.front().report;
    double dmin = kInf, dev = 0.0;
    for (double d : rep.series("pair_min_dist")) dmin = std::min(dmin, std::isnan(d) ? -kInf : d);
    for (double d : rep.series("mutual_sphere_dev")) {
        if (!std::isnan(d)) dev = std::max(dev, d);
    }
    return {make("pair min distance over run", dmin, ">", 0.0,
                 fmt("until t = %.4f", rep.final_t) + " (" + to_string(rep.reason) + ")"),
            make("mutual sphere deviation", dev, "<", 5e-3)};
}

std::string format(const Check& c) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.4g", c.measured);
    std::string line = std::string(c.passed ? "[PASS] " : "[FAIL] ") + c.name + ": measured " + buf;
    if (c.relation.rfind("in", 0) == 0) {
        line += " (" + c.relation + ")";
    } else {
        std::snprintf(buf, sizeof buf, "%.4g", c.tolerance);
        line += " (" + c.relation + " " + buf + ")";
    }
    if (!c.note.empty()) line += " " + c.note;
    return line;
}

bool report(const std::vector<Check>& checks, std::ostream& out) {
    bool all = true;
    for (const auto& c : checks) {
        out << format(c) << '\n';
        all = all && c.passed;
    }
    return all;
}

}  // namespace csf::verify
