#include "csf/curves.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace csf::curves {

namespace {

constexpr double kPi = std::numbers::pi;

double param_at(std::size_t k, std::size_t n) { return 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n); }

Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::Quaterniond q(normal(rng), normal(rng), normal(rng), normal(rng));
    q.normalize();
    return q.toRotationMatrix();
}

Eigen::Vector3d on_sphere(double polar, double azimuth, double radius) {
    return radius * Eigen::Vector3d(std::cos(azimuth) * std::sin(polar), std::sin(azimuth) * std::sin(polar), std::cos(polar));
}

void require_samples(std::size_t n, std::size_t minimum, const char* what) {
    if (n < minimum) {
        throw std::invalid_argument(std::string(what) + ": needs at least " + std::to_string(minimum) + " samples");
    }
}

}  // namespace

Example1Constants example1_constants() {
    const double pi2 = kPi * kPi;
    const double pi3 = pi2 * kPi;
    return {(kPi + 2.0) / (2.0 * (1.0 - pi2)), (pi3 + 2.0) / (2.0 * (pi2 - 1.0)), std::sqrt((pi3 + 2.0) / (kPi + 2.0))};
}

DiscreteCurve example1(std::size_t n) {
    require_samples(n, 64, "example1");
    const auto c = example1_constants();
    PointMatrix pts(static_cast<Eigen::Index>(n), 3);
    for (std::size_t k = 0; k < n; ++k) {
        const double u = -kPi + param_at(k, n);
        const double phase = c.a * u * u * u + c.b * u;
        pts.row(static_cast<Eigen::Index>(k)) << std::cos(phase), std::sin(phase), std::sin(u) - 0.5 * std::sin(2.0 * u);
    }
    return DiscreteCurve(std::move(pts));
}

Vector remark4d_point(double u) {
    const double cc = std::cos(std::cos(u));
    const double s2 = std::sin(2.0 * u);
    const double half = 0.5 * std::sin(u);
    Vector p(4);
    p << std::sin(std::cos(u)), cc * std::sin(s2), cc * std::cos(s2) * std::cos(half), cc * std::cos(s2) * std::sin(half);
    return p;
}

Vector remark4d_tangent(double u) {
    // Analytic derivative of remark4d_point, normalized.
    const double c = std::cos(u), s = std::sin(u);
    const double cc = std::cos(c), sc = std::sin(c);
    const double s2 = std::sin(2.0 * u), c2 = std::cos(2.0 * u);
    const double ss2 = std::sin(s2), cs2 = std::cos(s2);
    const double half = 0.5 * s;
    const double dcc = sc * s;                  // d/du cos(cos u)
    const double ds2 = 2.0 * c2;                // d/du sin 2u
    const double dhalf = 0.5 * c;
    Vector d(4);
    d[0] = -s * cc;
    d[1] = dcc * ss2 + cc * cs2 * ds2;
    const double g = cc * cs2;
    const double dg = dcc * cs2 - cc * ss2 * ds2;
    d[2] = dg * std::cos(half) - g * std::sin(half) * dhalf;
    d[3] = dg * std::sin(half) + g * std::cos(half) * dhalf;
    return d.normalized();
}

DiscreteCurve remark4d(std::size_t n) {
    require_samples(n, 128, "remark4d");
    PointMatrix pts(static_cast<Eigen::Index>(n), 4);
    for (std::size_t k = 0; k < n; ++k) pts.row(static_cast<Eigen::Index>(k)) = remark4d_point(param_at(k, n)).transpose();
    return DiscreteCurve(std::move(pts));
}

DiscreteCurve circle(double r, std::size_t n, const Vector& center, const Vector& e1, const Vector& e2) {
    if (!(r > 0)) throw std::invalid_argument("circle: radius must be positive");
    if (center.size() != e1.size() || e1.size() != e2.size()) throw std::invalid_argument("circle: dimension mismatch");
    PointMatrix pts(static_cast<Eigen::Index>(n), center.size());
    for (std::size_t k = 0; k < n; ++k) {
        const double u = param_at(k, n);
        pts.row(static_cast<Eigen::Index>(k)) = (center + r * (std::cos(u) * e1 + std::sin(u) * e2)).transpose();
    }
    return DiscreteCurve(std::move(pts));
}

DiscreteCurve circle(double r, std::size_t n) {
    return circle(r, n, Vector::Zero(3), Vector::Unit(3, 0), Vector::Unit(3, 1));
}

DiscreteCurve helix_loop(double r, double c, double turns, std::size_t n) {
    PointMatrix pts(static_cast<Eigen::Index>(n), 3);
    const double span = 2.0 * kPi * turns;
    for (std::size_t k = 0; k < n; ++k) {
        const double u = span * static_cast<double>(k) / static_cast<double>(n);
        pts.row(static_cast<Eigen::Index>(k)) << r * std::cos(u), r * std::sin(u), c * u;
    }
    return DiscreteCurve(std::move(pts));
}

DiscreteCurve ellipse(double a, double b, std::size_t n, double skew) {
    PointMatrix pts(static_cast<Eigen::Index>(n), 3);
    for (std::size_t k = 0; k < n; ++k) {
        const double th = param_at(k, n);
        const double u = th + skew * std::sin(th);
        pts.row(static_cast<Eigen::Index>(k)) << a * std::cos(u), b * std::sin(u), 0.0;
    }
    return DiscreteCurve(std::move(pts));
}

DiscreteCurve stadium(double flat, double r, std::size_t n) {
    const double arc = kPi * r;
    const double length = 2.0 * flat + 2.0 * arc;
    PointMatrix pts(static_cast<Eigen::Index>(n), 3);
    for (std::size_t k = 0; k < n; ++k) {
        double s = length * static_cast<double>(k) / static_cast<double>(n);
        Eigen::Vector3d p;
        if (s < flat) {
            p << -0.5 * flat + s, -r, 0.0;
        } else if ((s -= flat) < arc) {
            const double phi = -0.5 * kPi + s / r;
            p << 0.5 * flat + r * std::cos(phi), r * std::sin(phi), 0.0;
        } else if ((s -= arc) < flat) {
            p << 0.5 * flat - s, r, 0.0;
        } else {
            s -= flat;
            const double phi = 0.5 * kPi + s / r;
            p << -0.5 * flat + r * std::cos(phi), r * std::sin(phi), 0.0;
        }
        pts.row(static_cast<Eigen::Index>(k)) = p.transpose();
    }
    return DiscreteCurve(std::move(pts));
}

DiscreteCurve latitude(double beta, std::size_t n, double wobble, int lobes, double radius) {
    PointMatrix pts(static_cast<Eigen::Index>(n), 3);
    for (std::size_t k = 0; k < n; ++k) {
        const double u = param_at(k, n);
        pts.row(static_cast<Eigen::Index>(k)) = on_sphere(beta + wobble * std::sin(lobes * u), u, radius).transpose();
    }
    return DiscreteCurve(std::move(pts));
}

DiscreteCurve baseball(double amplitude, std::size_t n, int lobes, double radius) {
    return latitude(0.5 * kPi, n, amplitude, lobes, radius);
}

DiscreteCurve random_spherical(std::uint64_t seed, std::size_t n, double amplitude, double radius) {
    for (int attempt = 0; attempt < 100; ++attempt) {
        std::mt19937_64 rng(seed * 1000003ULL + static_cast<std::uint64_t>(attempt));
        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        constexpr int kHarmonics = 6;
        Eigen::Matrix<double, 3, kHarmonics> cos_coef, sin_coef;
        for (int k = 0; k < kHarmonics; ++k) {
            const double scale = amplitude / ((k + 1.0) * (k + 1.0));
            for (int d = 0; d < 3; ++d) {
                cos_coef(d, k) = scale * unif(rng);
                sin_coef(d, k) = scale * unif(rng);
            }
        }
        const Eigen::Matrix3d rot = random_rotation(rng);
        PointMatrix pts(static_cast<Eigen::Index>(n), 3);
        for (std::size_t i = 0; i < n; ++i) {
            const double u = param_at(i, n);
            Eigen::Vector3d g(std::cos(u), std::sin(u), 0.0);
            for (int k = 0; k < kHarmonics; ++k) {
                g += cos_coef.col(k) * std::cos((k + 1) * u) + sin_coef.col(k) * std::sin((k + 1) * u);
            }
            pts.row(static_cast<Eigen::Index>(i)) = (radius * rot * g.normalized()).transpose();
        }
        try {
            DiscreteCurve curve(std::move(pts));
            if (is_simple(curve)) return curve;
        } catch (const InvalidCurve&) {
            // collapsed edge: treat like a self-intersecting draw
        }
    }
    throw std::runtime_error("random_spherical: no simple curve after 100 attempts (seed " + std::to_string(seed) + ")");
}

DiscreteCurve random_waisted(std::uint64_t seed, std::size_t n) {
    for (int attempt = 0; attempt < 100; ++attempt) {
        std::mt19937_64 rng(seed * 1000003ULL + static_cast<std::uint64_t>(attempt));
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        const double size = 0.5 + 0.3 * unif(rng);
        const double pinch = 0.3 + 0.15 * unif(rng);
        double wiggle[3][2];
        for (auto& w : wiggle) {
            w[0] = 0.03 * (2.0 * unif(rng) - 1.0);
            w[1] = 2.0 * kPi * unif(rng);
        }
        const Eigen::Matrix3d rot = random_rotation(rng);
        PointMatrix pts(static_cast<Eigen::Index>(n), 3);
        for (std::size_t i = 0; i < n; ++i) {
            const double th = param_at(i, n);
            double r = 1.0 + pinch * std::cos(2.0 * th);
            for (int k = 0; k < 3; ++k) r += wiggle[k][0] * std::cos((k + 3) * th + wiggle[k][1]);
            pts.row(static_cast<Eigen::Index>(i)) = (rot * on_sphere(size * r, th, 1.0)).transpose();
        }
        try {
            DiscreteCurve curve(std::move(pts));
            if (is_simple(curve)) return curve;
        } catch (const InvalidCurve&) {
        }
    }
    throw std::runtime_error("random_waisted: no simple curve after 100 attempts (seed " + std::to_string(seed) + ")");
}

DiscreteCurve horseshoe(double gap, std::size_t n, double mid, double width) {
    if (!(width > 0) || !(mid > width)) throw std::invalid_argument("horseshoe: need mid > width > 0");
    const double inner = mid - width;
    const double outer = mid + width;
    const double ratio = (gap + 2.0 * width) / (2.0 * mid);
    if (!(gap > 0) || ratio >= 1.0) throw std::invalid_argument("horseshoe: gap out of range");
    const double tc = std::asin(ratio);
    const double sweep = 2.0 * kPi - 2.0 * tc;

    const double len_outer = outer * sweep;
    const double len_cap = kPi * width;
    const double len_inner = inner * sweep;
    const double total = len_outer + len_cap + len_inner + len_cap;

    auto dir = [](double th) { return Eigen::Vector2d(std::cos(th), std::sin(th)); };
    PointMatrix pts(static_cast<Eigen::Index>(n), 3);
    for (std::size_t k = 0; k < n; ++k) {
        double s = total * static_cast<double>(k) / static_cast<double>(n);
        Eigen::Vector2d q;
        if (s < len_outer) {
            q = outer * dir(tc + s / outer);
        } else if ((s -= len_outer) < len_cap) {
            const double phi = s / width;
            const double th = -tc;
            q = mid * dir(th) + width * (std::cos(phi) * dir(th) + std::sin(phi) * dir(th + 0.5 * kPi));
        } else if ((s -= len_cap) < len_inner) {
            q = inner * dir(2.0 * kPi - tc - s / inner);
        } else {
            s -= len_inner;
            const double phi = s / width;
            q = mid * dir(tc) + width * (-std::cos(phi) * dir(tc) - std::sin(phi) * dir(tc + 0.5 * kPi));
        }
        // Planar polar coordinates become (geodesic distance from the pole, azimuth).
        pts.row(static_cast<Eigen::Index>(k)) = on_sphere(q.norm(), std::atan2(q.y(), q.x()), 1.0).transpose();
    }
    return DiscreteCurve(std::move(pts));
}

DiscreteCurve random_space_curve(std::uint64_t seed, std::size_t n, double amplitude) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Eigen::Matrix<double, 3, 3> cos_coef, sin_coef;
    for (int k = 0; k < 3; ++k) {
        for (int d = 0; d < 3; ++d) {
            cos_coef(d, k) = amplitude * unif(rng) / (k + 1.0);
            sin_coef(d, k) = amplitude * unif(rng) / (k + 1.0);
        }
    }
    const Eigen::Matrix3d rot = random_rotation(rng);
    PointMatrix pts(static_cast<Eigen::Index>(n), 3);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = param_at(i, n);
        Eigen::Vector3d g(std::cos(u), std::sin(u), 0.0);
        for (int k = 0; k < 3; ++k) g += cos_coef.col(k) * std::cos((k + 2) * u) + sin_coef.col(k) * std::sin((k + 2) * u);
        pts.row(static_cast<Eigen::Index>(i)) = (rot * g).transpose();
    }
    return DiscreteCurve(std::move(pts));
}

DiscreteCurve tilted_convex(double a, double b, double z_amp, double tilt, std::size_t n) {
    const Eigen::Matrix3d rot = Eigen::AngleAxisd(tilt, Eigen::Vector3d::UnitX()).toRotationMatrix();
    PointMatrix pts(static_cast<Eigen::Index>(n), 3);
    for (std::size_t k = 0; k < n; ++k) {
        const double u = param_at(k, n);
        const Eigen::Vector3d p(a * std::cos(u), b * std::sin(u), z_amp * (std::sin(2.0 * u) + 0.5 * std::cos(3.0 * u)));
        pts.row(static_cast<Eigen::Index>(k)) = (rot * p).transpose();
    }
    return DiscreteCurve(std::move(pts));
}

double simplicity_ratio(const DiscreteCurve& curve) {
    const auto n = static_cast<Eigen::Index>(curve.size());
    const auto& pts = curve.points();
    double min_chord2 = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;
            min_chord2 = std::min(min_chord2, (pts.row(i) - pts.row(j)).squaredNorm());
        }
    }
    return std::sqrt(min_chord2) / min_edge_length(curve);
}

bool is_simple(const DiscreteCurve& curve) { return simplicity_ratio(curve) >= 0.5; }

// ---------------------------------------------------------------------------

const std::vector<GeneratorInfo>& generators() {
    static const std::vector<GeneratorInfo> table = {
        {"circle", "planar circle in the xy-plane", {{"r", 1.0}}},
        {"ellipse", "planar ellipse (a cos u, b sin u, 0), optional nonuniform sampling", {{"a", 2.0}, {"b", 1.0}, {"skew", 0.0}}},
        {"stadium", "planar stadium: straight segments joined by semicircles", {{"flat", 2.0}, {"r", 1.0}}},
        {"helix", "helix (r cos u, r sin u, c u) closed by a chord", {{"r", 1.0}, {"c", 0.5}, {"turns", 2.0}}},
        {"example1", "convex space curve that loses convexity under the flow", {}},
        {"remark4d", "R^4 curve on the unit 3-sphere (dim 4)", {}},
        {"latitude", "latitude circle on a sphere, optional wobble", {{"beta", 1.0}, {"wobble", 0.0}, {"lobes", 2.0}, {"radius", 1.0}}},
        {"baseball", "seam curve on a sphere", {{"amplitude", 0.5}, {"lobes", 2.0}, {"radius", 1.0}}},
        {"random_spherical", "random low-pass perturbation of a great circle (uses seed)", {{"amplitude", 0.25}, {"radius", 1.0}}},
        {"random_waisted", "random peanut-shaped curve with a waist, on the unit sphere (uses seed)", {}},
        {"horseshoe", "near-self-touching horseshoe on the unit sphere", {{"gap", 0.06}, {"mid", 0.9}, {"width", 0.2}}},
        {"random_space", "random perturbed circle in R^3 (uses seed)", {{"amplitude", 0.15}}},
        {"tilted_convex", "space curve with convex regular xy-projection", {{"a", 1.5}, {"b", 1.0}, {"z_amp", 0.3}, {"tilt", 0.3}}},
    };
    return table;
}

DiscreteCurve make_curve(const CurveSpec& spec) {
    const auto& table = generators();
    const auto it = std::find_if(table.begin(), table.end(), [&](const GeneratorInfo& g) { return g.kind == spec.kind; });
    if (it == table.end()) throw std::invalid_argument("unknown curve kind '" + spec.kind + "'");
    for (const auto& [key, value] : spec.params) {
        if (!it->defaults.contains(key)) throw std::invalid_argument("curve kind '" + spec.kind + "' has no parameter '" + key + "'");
    }
    auto p = [&](const std::string& key) {
        const auto found = spec.params.find(key);
        return found != spec.params.end() ? found->second : it->defaults.at(key);
    };
    const std::size_t n = spec.samples;
    const std::string& k = spec.kind;
    if (k == "circle") return circle(p("r"), n);
    if (k == "ellipse") return ellipse(p("a"), p("b"), n, p("skew"));
    if (k == "stadium") return stadium(p("flat"), p("r"), n);
    if (k == "helix") return helix_loop(p("r"), p("c"), p("turns"), n);
    if (k == "example1") return example1(n);
    if (k == "remark4d") return remark4d(n);
    if (k == "latitude") return latitude(p("beta"), n, p("wobble"), static_cast<int>(p("lobes")), p("radius"));
    if (k == "baseball") return baseball(p("amplitude"), n, static_cast<int>(p("lobes")), p("radius"));
    if (k == "random_spherical") return random_spherical(spec.seed, n, p("amplitude"), p("radius"));
    if (k == "random_waisted") return random_waisted(spec.seed, n);
    if (k == "horseshoe") return horseshoe(p("gap"), n, p("mid"), p("width"));
    if (k == "random_space") return random_space_curve(spec.seed, n, p("amplitude"));
    return tilted_convex(p("a"), p("b"), p("z_amp"), p("tilt"), n);
}

}  // namespace csf::curves
