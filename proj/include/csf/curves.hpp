#pragma once

#include "csf/curve.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace csf::curves {

/// Constants of the Example 1 curve (cos(a u^3 + b u), sin(a u^3 + b u), sin u - sin(2u)/2).
struct Example1Constants {
    double a;
    double b;
    double w;  // zero of the phase besides u = 0: a w^2 + b = 0
};

Example1Constants example1_constants();

/// Example 1 space curve sampled at u_k = -pi + 2 pi k / N. Requires N >= 64.
DiscreteCurve example1(std::size_t n);

/// The 4-component curve on the unit 3-sphere from the R^4 counterexample to
/// tangent collinearity, sampled at u_k = 2 pi k / N. Requires N >= 128.
DiscreteCurve remark4d(std::size_t n);
Vector remark4d_point(double u);
Vector remark4d_tangent(double u);

/// Circle of radius r in the plane spanned by orthonormal e1, e2 through center.
DiscreteCurve circle(double r, std::size_t n, const Vector& center, const Vector& e1, const Vector& e2);
/// Circle of radius r in the xy-plane of R^3, centered at the origin.
DiscreteCurve circle(double r, std::size_t n);

/// Helix (r cos u, r sin u, c u), u in [0, 2 pi turns), closed by one chord.
/// The vertices adjacent to the closing chord are not helical.
DiscreteCurve helix_loop(double r, double c, double turns, std::size_t n);

/// Ellipse (a cos u, b sin u, 0). With skew != 0 the samples are taken at
/// u_k = theta_k + skew sin(theta_k), a nonuniform sampling.
DiscreteCurve ellipse(double a, double b, std::size_t n, double skew = 0.0);

/// Stadium: two straight segments of length `flat` joined by semicircles of
/// radius r, sampled uniformly in arclength, in the xy-plane.
DiscreteCurve stadium(double flat, double r, std::size_t n);

// ---------------------------------------------------------------------------
// Curves on the sphere |p - center| = radius.

/// Latitude circle at polar angle beta, optionally wobbled: polar angle
/// beta + wobble * sin(lobes * u).
DiscreteCurve latitude(double beta, std::size_t n, double wobble = 0.0, int lobes = 2, double radius = 1.0);

/// Seam curve (cos A sin B, sin A sin B, cos B), A = u, B = pi/2 + amplitude sin(lobes u).
/// lobes = 2 is the tennis/baseball seam.
DiscreteCurve baseball(double amplitude, std::size_t n, int lobes = 2, double radius = 1.0);

/// Great circle perturbed by low-pass random harmonics (orders 1..6, decaying
/// as amplitude / k^2), randomly rotated, then projected radially onto the
/// sphere. Deterministic in seed. Retries up to 100 seeds derived from `seed`
/// until the draw passes the simplicity check.
DiscreteCurve random_spherical(std::uint64_t seed, std::size_t n, double amplitude = 0.25, double radius = 1.0);

/// Peanut r(theta) = 1 + pinch cos 2 theta plus small harmonics 3..5, scaled
/// to geodesic radius 0.5..0.8, wrapped onto the unit sphere around a random
/// pole. The waist gives chord minima away from the diagonal. Same retry
/// policy as random_spherical.
DiscreteCurve random_waisted(std::uint64_t seed, std::size_t n);

/// Horseshoe drawn on the sphere around the north pole: an annular sector of
/// geodesic radii mid +- width, closed by half-circle caps of radius width
/// whose tips face each other across a planar gap `gap`. Small gaps make a
/// near-self-touching curve.
DiscreteCurve horseshoe(double gap, std::size_t n, double mid = 0.9, double width = 0.2);

/// Random smooth closed curve in R^3: a circle of radius ~1 in a random plane,
/// perturbed by harmonics of order 2..4 with amplitude `amplitude`.
DiscreteCurve random_space_curve(std::uint64_t seed, std::size_t n, double amplitude = 0.15);

/// Convex planar curve (a cos u, b sin u) with a z-offset of
/// z_amp (sin 2u + 0.5 cos 3u) and rotated by `tilt` about the x axis.
/// Its orthogonal projection onto the plane z = 0 is a convex, regular curve
/// for moderate tilt.
DiscreteCurve tilted_convex(double a, double b, double z_amp, double tilt, std::size_t n);

/// Smallest vertex distance over index pairs at least two apart, relative to
/// the smallest edge. Below 0.5 the polyline is treated as self-intersecting.
double simplicity_ratio(const DiscreteCurve& curve);
bool is_simple(const DiscreteCurve& curve);

// ---------------------------------------------------------------------------

/// Serializable description of a generated curve.
struct CurveSpec {
    std::string kind;
    std::map<std::string, double> params;
    std::size_t samples = 256;
    int dim = 3;
    std::uint64_t seed = 0;
};

struct GeneratorInfo {
    std::string kind;
    std::string description;
    std::map<std::string, double> defaults;
};

/// Registered generator kinds with their parameter keys and defaults.
const std::vector<GeneratorInfo>& generators();

/// Builds the curve for `spec`. Throws std::invalid_argument for unknown
/// kinds or unknown parameter keys.
DiscreteCurve make_curve(const CurveSpec& spec);

}  // namespace csf::curves
