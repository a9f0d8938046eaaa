/// @file geometry.hpp
/// @brief Streamline integration, cylindrical frames, and stream-tube
///        bundle diagnostics.
///
/// Streamlines are integrated in arclength: the ODE is x'(s) = u(x)/|u(x)|,
/// so the parameter s is arclength exactly and the direction samples are
/// unit vectors by construction.  The integrator is classical RK4 with a
/// fixed recording step and a step-halving error monitor that subdivides
/// internally when the local comparison fails.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "swirllab/core.hpp"

namespace swirllab::geometry {

// ============================================================================
// Types
// ============================================================================

/// Right-handed orthonormal cylindrical frame at a point.
struct Frame {
    Vec3 e_r;
    Vec3 e_theta;
    Vec3 e_z;
};

/// Direction cosines of a velocity direction against a Frame.
struct DirectionCosines {
    double omega_r = 0.0;
    double omega_theta = 0.0;
    double omega_z = 0.0;
};

/// One arclength sample of a streamline.
struct StreamSample {
    double s = 0.0;  ///< arclength from the start
    Point3 p;        ///< position
};

/// An arclength-parameterized streamline.
///
/// Invariants: samples[i].s is strictly increasing; consecutive positions
/// are separated by chord <= arc, and by the nominal recording step within
/// 10% (unit-speed parameterization makes both automatic for civil steps).
struct Streamline {
    std::vector<StreamSample> samples;
    double step = 0.0;            ///< nominal recording step
    bool terminated_early = false;  ///< stopped on the vanishing-speed floor
    double initial_speed = 0.0;   ///< |u| at the seed point
};

/// Aggregate distortion diagnostics for a bundle of streamlines spawned
/// from small discs on the inlet section.
struct BundleReport {
    double area_ratio_min = 0.0;      ///< min advected/initial section area
    double area_ratio_max = 0.0;      ///< max advected/initial section area
    double flux_sup_over_inf = 0.0;   ///< sup/inf of u.e_z over the inlet
    double bundle_constant = 0.0;     ///< max(area_ratio_max, 1/area_ratio_min,
                                      ///<     flux_sup_over_inf)
};

/// Knobs for bundle_report.
struct BundleOptions {
    std::vector<double> z_targets = {0.2, 0.4};     ///< advection target planes
    std::vector<double> center_radii = {0.2, 0.35, 0.6};  ///< sub-disc centers
    double bundle_radius = 0.04;  ///< sub-disc radius
    int n_vertices = 64;          ///< polygon vertices per sub-disc
    int flux_nr = 8;              ///< radial flux samples on the inlet
    int flux_ntheta = 16;         ///< angular flux samples on the inlet
    double step = 2e-3;           ///< streamline recording step
};

// ============================================================================
// Streamline integration
// ============================================================================

namespace detail {

/// One classical RK4 step of x' = field(x)/|field(x)|.
/// Returns false (leaving p untouched) when any stage speed drops below
/// the termination floor.
template <class Field>
bool rk4_unit_step(Field&& field, Point3& p, double h, double floor_speed) {
    const auto dir = [&](Point3 q, Vec3& out) -> bool {
        const Vec3 v = field(q);
        const double n = norm(v);
        if (!(n > floor_speed)) return false;
        out = v / n;
        return true;
    };
    Vec3 k1, k2, k3, k4;
    if (!dir(p, k1)) return false;
    if (!dir(p + (0.5 * h) * k1, k2)) return false;
    if (!dir(p + (0.5 * h) * k2, k3)) return false;
    if (!dir(p + h * k3, k4)) return false;
    p = p + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    return true;
}

}  // namespace detail

/// Integrates the unit-speed streamline of `field` from `start`, recording a
/// sample every `step` of arclength up to `s_max`.
///
/// Each recording step is advanced by comparing one full RK4 step against
/// two half steps; when the discrepancy exceeds `rel_tol` the interval is
/// subdivided (recursively halving).  Integration stops early (without
/// error) when the sampled speed falls below 1e-12 times the seed speed.
///
/// @throws Error{ZeroVelocityAtStart} when |field(start)| vanishes
/// @throws Error{StepUnderflow}       when subdivision falls below 1e-14
template <class Field>
Streamline integrate_streamline(Field&& field, Point3 start, double step, double s_max,
                                double rel_tol = 1e-10) {
    if (!(step > 0.0) || !(s_max > 0.0)) {
        throw Error(ErrorCode::ConfigInvalid, "step and s_max must be positive");
    }
    Streamline line;
    line.step = step;
    line.initial_speed = norm(field(start));
    if (!(line.initial_speed > 0.0)) {
        throw Error(ErrorCode::ZeroVelocityAtStart, "seed point has zero velocity");
    }
    const double floor_speed = 1e-12 * line.initial_speed;

    // Advance p by h, subdividing until the full-vs-halved comparison passes.
    // Returns false on the vanishing-speed floor.
    const std::function<bool(Point3&, double)> advance = [&](Point3& p, double h) -> bool {
        if (h < 1e-14) {
            throw Error(ErrorCode::StepUnderflow,
                        "error monitor drove the local step below 1e-14");
        }
        Point3 full = p;
        if (!detail::rk4_unit_step(field, full, h, floor_speed)) return false;
        Point3 halved = p;
        if (!detail::rk4_unit_step(field, halved, 0.5 * h, floor_speed)) return false;
        if (!detail::rk4_unit_step(field, halved, 0.5 * h, floor_speed)) return false;
        const double err = norm(full - halved);
        if (err <= rel_tol * std::max(1.0, norm(p))) {
            p = halved;  // two half-steps: the better of the pair
            return true;
        }
        if (!advance(p, 0.5 * h)) return false;
        return advance(p, 0.5 * h);
    };

    // Index the recording grid integrally so accumulated rounding cannot
    // manufacture spurious sub-steps at the end of the range.
    const long n_full = static_cast<long>(std::floor(s_max / step + 1e-9));
    const double trailing = s_max - static_cast<double>(n_full) * step;
    Point3 p = start;
    line.samples.push_back({0.0, p});
    double s = 0.0;
    for (long k = 1; k <= n_full; ++k) {
        Point3 next = p;
        if (!advance(next, step)) {
            line.terminated_early = true;
            return line;
        }
        p = next;
        s = static_cast<double>(k) * step;
        line.samples.push_back({s, p});
    }
    if (trailing > 1e-9 * step) {
        Point3 next = p;
        if (!advance(next, trailing)) {
            line.terminated_early = true;
            return line;
        }
        line.samples.push_back({s_max, next});
    }
    return line;
}

// ============================================================================
// Frames and direction decomposition
// ============================================================================

/// Exact cylindrical frame about the axis {origin, direction}.
/// @throws Error{OnAxis} when the point is within 1e-12 of the axis
inline Frame local_frame(Point3 p, Point3 axis_origin = {0, 0, 0},
                         Vec3 axis_direction = {0, 0, 1}) {
    const double an = norm(axis_direction);
    if (!(an > 0.0)) {
        throw Error(ErrorCode::ConfigInvalid, "axis direction must be nonzero");
    }
    const Vec3 ez = axis_direction / an;
    const Vec3 rel = p - axis_origin;
    const Vec3 radial = rel - dot(rel, ez) * ez;
    const double rn = norm(radial);
    if (rn < 1e-12) {
        throw Error(ErrorCode::OnAxis, "cylindrical frame undefined on the axis");
    }
    Frame f;
    f.e_r = radial / rn;
    f.e_z = ez;
    f.e_theta = cross(ez, f.e_r);
    return f;
}

/// Direction cosines of field(p) against the frame.
/// @throws Error{ZeroVelocity} when |field(p)| vanishes
template <class Field>
DirectionCosines decompose_direction(Field&& field, Point3 p, const Frame& frame) {
    const Vec3 v = field(p);
    const double n = norm(v);
    if (!(n > 0.0)) {
        throw Error(ErrorCode::ZeroVelocity, "direction undefined where velocity vanishes");
    }
    const Vec3 u = v / n;
    return {dot(u, frame.e_r), dot(u, frame.e_theta), dot(u, frame.e_z)};
}

// ============================================================================
// Bundle diagnostics
// ============================================================================

namespace detail {

/// Shoelace area of a planar polygon given by (x, y) pairs.
inline double polygon_area(const std::vector<double>& xs, const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    double twice = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i + 1) % n;
        twice += xs[i] * ys[j] - xs[j] * ys[i];
    }
    return 0.5 * std::abs(twice);
}

/// Advects a point along its streamline until the first crossing of the
/// plane z = z_target; returns the linearly interpolated crossing point.
/// @throws Error{DegenerateSection} when the streamline never reaches the plane
template <class Field>
Point3 advect_to_plane(Field&& field, Point3 start, double z_target, double step) {
    const double s_max = 20.0 * (std::abs(z_target - start.z) + 1.0);
    const Streamline line = integrate_streamline(field, start, step, s_max);
    for (std::size_t i = 1; i < line.samples.size(); ++i) {
        const Point3& a = line.samples[i - 1].p;
        const Point3& b = line.samples[i].p;
        if (b.z >= z_target) {
            const double t = (z_target - a.z) / (b.z - a.z);
            return a + t * (b - a);
        }
    }
    throw Error(ErrorCode::DegenerateSection, "bundle vertex never reached the target plane");
}

}  // namespace detail

/// Distortion diagnostics for a straight tube along the z-axis: flux
/// sup/inf over the inlet disc of radius `section_radius`, and advected
/// area ratios for small vertex polygons seeded on the inlet.
///
/// @throws Error{DegenerateSection} when the inlet flux is not uniformly
///         positive, a polygon degenerates, or a vertex never reaches its
///         target plane
/// @throws Error{ConfigInvalid} when fewer than 16 flux samples are requested
template <class Field>
BundleReport bundle_report(Field&& field, double section_radius,
                           const BundleOptions& opt = {}) {
    if (opt.flux_nr * opt.flux_ntheta < 16) {
        throw Error(ErrorCode::ConfigInvalid,
                    "inlet section needs at least 16 flux samples");
    }
    if (opt.n_vertices < 3) {
        throw Error(ErrorCode::ConfigInvalid, "bundle polygons need at least 3 vertices");
    }

    // --- inlet flux sup/inf (boundary-inclusive radial sampling) -----------
    double flux_sup = -std::numeric_limits<double>::infinity();
    double flux_inf = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= opt.flux_nr; ++i) {
        const double r = section_radius * static_cast<double>(i) / opt.flux_nr;
        for (int j = 0; j < opt.flux_ntheta; ++j) {
            const double th = 2.0 * kPi * (j + 0.5) / opt.flux_ntheta;
            const Vec3 v = field(Point3{r * std::cos(th), r * std::sin(th), 0.0});
            flux_sup = std::max(flux_sup, v.z);
            flux_inf = std::min(flux_inf, v.z);
        }
    }
    if (!(flux_inf > 1e-12)) {
        throw Error(ErrorCode::DegenerateSection,
                    "inlet flux is not uniformly positive; section is not transversal");
    }

    // --- advected sub-bundle areas -----------------------------------------
    BundleReport rep;
    rep.flux_sup_over_inf = flux_sup / flux_inf;
    rep.area_ratio_min = std::numeric_limits<double>::infinity();
    rep.area_ratio_max = -std::numeric_limits<double>::infinity();

    std::vector<double> xs(static_cast<std::size_t>(opt.n_vertices));
    std::vector<double> ys(static_cast<std::size_t>(opt.n_vertices));
    for (const double rc : opt.center_radii) {
        // Initial polygon: a circle of radius bundle_radius about (rc, 0, 0).
        std::vector<Point3> verts;
        verts.reserve(static_cast<std::size_t>(opt.n_vertices));
        for (int m = 0; m < opt.n_vertices; ++m) {
            const double phi = 2.0 * kPi * m / opt.n_vertices;
            verts.push_back({rc + opt.bundle_radius * std::cos(phi),
                             opt.bundle_radius * std::sin(phi), 0.0});
        }
        for (int m = 0; m < opt.n_vertices; ++m) {
            xs[static_cast<std::size_t>(m)] = verts[static_cast<std::size_t>(m)].x;
            ys[static_cast<std::size_t>(m)] = verts[static_cast<std::size_t>(m)].y;
        }
        const double area0 = detail::polygon_area(xs, ys);
        if (area0 < 1e-12) {
            throw Error(ErrorCode::DegenerateSection, "initial bundle polygon is degenerate");
        }
        for (const double zt : opt.z_targets) {
            for (int m = 0; m < opt.n_vertices; ++m) {
                const Point3 hit =
                    detail::advect_to_plane(field, verts[static_cast<std::size_t>(m)], zt,
                                            opt.step);
                xs[static_cast<std::size_t>(m)] = hit.x;
                ys[static_cast<std::size_t>(m)] = hit.y;
            }
            const double area = detail::polygon_area(xs, ys);
            if (area < 1e-12) {
                throw Error(ErrorCode::DegenerateSection,
                            "advected bundle polygon is degenerate");
            }
            const double ratio = area / area0;
            rep.area_ratio_min = std::min(rep.area_ratio_min, ratio);
            rep.area_ratio_max = std::max(rep.area_ratio_max, ratio);
        }
    }
    rep.bundle_constant = std::max({rep.area_ratio_max, 1.0 / rep.area_ratio_min,
                                    rep.flux_sup_over_inf});
    return rep;
}

}  // namespace swirllab::geometry
