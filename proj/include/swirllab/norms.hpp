/// @file norms.hpp
/// @brief Cylindrical quadrature grids, L^p norms over the tube, weak-L^p
///        norms with layer-cake machinery, and per-annulus partial sums of
///        the two divergence dichotomy integrals.
///
/// Grid conventions:
///  * radial nodes are midpoints with area weight r * dr (the node weights
///    sum to r_max^2 / 2 exactly);
///  * angular nodes are midpoints with uniform weight 2 pi / n_theta;
///  * uniform axial grids use midpoint nodes; geometric axial grids place
///    panels uniformly in the stretched coordinate tau = -log(S - z) and
///    sample at the *left* tau edge with the exact panel length as weight.
///    Left sampling under-estimates integrands that increase toward the cap
///    (every norm integrand here does), so quadrature values stay below the
///    closed-form envelope bounds they are compared against, and panel
///    weights still telescope to the exact axial extent.
///
/// Nesting: two geometric grids with the same panel width in tau and
/// tau_max differing by whole panels share every common panel, so truncated
/// norms computed on them are structurally monotone in tau_max.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "swirllab/core.hpp"
#include "swirllab/fields.hpp"

namespace swirllab::norms {

// ============================================================================
// Cylindrical grids
// ============================================================================

/// Tensor-product quadrature grid on the cylinder r <= r_max, z in
/// [z_lo, z_hi].  Cell weights are r_weights[i] * theta_weight *
/// z_weights[k]; their sum is exactly the cylinder volume.
struct CylGrid {
    std::vector<double> r_nodes;
    std::vector<double> r_weights;  ///< r * dr per node
    int n_theta = 0;
    double theta_weight = 0.0;      ///< 2 pi / n_theta
    std::vector<double> z_nodes;
    std::vector<double> z_weights;  ///< exact panel lengths
    double r_max = 0.0;
    double z_lo = 0.0;
    double z_hi = 0.0;
    // Construction parameters, kept so a half-step refinement can be built.
    bool geometric_z = false;
    double tau_max = 0.0;
    double S = 1.0;
    int n_r = 0;
    int n_z = 0;
};

inline CylGrid make_cyl_grid_uniform(double r_max, double z_lo, double z_hi,
                                     int n_r, int n_theta, int n_z) {
    if (!(r_max > 0.0) || !(z_hi > z_lo) || n_r < 1 || n_theta < 1 || n_z < 1) {
        throw Error(ErrorCode::ConfigInvalid, "uniform grid parameters out of range");
    }
    CylGrid g;
    g.r_max = r_max;
    g.z_lo = z_lo;
    g.z_hi = z_hi;
    g.n_r = n_r;
    g.n_theta = n_theta;
    g.n_z = n_z;
    g.theta_weight = 2.0 * kPi / n_theta;
    const double dr = r_max / n_r;
    for (int i = 0; i < n_r; ++i) {
        const double r = (i + 0.5) * dr;
        g.r_nodes.push_back(r);
        g.r_weights.push_back(r * dr);
    }
    const double dz = (z_hi - z_lo) / n_z;
    for (int k = 0; k < n_z; ++k) {
        g.z_nodes.push_back(z_lo + (k + 0.5) * dz);
        g.z_weights.push_back(dz);
    }
    return g;
}

/// Axial panels uniform in tau on [0, tau_max] (z from 0 to S(1 -
/// e^{-tau_max})), sampled at the left tau edge with the exact panel length
/// as weight.  Grids sharing the panel width in tau nest exactly.
inline CylGrid make_cyl_grid_geometric_z(double r_max, int n_r, int n_theta,
                                         double tau_max, int n_z, double S = 1.0) {
    if (!(r_max > 0.0) || !(tau_max > 0.0) || !(S > 0.0) || n_r < 1 ||
        n_theta < 1 || n_z < 1) {
        throw Error(ErrorCode::ConfigInvalid, "geometric grid parameters out of range");
    }
    CylGrid g;
    g.r_max = r_max;
    g.z_lo = 0.0;
    g.z_hi = z_of_tau(tau_max, S);
    g.geometric_z = true;
    g.tau_max = tau_max;
    g.S = S;
    g.n_r = n_r;
    g.n_theta = n_theta;
    g.n_z = n_z;
    g.theta_weight = 2.0 * kPi / n_theta;
    const double dr = r_max / n_r;
    for (int i = 0; i < n_r; ++i) {
        const double r = (i + 0.5) * dr;
        g.r_nodes.push_back(r);
        g.r_weights.push_back(r * dr);
    }
    double z_prev = 0.0;
    for (int k = 0; k < n_z; ++k) {
        const double z_next = z_of_tau(tau_max * (k + 1) / n_z, S);
        g.z_nodes.push_back(z_prev);  // left edge
        g.z_weights.push_back(z_next - z_prev);
        z_prev = z_next;
    }
    return g;
}

/// Sum of all cell weights (equals the cylinder volume exactly).
inline double grid_volume(const CylGrid& g) {
    double rw = 0.0, zw = 0.0;
    for (double w : g.r_weights) rw += w;
    for (double w : g.z_weights) zw += w;
    return rw * g.theta_weight * g.n_theta * zw;
}

/// Visits every cell as (point, weight).
template <class F>
void for_each_cell(const CylGrid& g, F&& f) {
    for (std::size_t i = 0; i < g.r_nodes.size(); ++i) {
        const double r = g.r_nodes[i];
        for (std::size_t k = 0; k < g.z_nodes.size(); ++k) {
            const double z = g.z_nodes[k];
            const double w0 = g.r_weights[i] * g.theta_weight * g.z_weights[k];
            for (int t = 0; t < g.n_theta; ++t) {
                const double th = 2.0 * kPi * (t + 0.5) / g.n_theta;
                f(Point3{r * std::cos(th), r * std::sin(th), z}, w0);
            }
        }
    }
}

/// The same grid with every dimension halved in step (doubled counts).
inline CylGrid refine_grid(const CylGrid& g) {
    if (g.geometric_z) {
        return make_cyl_grid_geometric_z(g.r_max, 2 * g.n_r, 2 * g.n_theta,
                                         g.tau_max, 2 * g.n_z, g.S);
    }
    return make_cyl_grid_uniform(g.r_max, g.z_lo, g.z_hi, 2 * g.n_r,
                                 2 * g.n_theta, 2 * g.n_z);
}

// ============================================================================
// L^p norms
// ============================================================================

/// Result of a grid-quadrature norm evaluation.
struct NormReport {
    double value = 0.0;
    double error_estimate = 0.0;  ///< |half-grid value - value|; 0 if skipped
    long n_cells = 0;
};

namespace detail {

template <class SpeedFn>
double sum_speed_power(SpeedFn&& speed, double p, const CylGrid& g) {
    double acc = 0.0;
    long idx = 0;
    for_each_cell(g, [&](Point3 q, double w) {
        const double s = speed(q);
        if (!std::isfinite(s)) {
            throw Error(ErrorCode::NonFiniteSample,
                        "speed sample is not finite at cell " + std::to_string(idx),
                        idx);
        }
        acc += w * std::pow(std::abs(s), p);
        ++idx;
    });
    return acc;
}

}  // namespace detail

/// L^p norm of a speed function over the grid: (sum w |speed|^p)^{1/p}.
/// `speed` maps Point3 -> double (e.g. the norm of a velocity field).
///
/// @throws Error{NonFiniteSample} on a non-finite sample
/// @throws Error{ConfigInvalid}   for p < 1
template <class SpeedFn>
NormReport lp_norm_tube(SpeedFn&& speed, double p, const CylGrid& grid,
                        bool with_error_estimate = true) {
    if (!(p >= 1.0)) {
        throw Error(ErrorCode::ConfigInvalid, "lp_norm_tube needs p >= 1");
    }
    NormReport rep;
    rep.n_cells = static_cast<long>(grid.r_nodes.size()) * grid.n_theta *
                  static_cast<long>(grid.z_nodes.size());
    rep.value = std::pow(detail::sum_speed_power(speed, p, grid), 1.0 / p);
    if (with_error_estimate) {
        const double refined =
            std::pow(detail::sum_speed_power(speed, p, refine_grid(grid)), 1.0 / p);
        rep.error_estimate = std::abs(refined - rep.value);
    }
    return rep;
}

// ============================================================================
// Distribution functions and weak-L^p norms
// ============================================================================

namespace detail {

/// Samples sorted ascending with suffix weight sums, so the measure of
/// {sample > level} is one binary search away.
struct SortedSamples {
    std::vector<double> values;       // ascending
    std::vector<double> suffix_meas;  // suffix_meas[i] = sum of weights[i..]
    double total = 0.0;

    static SortedSamples build(const std::vector<double>& samples,
                               const std::vector<double>& weights) {
        if (samples.empty() || samples.size() != weights.size()) {
            throw Error(ErrorCode::ConfigInvalid,
                        "samples and weights must be nonempty and equal-sized");
        }
        std::vector<std::pair<double, double>> sw(samples.size());
        for (std::size_t i = 0; i < samples.size(); ++i) {
            if (!std::isfinite(samples[i]) || !std::isfinite(weights[i])) {
                throw Error(ErrorCode::NonFiniteSample,
                            "non-finite sample or weight at index " + std::to_string(i),
                            static_cast<long>(i));
            }
            sw[i] = {samples[i], weights[i]};
        }
        std::sort(sw.begin(), sw.end());
        SortedSamples s;
        s.values.resize(sw.size());
        s.suffix_meas.resize(sw.size() + 1, 0.0);
        for (std::size_t i = 0; i < sw.size(); ++i) s.values[i] = sw[i].first;
        for (std::size_t i = sw.size(); i-- > 0;) {
            s.suffix_meas[i] = s.suffix_meas[i + 1] + sw[i].second;
        }
        s.total = s.suffix_meas[0];
        return s;
    }

    /// Measure of {sample > level} (strict).
    double measure_above(double level) const {
        const auto it = std::upper_bound(values.begin(), values.end(), level);
        return suffix_meas[static_cast<std::size_t>(it - values.begin())];
    }

    /// Smallest value whose cumulative measure reaches the fraction.
    double weighted_quantile(double frac) const {
        const double target = frac * total;
        double acc = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i) {
            acc += suffix_meas[i] - suffix_meas[i + 1];
            if (acc >= target) return values[i];
        }
        return values.back();
    }
};

}  // namespace detail

/// Measures of the superlevel sets {sample > level} for each level.
/// Levels must be strictly increasing; the result is non-increasing.
///
/// @throws Error{UnsortedLevels}   when levels are not strictly increasing
/// @throws Error{NonFiniteSample}  on non-finite samples or weights
inline std::vector<double> distribution_function(
    const std::vector<double>& samples, const std::vector<double>& weights,
    const std::vector<double>& levels) {
    for (std::size_t i = 1; i < levels.size(); ++i) {
        if (!(levels[i] > levels[i - 1])) {
            throw Error(ErrorCode::UnsortedLevels,
                        "distribution levels must be strictly increasing",
                        static_cast<long>(i));
        }
    }
    const detail::SortedSamples s = detail::SortedSamples::build(samples, weights);
    std::vector<double> meas;
    meas.reserve(levels.size());
    for (double lv : levels) meas.push_back(s.measure_above(lv));
    return meas;
}

/// Weak-L^p evaluation: sup over probe levels of level^alpha_p * measure of
/// the strict superlevel set.
struct WeakNormReport {
    double value = 0.0;
    double level_lo = 0.0;       ///< first probe level (weighted median)
    double level_hi = 0.0;       ///< last probe level (sample maximum)
    double attained_level = 0.0; ///< probe level achieving the sup
    int n_levels = 0;
};

/// Weak-L^{alpha_p} norm (to the power one, i.e. sup lambda^{alpha_p}
/// |{|u| > lambda}|) of weighted samples.  Probe levels are geometric,
/// spanning [weighted median, max sample].
///
/// @throws Error{ConfigInvalid}    for fewer than 32 levels or bad inputs
/// @throws Error{NonFiniteSample}  on non-finite samples or weights
inline WeakNormReport weak_lp_norm(const std::vector<double>& samples,
                                   const std::vector<double>& weights,
                                   double alpha_p, int n_levels = 64) {
    if (n_levels < 32) {
        throw Error(ErrorCode::ConfigInvalid,
                    "weak norm needs at least 32 probe levels");
    }
    if (!(alpha_p > 0.0)) {
        throw Error(ErrorCode::ConfigInvalid, "weak norm exponent must be positive");
    }
    const detail::SortedSamples s = detail::SortedSamples::build(samples, weights);
    WeakNormReport rep;
    rep.n_levels = n_levels;
    rep.level_hi = s.values.back();
    if (!(rep.level_hi > 0.0)) return rep;  // nonpositive field: weak norm 0
    rep.level_lo = std::max(s.weighted_quantile(0.5), rep.level_hi * 1e-12);
    // Keep the span nondegenerate so constant fields are probed just below
    // their value.
    rep.level_lo = std::min(rep.level_lo, rep.level_hi * (1.0 - 1e-9));
    const double ratio = rep.level_hi / rep.level_lo;
    for (int i = 0; i < n_levels; ++i) {
        const double lv =
            rep.level_lo * std::pow(ratio, static_cast<double>(i) / (n_levels - 1));
        const double cand = std::pow(lv, alpha_p) * s.measure_above(lv);
        if (cand > rep.value) {
            rep.value = cand;
            rep.attained_level = lv;
        }
    }
    return rep;
}

/// Grid overload: samples a speed function over the cells.
template <class SpeedFn>
WeakNormReport weak_lp_norm(SpeedFn&& speed, const CylGrid& grid, double alpha_p,
                            int n_levels = 64) {
    std::vector<double> samples, weights;
    const std::size_t n = grid.r_nodes.size() * static_cast<std::size_t>(grid.n_theta) *
                          grid.z_nodes.size();
    samples.reserve(n);
    weights.reserve(n);
    for_each_cell(grid, [&](Point3 q, double w) {
        samples.push_back(speed(q));
        weights.push_back(w);
    });
    return weak_lp_norm(samples, weights, alpha_p, n_levels);
}

// ============================================================================
// Per-annulus partial sums of the dichotomy integrals
// ============================================================================

/// Which divergent integral the partial sums track.
enum class SumMode {
    speed_alpha,   ///< per-annulus integral of |u|^alpha up to the milestone
    direction_six, ///< per-annulus integral of |div(u/|u|)|^6 over the window
};

struct AnnulusTerm {
    int j = 0;
    double increment = 0.0;
    double cumulative = 0.0;  ///< running sum of *included* increments
    bool certified = false;
    bool included = false;
};

struct PartialSumReport {
    SumMode mode = SumMode::speed_alpha;
    std::vector<AnnulusTerm> terms;
    double total = 0.0;
    int n_skipped = 0;
};

struct PartialSumOptions {
    int n_r_core = 48;
    int n_r_band = 32;
    double dtau = 0.25;      ///< target stretched-coordinate panel width
    int min_tau_nodes = 512;
    bool skip_uncertified = false;  ///< flag instead of throwing
};

/// Per-annulus increments of the chosen dichotomy integral for annuli
/// 1..J.  Uncertified annuli contribute to `speed_alpha` (the milestone
/// budget needs no descent), while `direction_six` increments are only
/// *included* for certified annuli: by default an uncertified annulus in
/// range throws; with skip_uncertified its honest increment is still
/// reported but excluded from the cumulative sum.
///
/// The integrals run in the stretched coordinate, where certified-annulus
/// integrands are piecewise O(1) by construction (|u|^alpha (S-z) == flux^alpha
/// on envelope segments; |dw/dz|^6 (S-z) == (1+m)^6 on descent segments).
///
/// @throws Error{ConfigInvalid}       for J out of [1, J_max] or bad options
/// @throws Error{AnnulusNotCertified} in `direction_six` without skip_uncertified
inline PartialSumReport annulus_partial_sums(const fields::TubeField& field,
                                             SumMode mode, int J,
                                             const PartialSumOptions& opt = {}) {
    const fields::SwirlProfile& p = field.profile;
    if (p.has_kernel() || p.annuli.empty()) {
        throw Error(ErrorCode::ConfigInvalid,
                    "partial sums apply to reference-construction profiles");
    }
    if (J < 1 || J > p.J_max) {
        throw Error(ErrorCode::ConfigInvalid,
                    "annulus range must lie in [1, J_max]");
    }
    if (opt.n_r_core < 4 || opt.n_r_band < 4 || !(opt.dtau > 0.0) ||
        opt.min_tau_nodes < 16) {
        throw Error(ErrorCode::ConfigInvalid, "partial sum quadrature too coarse");
    }

    PartialSumReport rep;
    rep.mode = mode;
    for (int j = 1; j <= J; ++j) {
        const fields::AnnulusInfo& an = p.annuli[static_cast<std::size_t>(j - 1)];
        if (mode == SumMode::direction_six && !an.descent_feasible &&
            !opt.skip_uncertified) {
            throw Error(ErrorCode::AnnulusNotCertified,
                        "annulus " + std::to_string(j) +
                            " is not certified for the direction integral",
                        j);
        }

        // Radial nodes: the band-free core plus (for j >= 2) the hosted
        // blend band, resolved separately so the smoothstep is captured.
        std::vector<std::pair<double, double>> rw;  // (radius, area weight)
        const double band_lo = an.r_outer * (1.0 - p.band_fraction);
        const double core_hi = (j >= 2) ? band_lo : an.r_outer;
        const double dcore = (core_hi - an.r_inner) / opt.n_r_core;
        for (int i = 0; i < opt.n_r_core; ++i) {
            const double r = an.r_inner + (i + 0.5) * dcore;
            rw.emplace_back(r, 2.0 * kPi * r * dcore);
        }
        if (j >= 2) {
            const double dband = (an.r_outer - band_lo) / opt.n_r_band;
            for (int i = 0; i < opt.n_r_band; ++i) {
                const double r = band_lo + (i + 0.5) * dband;
                rw.emplace_back(r, 2.0 * kPi * r * dband);
            }
        }

        // tau window and integrand exponent per mode.
        const double tau_lo = (mode == SumMode::speed_alpha) ? 0.0 : an.c;
        const double tau_hi = (mode == SumMode::speed_alpha) ? an.c : 2.0 * an.c;
        const int n_tau = std::max(
            opt.min_tau_nodes,
            static_cast<int>(std::ceil((tau_hi - tau_lo) / opt.dtau)));
        const double dtau = (tau_hi - tau_lo) / n_tau;

        double increment = 0.0;
        for (const auto& [r, aw] : rw) {
            const double log_flux = std::log(field.flux(r));
            double col = 0.0;
            for (int t = 0; t < n_tau; ++t) {
                const double tau = tau_lo + (t + 0.5) * dtau;
                const fields::OmegaLog ol = p.eval_log(r, tau);
                double expo;
                if (mode == SumMode::speed_alpha) {
                    expo = p.alpha * (log_flux - ol.log_omega) - tau;
                } else {
                    if (ol.sign_dz == 0) continue;  // flat: no contribution
                    expo = 6.0 * ol.log_abs_dz - tau;
                }
                col += (expo > 700.0) ? std::numeric_limits<double>::infinity()
                                      : std::exp(expo);
            }
            increment += aw * col * dtau;
        }

        AnnulusTerm term;
        term.j = j;
        term.increment = increment;
        term.certified = an.descent_feasible;
        term.included = (mode == SumMode::speed_alpha) || an.descent_feasible;
        if (term.included) {
            rep.total += increment;
        } else {
            ++rep.n_skipped;
        }
        term.cumulative = rep.total;
        rep.terms.push_back(term);
    }
    return rep;
}

}  // namespace swirllab::norms
