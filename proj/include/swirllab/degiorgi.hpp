/// @file degiorgi.hpp
/// @brief Computable truncation apparatus: space-time sample fields,
///        truncation energies, dissipation densities, layer-cake and
///        Chebyshev level bounds, and the energy-recurrence fit.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "swirllab/core.hpp"

namespace swirllab::degiorgi {

// ===========================================================================
// Space-time sample fields
// ===========================================================================

/// Sampled |u|, |grad |u|| and |grad u| on a fixed spatial lattice at a list
/// of time nodes.  Spatial integrals are weighted sums over the lattice;
/// time integrals interpolate linearly between nodes.
struct SpaceTimeField {
    std::vector<double> times;                    ///< strictly increasing
    std::vector<double> weights;                  ///< spatial cell measures
    std::vector<std::vector<double>> speed;       ///< [time][cell], >= 0
    std::vector<std::vector<double>> grad_speed;  ///< |grad |u||, >= 0
    std::vector<std::vector<double>> grad_full;   ///< |grad u|, >= grad_speed
};

/// Validates and assembles a SpaceTimeField.  Throws ConfigInvalid on shape
/// mismatches or unsorted times, NonpositiveSpeed on negative speeds,
/// NonFiniteSample on non-finite entries, and ConfigInvalid if the gradient
/// ordering |grad |u|| <= |grad u| fails at any cell.
inline SpaceTimeField make_space_time_field(
    std::vector<double> times, std::vector<double> weights,
    std::vector<std::vector<double>> speed,
    std::vector<std::vector<double>> grad_speed,
    std::vector<std::vector<double>> grad_full) {
    const std::size_t nt = times.size();
    const std::size_t nx = weights.size();
    if (nt < 2 || nx == 0) {
        throw Error(ErrorCode::ConfigInvalid,
                    "need at least two time nodes and one spatial cell");
    }
    for (std::size_t j = 0; j + 1 < nt; ++j) {
        if (!(times[j] < times[j + 1])) {
            throw Error(ErrorCode::ConfigInvalid,
                        "time nodes must be strictly increasing",
                        static_cast<long>(j + 1));
        }
    }
    if (speed.size() != nt || grad_speed.size() != nt ||
        grad_full.size() != nt) {
        throw Error(ErrorCode::ConfigInvalid,
                    "per-time sample arrays must match the time node count");
    }
    for (std::size_t i = 0; i < nx; ++i) {
        if (!std::isfinite(weights[i]) || weights[i] < 0.0) {
            throw Error(ErrorCode::ConfigInvalid, "invalid cell weight",
                        static_cast<long>(i));
        }
    }
    for (std::size_t j = 0; j < nt; ++j) {
        if (speed[j].size() != nx || grad_speed[j].size() != nx ||
            grad_full[j].size() != nx) {
            throw Error(ErrorCode::ConfigInvalid,
                        "sample arrays must match the weight count",
                        static_cast<long>(j));
        }
        for (std::size_t i = 0; i < nx; ++i) {
            const double s = speed[j][i];
            const double g = grad_speed[j][i];
            const double h = grad_full[j][i];
            if (!std::isfinite(s) || !std::isfinite(g) || !std::isfinite(h)) {
                throw Error(ErrorCode::NonFiniteSample,
                            "non-finite field sample",
                            static_cast<long>(j * nx + i));
            }
            if (s < 0.0) {
                throw Error(ErrorCode::NonpositiveSpeed,
                            "speed samples must be non-negative",
                            static_cast<long>(j * nx + i));
            }
            if (g < 0.0 || h < 0.0 || g > h * (1.0 + 1e-12) + 1e-300) {
                throw Error(ErrorCode::ConfigInvalid,
                            "gradient ordering |grad |u|| <= |grad u| violated",
                            static_cast<long>(j * nx + i));
            }
        }
    }
    SpaceTimeField f;
    f.times = std::move(times);
    f.weights = std::move(weights);
    f.speed = std::move(speed);
    f.grad_speed = std::move(grad_speed);
    f.grad_full = std::move(grad_full);
    return f;
}

// ===========================================================================
// Truncations and dissipation densities
// ===========================================================================

/// Truncation level at stage k for a threshold scale: scale * (1 - 2^{-k}).
inline double truncation_level(double scale, int k) {
    if (!(scale > 0.0) || k < 0) {
        throw Error(ErrorCode::ConfigInvalid,
                    "truncation level needs scale > 0 and k >= 0");
    }
    return scale * (1.0 - std::ldexp(1.0, -k));
}

/// Positive part of the excess over a truncation level.
inline double truncate_excess(double speed, double level) {
    return std::max(speed - level, 0.0);
}

/// Start of the time window for stage k: 3/4 - 4^{-(k+1)}.
inline double truncation_time(int k) {
    if (k < 0) {
        throw Error(ErrorCode::ConfigInvalid, "stage index must be >= 0");
    }
    return 0.75 - std::pow(4.0, -(k + 1));
}

/// Squared dissipation density of the stage-k truncation at one sample:
/// (level/|u|) |grad |u||^2 + (excess/|u|) |grad u|^2 on the super-level
/// set, zero elsewhere.  Throws NonpositiveSpeed when speed <= 0 (the
/// density is a per-point diagnostic; sub-level zero-speed cells are
/// handled by the energy integrators, which never call it there).
inline double dissipation_density_sq(double speed, double grad_speed,
                                     double grad_full, double scale, int k) {
    if (!(speed > 0.0)) {
        throw Error(ErrorCode::NonpositiveSpeed,
                    "dissipation density needs a positive speed");
    }
    const double level = truncation_level(scale, k);
    const double excess = truncate_excess(speed, level);
    if (excess <= 0.0) return 0.0;
    return (level / speed) * grad_speed * grad_speed +
           (excess / speed) * grad_full * grad_full;
}

// ===========================================================================
// Truncation energies
// ===========================================================================

/// Stage-k truncation energy split into its two halves.
struct EnergyReport {
    double value = 0.0;      ///< sup_term + diss_term
    double sup_term = 0.0;   ///< (1/2) sup over the window of the L2 mass
    double diss_term = 0.0;  ///< time integral of the dissipation mass
};

namespace detail {

/// Piecewise-linear interpolation of (times, vals) at t (assumes coverage).
inline double interp_at(const std::vector<double>& times,
                        const std::vector<double>& vals, double t) {
    const auto it = std::lower_bound(times.begin(), times.end(), t);
    if (it == times.begin()) return vals.front();
    if (it == times.end()) return vals.back();
    const std::size_t hi = static_cast<std::size_t>(it - times.begin());
    const std::size_t lo = hi - 1;
    const double u = (t - times[lo]) / (times[hi] - times[lo]);
    return vals[lo] + u * (vals[hi] - vals[lo]);
}

/// Trapezoid integral of the piecewise-linear (times, vals) over [a, b].
inline double trapezoid_clipped(const std::vector<double>& times,
                                const std::vector<double>& vals, double a,
                                double b) {
    double acc = 0.0;
    for (std::size_t j = 0; j + 1 < times.size(); ++j) {
        const double lo = std::max(times[j], a);
        const double hi = std::min(times[j + 1], b);
        if (hi <= lo) continue;
        const double vlo = interp_at(times, vals, lo);
        const double vhi = interp_at(times, vals, hi);
        acc += 0.5 * (vlo + vhi) * (hi - lo);
    }
    return acc;
}

}  // namespace detail

/// Computes the stage-k truncation energy at a threshold scale:
/// (1/2) sup_{t in [T_k, 1]} integral of excess^2 plus the space-time
/// integral of the squared dissipation density over the same window.
/// Throws TimeRangeUncovered unless the time nodes span [T_k, 1].
inline EnergyReport energy_U(const SpaceTimeField& f, double scale, int k) {
    const double level = truncation_level(scale, k);
    const double t_lo = truncation_time(k);
    const double t_hi = 1.0;
    if (f.times.empty() || f.times.front() > t_lo || f.times.back() < t_hi) {
        throw Error(ErrorCode::TimeRangeUncovered,
                    "time nodes must span [" + std::to_string(t_lo) + ", 1]");
    }
    const std::size_t nt = f.times.size();
    const std::size_t nx = f.weights.size();
    std::vector<double> mass(nt, 0.0);  // integral of excess^2 at each node
    std::vector<double> diss(nt, 0.0);  // integral of density^2 at each node
    for (std::size_t j = 0; j < nt; ++j) {
        double m = 0.0;
        double d = 0.0;
        for (std::size_t i = 0; i < nx; ++i) {
            const double s = f.speed[j][i];
            const double ex = truncate_excess(s, level);
            if (ex <= 0.0) continue;
            const double w = f.weights[i];
            m += w * ex * ex;
            const double g = f.grad_speed[j][i];
            const double h = f.grad_full[j][i];
            d += w * ((level / s) * g * g + (ex / s) * h * h);
        }
        mass[j] = m;
        diss[j] = d;
    }
    EnergyReport rep;
    double sup = std::max(detail::interp_at(f.times, mass, t_lo),
                          detail::interp_at(f.times, mass, t_hi));
    for (std::size_t j = 0; j < nt; ++j) {
        if (f.times[j] > t_lo && f.times[j] < t_hi) {
            sup = std::max(sup, mass[j]);
        }
    }
    rep.sup_term = 0.5 * sup;
    rep.diss_term = detail::trapezoid_clipped(f.times, diss, t_lo, t_hi);
    rep.value = rep.sup_term + rep.diss_term;
    return rep;
}

// ===========================================================================
// Cutoff helpers
// ===========================================================================

/// Odd C^1 plateau function: zero on [-L, L], cubic ramp on [L, L+1] with
/// maximal slope 3/2, constant +/-1 beyond.
struct OddPlateau {
    double L = 1.0;
    double operator()(double s) const {
        const double a = std::clamp(std::abs(s) - L, 0.0, 1.0);
        return std::copysign(smoothstep01(a), s);
    }
    double slope(double s) const {
        const double a = std::abs(s) - L;
        if (a <= 0.0 || a >= 1.0) return 0.0;
        return smoothstep01_deriv(a);
    }
};

/// Piecewise-linear level indicator: zero up to C_k, unit slope on
/// [C_k, C_k + 1], constant 1 beyond.
struct LevelRamp {
    double C_k = 0.0;
    double operator()(double s) const {
        return std::clamp(s - C_k, 0.0, 1.0);
    }
    double slope(double s) const {
        return (s > C_k && s < C_k + 1.0) ? 1.0 : 0.0;
    }
};

/// Pair of cutoffs used by the truncation bookkeeping.
struct CutoffPair {
    OddPlateau psi;
    LevelRamp phi;
};

/// Builds the cutoff pair for plateau half-width L and ramp knot C_k.
inline CutoffPair make_cutoffs(double L, double C_k) {
    if (!(L > 0.0) || !std::isfinite(C_k)) {
        throw Error(ErrorCode::ConfigInvalid,
                    "cutoffs need L > 0 and a finite ramp knot");
    }
    return CutoffPair{OddPlateau{L}, LevelRamp{C_k}};
}

// ===========================================================================
// Level-set bounds
// ===========================================================================

/// Result of comparing a measured quantity against a closed-form bound.
struct BoundCheck {
    double lhs = 0.0;          ///< measured quantity
    double rhs = 0.0;          ///< closed-form bound
    double c0_required = 0.0;  ///< prefactor that would give equality
    bool satisfied = false;    ///< lhs <= rhs (with the caller's slack baked
                               ///< into rhs where applicable)
};

namespace detail {

inline void require_alpha(double alpha) {
    if (!(alpha > 2.0) || !(alpha < 3.0)) {
        throw Error(ErrorCode::AlphaOutOfRange,
                    "alpha must lie in (2, 3), got " + std::to_string(alpha));
    }
}

}  // namespace detail

/// Layer-cake prefactor 2^{alpha-1}/(alpha-2) shared by the second-moment
/// and interpolation bounds.
inline double layer_cake_prefactor(double alpha) {
    detail::require_alpha(alpha);
    return std::pow(2.0, alpha - 1.0) / (alpha - 2.0);
}

/// Closed-form bound on the second moment of the stage-(k-1) excess over
/// the R^beta ladder in terms of the weak norm:
/// [2^{alpha-1}/(alpha-2)] * weak * R^{-beta (alpha-2)}.  Needs k >= 2 so
/// that the preceding level is at least half the scale.
inline double second_moment_layercake_bound(double weak, double R,
                                            double alpha, double beta,
                                            int k) {
    detail::require_alpha(alpha);
    if (!(R > 1.0) || !(beta > 0.0) || !(weak >= 0.0)) {
        throw Error(ErrorCode::ConfigInvalid,
                    "layer-cake bound needs R > 1, beta > 0, weak >= 0");
    }
    if (k < 2) {
        throw Error(ErrorCode::ConfigInvalid,
                    "layer-cake bound applies from stage 2 on", k);
    }
    return layer_cake_prefactor(alpha) * weak *
           std::pow(R, -beta * (alpha - 2.0));
}

/// Checks a measured second moment against the layer-cake bound with a
/// multiplicative slack for quadrature error.
inline BoundCheck check_layercake(double second_moment, double weak, double R,
                                  double alpha, double beta, int k,
                                  double slack = 1.05) {
    if (!(slack >= 1.0)) {
        throw Error(ErrorCode::ConfigInvalid, "slack must be >= 1");
    }
    BoundCheck c;
    c.lhs = second_moment;
    c.rhs = slack * second_moment_layercake_bound(weak, R, alpha, beta, k);
    c.c0_required = c.rhs > 0.0 ? c.lhs / (c.rhs / slack) : 0.0;
    c.satisfied = c.lhs <= c.rhs;
    return c;
}

/// Discrete Chebyshev bound for one level: the measure of {samples > level}
/// never exceeds level^{-10/3} times the (10/3)-th moment.
struct ChebyshevLevel {
    double measure = 0.0;
    double bound = 0.0;
};

inline ChebyshevLevel chebyshev_level_bound(
    const std::vector<double>& samples, const std::vector<double>& weights,
    double level) {
    if (samples.empty() || samples.size() != weights.size()) {
        throw Error(ErrorCode::ConfigInvalid,
                    "need matching non-empty samples and weights");
    }
    if (!(level > 0.0)) {
        throw Error(ErrorCode::ConfigInvalid, "level must be positive");
    }
    ChebyshevLevel out;
    double moment = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double s = samples[i];
        if (!std::isfinite(s) || !std::isfinite(weights[i])) {
            throw Error(ErrorCode::NonFiniteSample, "non-finite sample",
                        static_cast<long>(i));
        }
        if (s > level) out.measure += weights[i];
        if (s > 0.0) moment += weights[i] * std::pow(s, 10.0 / 3.0);
    }
    out.bound = std::pow(level, -10.0 / 3.0) * moment;
    return out;
}

// ===========================================================================
// Recurrence-step bounds
// ===========================================================================

/// One-step energy bound through the weak-norm interpolation route:
/// C0 * ([2^{alpha-1}/(alpha-2)] weak)^{2/3-delta} * U_prev^{1+delta}
///    / R^{beta (alpha-2) (2/3-delta)}.
inline BoundCheck check_weakLP(double U_k, double U_prev, double weak,
                               double R, double alpha, double beta,
                               double delta, double C0) {
    detail::require_alpha(alpha);
    if (!(delta > 0.0) || !(delta < 4.0 / 3.0)) {
        throw Error(ErrorCode::DeltaOutOfRange,
                    "delta must lie in (0, 4/3), got " + std::to_string(delta));
    }
    if (!(R > 1.0) || !(beta > 0.0) || !(weak >= 0.0) || !(U_prev >= 0.0) ||
        !(C0 > 0.0)) {
        throw Error(ErrorCode::ConfigInvalid,
                    "check needs R > 1, beta > 0, weak >= 0, U_prev >= 0, "
                    "C0 > 0");
    }
    const double core =
        std::pow(layer_cake_prefactor(alpha) * weak, 2.0 / 3.0 - delta) *
        std::pow(U_prev, 1.0 + delta) *
        std::pow(R, -beta * (alpha - 2.0) * (2.0 / 3.0 - delta));
    BoundCheck c;
    c.lhs = U_k;
    c.rhs = C0 * core;
    c.c0_required = core > 0.0 ? U_k / core : 0.0;
    c.satisfied = c.lhs <= c.rhs;
    return c;
}

/// One-step bound through the Chebyshev route at integrability exponent q:
/// C0^{1/q} [2^{alpha-1}/(alpha-2)]^{(2/3-delta)/q} 2^{10k/(3q)}
///   * weak^{(2/3-delta)/q} * U_prev^{(1+delta)/q}
///   / R^{(1/q)(10 beta/3 + beta (alpha-2)(2/3-delta))}.
inline BoundCheck check_cheb(double lhs, double U_prev, double weak, double R,
                             double alpha, double beta, double delta,
                             double q, int k, double C0) {
    detail::require_alpha(alpha);
    if (!(delta > 0.0) || !(delta < 4.0 / 3.0)) {
        throw Error(ErrorCode::DeltaOutOfRange,
                    "delta must lie in (0, 4/3), got " + std::to_string(delta));
    }
    if (!(q > 1.0)) {
        throw Error(ErrorCode::QOutOfRange,
                    "integrability exponent must exceed 1, got " +
                        std::to_string(q));
    }
    if (!(R > 1.0) || !(beta > 0.0) || !(weak >= 0.0) || !(U_prev >= 0.0) ||
        !(C0 > 0.0) || k < 1) {
        throw Error(ErrorCode::ConfigInvalid,
                    "check needs R > 1, beta > 0, weak >= 0, U_prev >= 0, "
                    "C0 > 0, k >= 1");
    }
    const double inv_q = 1.0 / q;
    const double wexp = (2.0 / 3.0 - delta) * inv_q;
    const double rexp =
        inv_q * (10.0 * beta / 3.0 + beta * (alpha - 2.0) * (2.0 / 3.0 - delta));
    const double core = std::pow(layer_cake_prefactor(alpha), wexp) *
                        std::pow(2.0, 10.0 * k / (3.0 * q)) *
                        std::pow(weak, wexp) *
                        std::pow(U_prev, (1.0 + delta) * inv_q) *
                        std::pow(R, -rexp);
    BoundCheck c;
    c.lhs = lhs;
    c.rhs = std::pow(C0, inv_q) * core;
    c.c0_required = core > 0.0 ? std::pow(lhs / core, q) : 0.0;
    c.satisfied = c.lhs <= c.rhs;
    return c;
}

// ===========================================================================
// Domination of the two dissipation ladders
// ===========================================================================

/// Supremum of the ratio between the R^beta-ladder and R-ladder dissipation
/// densities over the nodes supporting both.
struct DominationReport {
    double max_ratio = 0.0;
    double bound = 0.0;
    long n_support = 0;
    bool passes = false;
};

inline DominationReport check_domination(const SpaceTimeField& f, double R,
                                         double beta, int k,
                                         double bound = std::sqrt(5.0) +
                                                         1e-9) {
    if (!(R > 1.0) || !(beta >= 1.0) || k < 1) {
        throw Error(ErrorCode::ConfigInvalid,
                    "domination check needs R > 1, beta >= 1, k >= 1");
    }
    const double scale_w = std::pow(R, beta);
    DominationReport rep;
    rep.bound = bound;
    for (std::size_t j = 0; j < f.times.size(); ++j) {
        for (std::size_t i = 0; i < f.weights.size(); ++i) {
            const double s = f.speed[j][i];
            if (s <= 0.0) continue;
            const double dd =
                dissipation_density_sq(s, f.grad_speed[j][i],
                                       f.grad_full[j][i], R, k);
            if (dd <= 0.0) continue;
            const double DD =
                dissipation_density_sq(s, f.grad_speed[j][i],
                                       f.grad_full[j][i], scale_w, k);
            if (DD <= 0.0) continue;
            ++rep.n_support;
            rep.max_ratio = std::max(rep.max_ratio, std::sqrt(DD / dd));
        }
    }
    rep.passes = rep.max_ratio <= bound;
    return rep;
}

// ===========================================================================
// Energy-recurrence fit
// ===========================================================================

/// Least-squares fit of log U_k = k log C0 + b + beta log U_{k-1} over the
/// stages with positive energies, with lambda recovered from b = -lambda
/// log R.
struct RecurrenceFit {
    double log_c0 = 0.0;
    double lambda = 0.0;
    double beta = 0.0;
    int n_points = 0;
};

inline RecurrenceFit fit_energy_recurrence(const std::vector<double>& Us,
                                           double R) {
    if (!(R > 1.0)) {
        throw Error(ErrorCode::ConfigInvalid,
                    "recurrence fit needs R > 1 to resolve lambda");
    }
    // Collect rows (k, 1, log U_{k-1}) -> log U_k.
    std::vector<double> xk, x1, xp, y;
    for (std::size_t k = 1; k < Us.size(); ++k) {
        if (!(Us[k] > 0.0) || !(Us[k - 1] > 0.0)) continue;
        xk.push_back(static_cast<double>(k));
        x1.push_back(1.0);
        xp.push_back(std::log(Us[k - 1]));
        y.push_back(std::log(Us[k]));
    }
    const std::size_t n = y.size();
    if (n < 3) {
        throw Error(ErrorCode::DegenerateFit,
                    "need at least three consecutive positive energies",
                    static_cast<long>(n));
    }
    // Normal equations for the 3-parameter least squares.
    double A[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
    double rhs[3] = {0, 0, 0};
    for (std::size_t i = 0; i < n; ++i) {
        const double row[3] = {xk[i], x1[i], xp[i]};
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) A[a][b] += row[a] * row[b];
            rhs[a] += row[a] * y[i];
        }
    }
    // Gaussian elimination with partial pivoting on the 3x3 system.
    int piv[3] = {0, 1, 2};
    for (int col = 0; col < 3; ++col) {
        int best = col;
        for (int r = col + 1; r < 3; ++r) {
            if (std::abs(A[piv[r]][col]) > std::abs(A[piv[best]][col])) {
                best = r;
            }
        }
        std::swap(piv[col], piv[best]);
        const double p = A[piv[col]][col];
        if (std::abs(p) < 1e-300) {
            throw Error(ErrorCode::DegenerateFit,
                        "normal equations are singular");
        }
        for (int r = col + 1; r < 3; ++r) {
            const double m = A[piv[r]][col] / p;
            for (int c = col; c < 3; ++c) A[piv[r]][c] -= m * A[piv[col]][c];
            rhs[piv[r]] -= m * rhs[piv[col]];
        }
    }
    double sol[3];
    for (int col = 2; col >= 0; --col) {
        double acc = rhs[piv[col]];
        for (int c = col + 1; c < 3; ++c) acc -= A[piv[col]][c] * sol[c];
        sol[col] = acc / A[piv[col]][col];
    }
    RecurrenceFit fit;
    fit.log_c0 = sol[0];
    fit.lambda = -sol[1] / std::log(R);
    fit.beta = sol[2];
    fit.n_points = static_cast<int>(n);
    return fit;
}

/// Exponent lambda from a scale sweep: minus the slope of log U_1 against
/// log R over at least two scales with positive first-stage energies.
inline double lambda_from_sweep(const std::vector<double>& Rs,
                                const std::vector<double>& U1s) {
    if (Rs.size() != U1s.size() || Rs.size() < 2) {
        throw Error(ErrorCode::DegenerateFit,
                    "scale sweep needs at least two matching points");
    }
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < Rs.size(); ++i) {
        if (!(Rs[i] > 0.0) || !(U1s[i] > 0.0)) {
            throw Error(ErrorCode::DegenerateFit,
                        "scale sweep needs positive scales and energies",
                        static_cast<long>(i));
        }
        lx.push_back(std::log(Rs[i]));
        ly.push_back(std::log(U1s[i]));
    }
    return -fit_line(lx, ly).slope;
}

// ===========================================================================
// Driver
// ===========================================================================

/// Per-stage energy bookkeeping for one field at scales R and R^beta.
struct TruncationLedger {
    double R = 0.0;
    double beta = 0.0;
    int k_max = 0;
    std::vector<double> U;       ///< energies on the R ladder, k = 0..k_max
    std::vector<double> W;       ///< energies on the R^beta ladder
    std::vector<double> domination;  ///< sup density ratio per stage 1..k_max
};

inline TruncationLedger degiorgi_driver(const SpaceTimeField& f, double R,
                                        double beta, int k_max) {
    if (!(R > 1.0) || !(beta >= 1.0) || k_max < 1) {
        throw Error(ErrorCode::ConfigInvalid,
                    "driver needs R > 1, beta >= 1, k_max >= 1");
    }
    TruncationLedger led;
    led.R = R;
    led.beta = beta;
    led.k_max = k_max;
    const double scale_w = std::pow(R, beta);
    for (int k = 0; k <= k_max; ++k) {
        led.U.push_back(energy_U(f, R, k).value);
        led.W.push_back(energy_U(f, scale_w, k).value);
    }
    for (int k = 1; k <= k_max; ++k) {
        led.domination.push_back(check_domination(f, R, beta, k).max_ratio);
    }
    return led;
}

// ===========================================================================
// Snapshot families
// ===========================================================================

/// Radial power-law snapshot family on the unit ball: speed rho^{-3/alpha},
/// |grad |u|| = (3/alpha) rho^{-3/alpha - 1}, |grad u| = gamma times that,
/// static across the given time nodes, with midpoint shell weights.
inline SpaceTimeField make_radial_snapshot_family(
    double alpha, double gamma, int n_rho, double rho_min = 0.005,
    std::vector<double> times = {0.0, 0.5, 1.0}) {
    detail::require_alpha(alpha);
    if (!(gamma >= 1.0) || n_rho < 8 || !(rho_min > 0.0) || !(rho_min < 1.0)) {
        throw Error(ErrorCode::ConfigInvalid,
                    "radial family needs gamma >= 1, n_rho >= 8, "
                    "rho_min in (0, 1)");
    }
    const double d = (1.0 - rho_min) / n_rho;
    std::vector<double> w(n_rho), s(n_rho), g(n_rho), h(n_rho);
    for (int i = 0; i < n_rho; ++i) {
        const double rho = rho_min + (i + 0.5) * d;
        w[i] = 4.0 * kPi * rho * rho * d;
        s[i] = std::pow(rho, -3.0 / alpha);
        g[i] = (3.0 / alpha) * std::pow(rho, -3.0 / alpha - 1.0);
        h[i] = gamma * g[i];
    }
    const std::size_t nt = times.size();
    return make_space_time_field(
        std::move(times), std::move(w),
        std::vector<std::vector<double>>(nt, s),
        std::vector<std::vector<double>>(nt, g),
        std::vector<std::vector<double>>(nt, h));
}

/// Purely kinetic spherical bump: speed sqrt(1 - rho^2) on the unit ball
/// with zero recorded gradients, static across the given time nodes.  Its
/// stage-0 energy is exactly half the squared L2 mass.
inline SpaceTimeField make_kinetic_bump_family(
    int n_rho, std::vector<double> times = {0.0, 0.5, 1.0}) {
    if (n_rho < 8) {
        throw Error(ErrorCode::ConfigInvalid, "bump family needs n_rho >= 8");
    }
    const double d = 1.0 / n_rho;
    std::vector<double> w(n_rho), s(n_rho);
    for (int i = 0; i < n_rho; ++i) {
        const double rho = (i + 0.5) * d;
        w[i] = 4.0 * kPi * rho * rho * d;
        s[i] = std::sqrt(std::max(1.0 - rho * rho, 0.0));
    }
    const std::size_t nt = times.size();
    const std::vector<double> zero(static_cast<std::size_t>(n_rho), 0.0);
    return make_space_time_field(
        std::move(times), std::move(w),
        std::vector<std::vector<double>>(nt, s),
        std::vector<std::vector<double>>(nt, zero),
        std::vector<std::vector<double>>(nt, zero));
}

}  // namespace swirllab::degiorgi
