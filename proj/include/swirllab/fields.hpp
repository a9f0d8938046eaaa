/// @file fields.hpp
/// @brief The swirl profile (axial direction-cosine schedule), its reference
///        construction on dyadic annuli, the divergence-free tube field it
///        induces, profile validation, and streamline growth reports.
///
/// Geometry of the reference construction, in a straight tube of radius r_1
/// about the z-axis with cap height S:
///
///   * dyadic annuli A_j = { r_{j+1} < r <= r_j }, r_j = 2^{1-j}, j = 1..J;
///     the residual disc r <= r_{J+1} is the "core".
///   * on annulus j the axial cosine omega_z follows the upper envelope
///     (S - z)^{1/alpha} until the budget milestone S_j, then descends
///     steeply (slope -(1+margin)(S - z)^{-1/6}) until S~_j, then stays
///     constant at the reached value.
///   * milestones solve |A_j| * log(S/(S - S_j)) = C_budget, which makes
///     tau_j := -log(S - S_j) = C_budget / |A_j| exactly, and S~_j doubles
///     tau.  For deep annuli S_j is unrepresentable in double (1 - S_j
///     underflows), so the whole schedule is evaluated in the stretched
///     coordinate tau = -log(S - z) with log-valued outputs.
///   * a guarded floor max(descent, (1+margin) * (S - z)^{1/2 - epsilon}),
///     capped by the descent start value, keeps the profile strictly above
///     the lower envelope even where the mandated descent would cross it.
///     Annuli whose pure descent would cross the guard are *infeasible*:
///     they are reported (never silently patched into compliance) and
///     excluded from certification.
///   * neighboring schedules are joined by a C^1 radial blend band hosted
///     just inside each annulus boundary (width 0.025 * boundary radius);
///     hosting bands on the outer side instead would leak the inner
///     neighbor's envelope slope into the steepness window and the sixth
///     power of the direction divergence would blow up doubly
///     exponentially, so this placement is forced.
///
/// The induced velocity field is u = flux(r) * (e_z + (omega_theta /
/// omega_z) e_theta) with omega_theta = sqrt(1 - omega_z^2).  It is exactly
/// divergence-free (u_r = 0, u_z depends on r only, u_theta is
/// axisymmetric), has |u| = flux / omega_z, and its direction divergence
/// div(u/|u|) equals d(omega_z)/dz analytically.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "swirllab/core.hpp"
#include "swirllab/geometry.hpp"

namespace swirllab::fields {

// ============================================================================
// Log-domain schedule evaluation
// ============================================================================

/// Value and axial slope of omega_z at one (r, tau) point, in log form.
/// sign_dz is -1 where the schedule strictly decreases and 0 on flats
/// (omega_z never increases in z anywhere in this construction).
struct OmegaLog {
    double log_omega = 0.0;
    double log_abs_dz = -std::numeric_limits<double>::infinity();
    int sign_dz = 0;
};

/// Summary of one annulus of the reference construction.
struct AnnulusInfo {
    int j = 0;
    double r_outer = 0.0;
    double r_inner = 0.0;
    double area = 0.0;      ///< |A_j|
    double c = 0.0;         ///< budget burden C_budget/|A_j| = -log(S - S_j)
    double S_j = 0.0;       ///< first milestone (rounds to S for deep annuli)
    double S_tilde_j = 0.0; ///< second milestone (descent end)
    bool descent_feasible = false;  ///< pure descent clears the guarded floor
    double min_gap = 0.0;      ///< min of descent - guard over the window
                               ///< (value domain; underflows to 0 for deep annuli)
    double min_log_gap = 0.0;  ///< log(descent/guard) at the gap-critical points;
                               ///< its sign decides feasibility at any depth
    double log_omega_end = 0.0;  ///< realized schedule value at tau = 2c
};

// ============================================================================
// SwirlProfile
// ============================================================================

/// Parameters of build_reference_profile.
struct ReferenceParams {
    double alpha = 2.5;
    double epsilon = 0.05;
    double S = 1.0;
    double C_budget = 1.0;
    double margin = 0.05;         ///< guard/steepness safety factor (1+margin)
    int J_max = 8;                ///< number of dyadic annuli
    double band_fraction = 0.025; ///< blend band width / boundary radius
    bool strict = false;          ///< throw InfeasibleAnnulus instead of flagging
};

/// An axial direction-cosine schedule omega_z(r, z) on the tube, evaluated
/// in the stretched coordinate tau = -log(S - z) with log-valued outputs.
///
/// Invariants (validated by validate_profile on a lattice):
///  1. lower envelope, strict: omega_z(r, z) > (S-z)^{1/2-epsilon} on (0, S);
///  2. upper envelope on annuli: omega_z <= (S-z)^{1/alpha} for z < S_j;
///  3. steepness of the annulus-average on (S_j, S~_j):
///     |d/dz avg(omega_z)| >= (S-z)^{-1/6};
///  4. budget: |A_j| * log(S/(S-S_j)) >= C_budget.
class SwirlProfile {
  public:
    double alpha = 2.5;
    double epsilon = 0.05;
    double S = 1.0;
    double C_budget = 1.0;
    double margin = 0.05;
    double band_fraction = 0.025;
    int J_max = 0;
    std::vector<double> radii;        ///< r_1..r_{J_max+1} (empty for kernels)
    std::vector<AnnulusInfo> annuli;  ///< index 0 holds annulus j = 1

    /// Custom schedule from a raw kernel (control fields, adversarial tests).
    static SwirlProfile from_kernel(std::function<OmegaLog(double, double)> kernel,
                                    double alpha, double epsilon, double S,
                                    double C_budget) {
        SwirlProfile p;
        p.alpha = alpha;
        p.epsilon = epsilon;
        p.S = S;
        p.C_budget = C_budget;
        p.kernel_ = std::move(kernel);
        return p;
    }

    bool has_kernel() const { return static_cast<bool>(kernel_); }

    /// Log-domain evaluation at radius r and stretched coordinate tau >= 0.
    OmegaLog eval_log(double r, double tau) const {
        if (kernel_) return kernel_(r, tau);
        // Region: annulus index 1..J_max, or J_max+1 for the core disc.
        // The skirt outside r_1 continues the outermost schedule.
        int a = 1;
        while (a <= J_max && r <= radii[static_cast<std::size_t>(a)]) ++a;
        // Blend band hosted just inside the boundary r_b = radii[a-1].
        if (a >= 2) {
            const double rb = radii[static_cast<std::size_t>(a - 1)];
            const double w = band_fraction * rb;
            if (r > rb - w) {
                const double t = smoothstep01((r - (rb - w)) / w);
                return blend(schedule_eval(a, tau), schedule_eval(a - 1, tau), t);
            }
        }
        return schedule_eval(a, tau);
    }

    /// Plain-domain value; safe for every representable z in [0, S).
    double omega_z(double r, double z) const {
        return std::exp(eval_log(r, tau_of_z(z, S)).log_omega);
    }

    /// Plain-domain axial slope d(omega_z)/dz (<= 0 everywhere).
    double domega_dz(double r, double z) const {
        const OmegaLog v = eval_log(r, tau_of_z(z, S));
        if (v.sign_dz == 0) return 0.0;
        return static_cast<double>(v.sign_dz) * std::exp(v.log_abs_dz);
    }

    /// Largest annulus index whose descent is feasible (0 when none).
    int feasible_j_max_hint() const {
        int best = 0;
        for (const AnnulusInfo& a : annuli) {
            if (a.descent_feasible) best = std::max(best, a.j);
        }
        return best;
    }

  private:
    friend SwirlProfile build_reference_profile(const ReferenceParams&);

    std::function<OmegaLog(double, double)> kernel_;

    /// Convex combination (1-t)*a + t*b of two schedule values, in log form.
    static OmegaLog blend(const OmegaLog& a, const OmegaLog& b, double t) {
        if (t <= 0.0) return a;
        if (t >= 1.0) return b;
        const double la = std::log1p(-t);
        const double lb = std::log(t);
        OmegaLog out;
        out.log_omega = log_sum_exp(la + a.log_omega, lb + b.log_omega);
        // Slopes are all <= 0, so magnitudes combine convexly too.
        double m = -std::numeric_limits<double>::infinity();
        if (a.sign_dz != 0) m = la + a.log_abs_dz;
        if (b.sign_dz != 0) m = log_sum_exp(m, lb + b.log_abs_dz);
        if (std::isfinite(m)) {
            out.log_abs_dz = m;
            out.sign_dz = -1;
        }
        return out;
    }

    /// Pure per-annulus schedule; idx = J_max+1 addresses the core (envelope
    /// all the way to the cap).
    OmegaLog schedule_eval(int idx, double tau) const {
        OmegaLog out;
        const double inv_alpha = 1.0 / alpha;
        if (idx > J_max) {  // core disc
            out.log_omega = -tau * inv_alpha;
            out.log_abs_dz = -std::log(alpha) + (1.0 - inv_alpha) * tau;
            out.sign_dz = -1;
            return out;
        }
        const AnnulusInfo& an = annuli[static_cast<std::size_t>(idx - 1)];
        const double c = an.c;
        if (tau <= c) {  // upper envelope segment
            out.log_omega = -tau * inv_alpha;
            out.log_abs_dz = -std::log(alpha) + (1.0 - inv_alpha) * tau;
            out.sign_dz = -1;
            return out;
        }
        if (tau >= 2.0 * c) {  // flat tail at the reached value
            out.log_omega = an.log_omega_end;
            return out;
        }
        // Descent window: max(descent, min(start value, guard)).
        const double log_start = -c * inv_alpha;
        const double log_desc = log_descent(an, tau);
        const double log_guard_raw = std::log1p(margin) - (0.5 - epsilon) * tau;
        const double log_guard_capped = std::min(log_start, log_guard_raw);
        if (log_desc >= log_guard_capped) {
            out.log_omega = log_desc;
            out.log_abs_dz = std::log1p(margin) + tau / 6.0;
            out.sign_dz = -1;
        } else if (log_guard_raw >= log_start) {
            out.log_omega = log_start;  // cap: guard still above the start value
        } else {
            out.log_omega = log_guard_raw;  // riding the guarded floor
            out.log_abs_dz =
                std::log1p(margin) + std::log(0.5 - epsilon) + (0.5 + epsilon) * tau;
            out.sign_dz = -1;
        }
        return out;
    }

    /// log of the pure descent value D0 - (1+m)(6/5)[x_j^{5/6} - x^{5/6}],
    /// evaluated stably as D0 * (1 - q); -inf if the descent hit zero.
    double log_descent(const AnnulusInfo& an, double tau) const {
        const double c = an.c;
        const double q = (1.0 + margin) * 1.2 *
                         std::exp(-(5.0 / 6.0 - 1.0 / alpha) * c) *
                         (-std::expm1(-(5.0 / 6.0) * (tau - c)));
        if (q >= 1.0) return -std::numeric_limits<double>::infinity();
        return -c / alpha + std::log1p(-q);
    }
};

// ============================================================================
// Reference construction
// ============================================================================

/// Builds the dyadic-annulus reference schedule.  Infeasible annuli (whose
/// mandated descent would cross the guarded floor) are flagged in the
/// returned profile; with `strict` they raise InfeasibleAnnulus instead.
///
/// @throws Error{AlphaOutOfRange}  unless alpha in (2, 3)
/// @throws Error{EpsilonTooLarge}  unless epsilon in (0, 1/2 - 1/alpha)
/// @throws Error{InfeasibleAnnulus} in strict mode only
inline SwirlProfile build_reference_profile(const ReferenceParams& params = {}) {
    if (!(params.alpha > 2.0) || !(params.alpha < 3.0)) {
        throw Error(ErrorCode::AlphaOutOfRange,
                    "reference construction needs alpha strictly inside (2, 3)");
    }
    const double eps_cap = 0.5 - 1.0 / params.alpha;
    if (!(params.epsilon > 0.0) || !(params.epsilon < eps_cap)) {
        throw Error(ErrorCode::EpsilonTooLarge,
                    "epsilon must lie in (0, 1/2 - 1/alpha) = (0, " +
                        std::to_string(eps_cap) + ")");
    }
    if (params.J_max < 1 || !(params.S > 0.0) || !(params.C_budget > 0.0) ||
        !(params.margin > 0.0) || !(params.band_fraction > 0.0) ||
        !(params.band_fraction < 0.25)) {
        throw Error(ErrorCode::ConfigInvalid, "reference profile parameters out of range");
    }

    SwirlProfile p;
    p.alpha = params.alpha;
    p.epsilon = params.epsilon;
    p.S = params.S;
    p.C_budget = params.C_budget;
    p.margin = params.margin;
    p.band_fraction = params.band_fraction;
    p.J_max = params.J_max;
    p.radii.resize(static_cast<std::size_t>(params.J_max) + 1);
    for (int j = 1; j <= params.J_max + 1; ++j) {
        p.radii[static_cast<std::size_t>(j - 1)] = std::ldexp(1.0, 1 - j);
    }

    const double le = 0.5 - params.epsilon;  // lower-envelope exponent
    p.annuli.reserve(static_cast<std::size_t>(params.J_max));
    for (int j = 1; j <= params.J_max; ++j) {
        AnnulusInfo an;
        an.j = j;
        an.r_outer = p.radii[static_cast<std::size_t>(j - 1)];
        an.r_inner = p.radii[static_cast<std::size_t>(j)];
        an.area = kPi * (an.r_outer * an.r_outer - an.r_inner * an.r_inner);
        an.c = params.C_budget / an.area;
        an.S_j = params.S * (-std::expm1(-an.c));
        an.S_tilde_j = params.S * (-std::expm1(-2.0 * an.c));

        // Feasibility: gap(x) = descent(x) - (1+m) x^{1/2-eps} on the window
        // x in [e^{-2c}, e^{-c}] (x = S - z normalized).  gap'(x) vanishes
        // where x^{-1/6} = (1/2-eps) x^{(1/2-eps)-1}, i.e. at
        // x* = (1/2-eps)^{1/(5/6-(1/2-eps))}; the gap decreases (in z)
        // before x* and increases after, so its minimum over the window sits
        // at x* clamped into the window.  The sign test runs in the log
        // domain because both terms underflow doubles for deep annuli.
        {
            const double expo = 5.0 / 6.0 - le;  // > 0 since eps < 1/3
            const double tau_crit =
                std::clamp(-std::log(le) / expo, an.c, 2.0 * an.c);
            double min_log = std::numeric_limits<double>::infinity();
            double min_val = std::numeric_limits<double>::infinity();
            for (double tau : {an.c, tau_crit, 2.0 * an.c}) {
                const double ld = p.log_descent(an, tau);  // -inf if descent hit 0
                const double lg = std::log1p(params.margin) - le * tau;
                min_log = std::min(min_log, ld - lg);
                min_val = std::min(min_val, std::exp(ld) - std::exp(lg));
            }
            an.min_log_gap = min_log;
            an.min_gap = min_val;
            an.descent_feasible = min_log > 0.0;
        }
        if (!an.descent_feasible && params.strict) {
            throw Error(ErrorCode::InfeasibleAnnulus,
                        "annulus " + std::to_string(j) +
                            ": mandated descent crosses the guarded lower envelope "
                            "(min gap " + std::to_string(an.min_gap) + ")",
                        j);
        }
        p.annuli.push_back(an);
    }
    // Realized value at each window end: the descent/guard max at tau = 2c.
    for (AnnulusInfo& an : p.annuli) {
        const double tau_end = 2.0 * an.c;
        const double log_start = -an.c / p.alpha;
        const double log_desc = p.log_descent(an, tau_end);
        const double log_guard =
            std::min(log_start, std::log1p(p.margin) - le * tau_end);
        an.log_omega_end = std::max(log_desc, log_guard);
    }
    return p;
}

// ============================================================================
// Tube field
// ============================================================================

/// Axial speed profiles: `rolloff` descends C^1 from 1 to 1/2 across the
/// outer tenth of the tube (flux sup/inf = 2 for bundle diagnostics);
/// `constant` keeps speed 1 through the whole tube.  Both fade smoothly to
/// zero across the support skirt (tube_radius, 1.1 * tube_radius].
enum class FluxShape { rolloff, constant };

/// A divergence-free velocity field on a straight tube about the z-axis.
struct TubeField {
    SwirlProfile profile;
    FluxShape flux_shape = FluxShape::rolloff;
    double tube_radius = 1.0;
    double support_radius = 1.1;

    double flux(double r) const {
        if (r <= 0.0) r = 0.0;
        if (flux_shape == FluxShape::rolloff) {
            if (r <= 0.9 * tube_radius) return 1.0;
            if (r <= tube_radius) {
                return 1.0 -
                       0.5 * smoothstep01((r / tube_radius - 0.9) / 0.1);
            }
            if (r < support_radius) {
                return 0.5 * (1.0 - smoothstep01((r - tube_radius) /
                                                 (support_radius - tube_radius)));
            }
            return 0.0;
        }
        if (r <= tube_radius) return 1.0;
        if (r < support_radius) {
            return 1.0 - smoothstep01((r - tube_radius) /
                                      (support_radius - tube_radius));
        }
        return 0.0;
    }

    bool in_support(Point3 q) const {
        const double r = std::hypot(q.x, q.y);
        return r < support_radius && q.z >= 0.0 && q.z < profile.S;
    }

    Vec3 velocity(Point3 q) const;
};

inline TubeField make_tube_field(SwirlProfile profile, FluxShape shape) {
    TubeField f;
    const double r1 = profile.radii.empty() ? 1.0 : profile.radii.front();
    f.profile = std::move(profile);
    f.flux_shape = shape;
    f.tube_radius = r1;
    f.support_radius = 1.1 * r1;
    return f;
}

/// Velocity u = flux * (e_z + (omega_theta/omega_z) e_theta); zero vector
/// outside the support (no precondition).  |u| = flux / omega_z.
///
/// @throws Error{SingularSwirl} if omega_z collapses below 1e-300
inline Vec3 evaluate_velocity(const TubeField& field, Point3 q) {
    if (!field.in_support(q)) return {0.0, 0.0, 0.0};
    const double r = std::hypot(q.x, q.y);
    const double fl = field.flux(r);
    if (fl <= 0.0) return {0.0, 0.0, 0.0};
    const OmegaLog v = field.profile.eval_log(r, tau_of_z(q.z, field.profile.S));
    if (v.log_omega < std::log(1e-300)) {
        throw Error(ErrorCode::SingularSwirl,
                    "omega_z below 1e-300; swirl ratio not representable");
    }
    const double w = std::exp(v.log_omega);
    const double wt = std::sqrt(std::max(0.0, 1.0 - w * w));
    const double u_theta = fl * wt / w;
    if (r < 1e-300) return {0.0, 0.0, fl};  // azimuthal direction undefined on axis
    return {-u_theta * q.y / r, u_theta * q.x / r, fl};
}

inline Vec3 TubeField::velocity(Point3 q) const { return evaluate_velocity(*this, q); }

/// Direction divergence div(u/|u|) = d(omega_z)/dz, analytically.
/// @throws Error{OutsideSupport} outside the tube support
inline double evaluate_F(const TubeField& field, Point3 q) {
    if (!field.in_support(q)) {
        throw Error(ErrorCode::OutsideSupport,
                    "direction divergence undefined outside the tube support");
    }
    const double r = std::hypot(q.x, q.y);
    return field.profile.domega_dz(r, q.z);
}

// ============================================================================
// Profile validation
// ============================================================================

/// Per-annulus verdicts for the four schedule conditions.  Margins are
/// positive slack in the natural scale of each condition:
///  * margin_lower: min of log(omega) - log(lower envelope) (want > 0);
///  * margin_upper: min of log(envelope) - log(omega) on z < S_j (want >= 0,
///    0 on the envelope segment itself);
///  * margin_steep: min over the window of |d avg/dz| * (S-z)^{1/6} - 1;
///  * margin_budget: |A_j| log(S/(S-S_j)) / C_budget - 1.
struct AnnulusVerdict {
    int j = 0;
    bool lower_env = false;
    bool upper_env = false;
    bool steepness = false;
    bool budget = false;
    bool certified = false;
    double margin_lower = 0.0;
    double margin_upper = 0.0;
    double margin_steep = 0.0;
    double margin_budget = 0.0;
    long band_upper_violations = 0;  ///< raw pointwise envelope failures inside bands
};

struct ConditionReport {
    std::vector<AnnulusVerdict> annuli;
    int feasible_j_max = 0;  ///< largest certified annulus index (0 if none)
};

struct ValidateOptions {
    int samples_per_window = 256;  ///< tau samples per dyadic window (>= 64)
    int n_radii = 8;               ///< radial samples across the band-free core
};

/// Lattice-checks the four conditions per annulus.  Conditions are evaluated
/// on the band-excluded core of each annulus (transition bands belong to no
/// single schedule; their raw envelope violations are counted separately as
/// data).  Violations are reported in the verdicts, never thrown.
inline ConditionReport validate_profile(const SwirlProfile& p,
                                        const ValidateOptions& opt = {}) {
    if (opt.samples_per_window < 64 || opt.n_radii < 2) {
        throw Error(ErrorCode::ConfigInvalid,
                    "validation lattice needs >= 64 samples per window and >= 2 radii");
    }
    if (p.has_kernel() || p.annuli.empty()) {
        throw Error(ErrorCode::ConfigInvalid,
                    "validate_profile applies to reference-construction profiles");
    }
    ConditionReport rep;
    const double le = 0.5 - p.epsilon;
    for (const AnnulusInfo& an : p.annuli) {
        AnnulusVerdict v;
        v.j = an.j;

        // Band-excluded radial core of the annulus: the blend band hosted at
        // its outer edge is [r_outer(1-bf), r_outer]; a band at the inner
        // boundary is hosted inside the next annulus, not here.
        const double r_hi = an.r_outer * (1.0 - p.band_fraction) * (1.0 - 1e-9);
        const double r_lo = an.r_inner * (1.0 + 1e-9);
        std::vector<double> radii(static_cast<std::size_t>(opt.n_radii));
        std::vector<double> rweights(static_cast<std::size_t>(opt.n_radii));
        double wsum = 0.0;
        for (int i = 0; i < opt.n_radii; ++i) {
            const double rr =
                r_lo + (r_hi - r_lo) * (i + 0.5) / opt.n_radii;
            radii[static_cast<std::size_t>(i)] = rr;
            rweights[static_cast<std::size_t>(i)] = rr;  // area weight ~ r dr
            wsum += rr;
        }
        for (double& w : rweights) w /= wsum;

        // tau lattice: dyadic windows [0,c_1],[c_1,c_2],..,[c_{j-1},c_j]
        // below the milestone, then the descent window [c_j, 2c_j].
        std::vector<double> taus;
        double prev = 0.0;
        for (const AnnulusInfo& bn : p.annuli) {
            if (bn.j > an.j) break;
            for (int i = 0; i < opt.samples_per_window; ++i) {
                taus.push_back(prev + (bn.c - prev) * (i + 0.5) / opt.samples_per_window);
            }
            prev = bn.c;
        }
        const std::size_t n_below = taus.size();
        for (int i = 0; i < opt.samples_per_window; ++i) {
            taus.push_back(an.c + an.c * (i + 0.5) / opt.samples_per_window);
        }

        double min_lower = std::numeric_limits<double>::infinity();
        double min_upper = std::numeric_limits<double>::infinity();
        double min_steep = std::numeric_limits<double>::infinity();
        for (std::size_t ti = 0; ti < taus.size(); ++ti) {
            const double tau = taus[ti];
            // Averages over the core radii (log-sum in linear weights; the
            // schedule is radially constant on the core, so this is exact
            // and doubles as a leakage check).
            double avg_log_w = 0.0;
            double avg_slope_scaled = 0.0;  // |d avg/dz| * x^{1/6}, computed
                                            // from log slopes
            double max_log_w = -std::numeric_limits<double>::infinity();
            for (int i = 0; i < opt.n_radii; ++i) {
                const OmegaLog ol = p.eval_log(radii[static_cast<std::size_t>(i)], tau);
                avg_log_w += rweights[static_cast<std::size_t>(i)] * ol.log_omega;
                max_log_w = std::max(max_log_w, ol.log_omega);
                if (ol.sign_dz != 0) {
                    avg_slope_scaled += rweights[static_cast<std::size_t>(i)] *
                                        std::exp(ol.log_abs_dz - tau / 6.0);
                }
            }
            min_lower = std::min(min_lower, avg_log_w - (-le * tau));
            if (ti < n_below) {
                min_upper = std::min(min_upper, (-tau / p.alpha) - max_log_w);
            } else {
                min_steep = std::min(min_steep, avg_slope_scaled - 1.0);
            }
        }
        v.margin_lower = min_lower;
        v.margin_upper = min_upper;
        v.margin_steep = min_steep;
        v.margin_budget = an.area * an.c / p.C_budget - 1.0;
        v.lower_env = v.margin_lower > 0.0;
        v.upper_env = v.margin_upper > -1e-12;
        v.steepness = v.margin_steep > -1e-12;
        v.budget = v.margin_budget > -1e-12;

        // Informational: raw pointwise upper-envelope failures inside the
        // outer blend band (expected wherever the outer neighbor has left
        // the envelope; this is why conditions live on the core).
        if (an.j >= 2) {
            const double rb = an.r_outer;
            const double wband = p.band_fraction * rb;
            for (int i = 0; i < 8; ++i) {
                const double rr = rb - wband * (i + 0.5) / 8;
                for (std::size_t ti = 0; ti < n_below; ++ti) {
                    const OmegaLog ol = p.eval_log(rr, taus[ti]);
                    if (ol.log_omega > -taus[ti] / p.alpha + 1e-12) {
                        ++v.band_upper_violations;
                    }
                }
            }
        }

        v.certified = v.lower_env && v.upper_env && v.steepness && v.budget &&
                      an.descent_feasible;
        if (v.certified) rep.feasible_j_max = std::max(rep.feasible_j_max, an.j);
        rep.annuli.push_back(v);
    }
    return rep;
}

// ============================================================================
// Streamline growth report
// ============================================================================

struct GrowthOptions {
    std::vector<Point3> starts = {{0.002, 0.0, 0.0}};
    double step = 1e-4;   ///< arclength recording step
    double s_max = 2.0;   ///< integration budget per streamline
    double z_stop = std::numeric_limits<double>::infinity();  ///< sample filter
};

struct GrowthReport {
    double A_emp = 0.0;        ///< sup of |dF/ds| / |F| over qualifying samples
    bool cap_exceeded = false; ///< A_emp > cap
    double floor_L = 0.0;
    double cap = 0.0;
    long n_qualifying = 0;
    double sup_s = std::numeric_limits<double>::quiet_NaN();
    double sup_z = std::numeric_limits<double>::quiet_NaN();
};

/// Empirical direction-divergence growth along streamlines: integrates each
/// seed, samples the analytic F = div(u/|u|), and takes the sup of the
/// one-sided difference quotient |dF/ds| / |F| over samples with |F| >= L
/// (and z <= z_stop).  An empty qualifying set reports A_emp = 0.
inline GrowthReport streamline_growth_report(const TubeField& field, double L,
                                             double cap,
                                             const GrowthOptions& opt = {}) {
    if (!(L > 0.0) || !(cap > 0.0)) {
        throw Error(ErrorCode::ConfigInvalid, "growth report needs L > 0 and cap > 0");
    }
    GrowthReport rep;
    rep.floor_L = L;
    rep.cap = cap;
    const auto vel = [&field](Point3 q) { return evaluate_velocity(field, q); };
    for (const Point3& start : opt.starts) {
        const geometry::Streamline line =
            geometry::integrate_streamline(vel, start, opt.step, opt.s_max);
        for (std::size_t i = 0; i + 1 < line.samples.size(); ++i) {
            const auto& a = line.samples[i];
            const auto& b = line.samples[i + 1];
            if (a.p.z > opt.z_stop || b.p.z > opt.z_stop) break;
            double Fa = 0.0, Fb = 0.0;
            try {
                Fa = evaluate_F(field, a.p);
                Fb = evaluate_F(field, b.p);
            } catch (const Error& e) {
                if (e.code() == ErrorCode::OutsideSupport) break;
                throw;
            }
            if (std::abs(Fa) < L) continue;
            ++rep.n_qualifying;
            const double ratio = std::abs(Fb - Fa) / (b.s - a.s) / std::abs(Fa);
            if (ratio > rep.A_emp) {
                rep.A_emp = ratio;
                rep.sup_s = a.s;
                rep.sup_z = a.p.z;
            }
        }
    }
    rep.cap_exceeded = rep.A_emp > cap;
    return rep;
}

}  // namespace swirllab::fields
