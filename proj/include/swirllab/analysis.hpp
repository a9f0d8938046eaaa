/// @file analysis.hpp
/// @brief Exponent bookkeeping and the decaying-recurrence threshold.
///
/// This module is pure arithmetic: admissibility of the swirl exponent
/// alpha, the admissible interval for the truncation exponent beta, the
/// three feasibility exponents (E1, E2, E3) with their small-parameter
/// limits, a searcher that produces a feasible witness, and the
/// super-linear recurrence a_k = B^k a_{k-1}^beta with its closed-form
/// decay threshold.

#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "swirllab/core.hpp"

namespace swirllab::analysis {

// ============================================================================
// Types
// ============================================================================

/// Parameters of the super-linear recurrence a_k = B^k * a_{k-1}^beta, k >= 2.
struct RecurrenceParams {
    double B = 2.0;     ///< geometric constant, > 1
    double beta = 1.5;  ///< super-linearity exponent, > 1
    double a1 = 0.5;    ///< seed value, > 0
};

/// Sequence produced by iterate_recurrence.  log_a is authoritative; a is
/// the exponentiated convenience copy (0 or +inf once out of double range).
struct RecurrenceSequence {
    std::vector<double> log_a;  ///< natural log of a_k, k = 1..k_max
    std::vector<double> a;      ///< a_k, clamped to [0, +inf] on under/overflow
};

/// A concrete exponent witness plus the physical-scale constants that
/// accompany it in reports (tube radius, speed floor, growth constants).
struct ExponentParams {
    double alpha = 2.5;
    double beta = 1.25;
    double p = 1.01;
    double delta = 0.01;
    // Reporting-only scale constants; they do not enter E1/E2/E3.
    double r0 = 1.0;  ///< tube radius scale
    double M0 = 1.0;  ///< speed floor scale
    double A = 1.0;   ///< direction-growth constant
    double L = 1.0;   ///< direction-divergence floor
};

/// Everything a caller needs to audit a feasibility verdict.
struct FeasibilityReport {
    double alpha = 0.0;
    double alpha_star = 0.0;  ///< admissibility threshold for alpha
    double beta_lo = 0.0;     ///< lower end of admissible beta interval
    double beta_hi = 0.0;     ///< upper end of admissible beta interval
    double beta = 0.0;        ///< witness beta (midpoint when searched)
    double p = 0.0;
    double delta = 0.0;
    double E1 = 0.0;
    double E2 = 0.0;
    double E3 = 0.0;
    bool feasible = false;
};

// ============================================================================
// Admissibility arithmetic
// ============================================================================

/// Root of 2*alpha^2 + 3*alpha - 18 = 0 in (2, 3): the smallest swirl
/// exponent for which the beta interval opens up.
inline double alpha_star() {
    return (-3.0 + 3.0 * std::sqrt(17.0)) / 4.0;
}

/// Quadratic whose sign decides admissibility: positive iff
/// 1 + 2*(alpha/3 - 3/alpha) > 0 after clearing the positive factor 3*alpha.
inline double admissibility_quadratic(double alpha) {
    return 2.0 * alpha * alpha + 3.0 * alpha - 18.0;
}

/// True iff alpha admits a non-empty beta interval.
/// @throws Error{AlphaOutOfRange} unless alpha lies strictly inside (2, 3).
inline bool alpha_admissible(double alpha) {
    if (!(alpha > 2.0) || !(alpha < 3.0)) {
        throw Error(ErrorCode::AlphaOutOfRange,
                    "alpha must lie strictly inside (2, 3), got " + std::to_string(alpha));
    }
    return admissibility_quadratic(alpha) > 0.0;
}

/// Open interval of admissible truncation exponents (3/alpha, 1/2 + alpha/3).
/// @throws Error{AlphaOutOfRange, NotAdmissible}
struct BetaInterval {
    double lo = 0.0;
    double hi = 0.0;
};

inline BetaInterval beta_interval(double alpha) {
    if (!alpha_admissible(alpha)) {
        throw Error(ErrorCode::NotAdmissible,
                    "beta interval is empty for alpha = " + std::to_string(alpha));
    }
    return {3.0 / alpha, 0.5 + alpha / 3.0};
}

// ============================================================================
// Feasibility exponents
// ============================================================================

struct ExponentTriple {
    double E1 = 0.0;
    double E2 = 0.0;
    double E3 = 0.0;
};

/// The three exponents that must be simultaneously positive for the
/// iteration bookkeeping to close.
///
/// @throws Error{POutOfRange}     unless p in (1, 5/4)
/// @throws Error{DeltaOutOfRange} unless delta in (0, 2/3)
inline ExponentTriple exponent_triple(double alpha, double beta, double p, double delta) {
    if (!(p > 1.0) || !(p < 1.25)) {
        throw Error(ErrorCode::POutOfRange,
                    "p must lie strictly inside (1, 5/4), got " + std::to_string(p));
    }
    if (!(delta > 0.0) || !(delta < 2.0 / 3.0)) {
        throw Error(ErrorCode::DeltaOutOfRange,
                    "delta must lie strictly inside (0, 2/3), got " + std::to_string(delta));
    }
    const double tail = (alpha - 2.0) * (2.0 / 3.0 - delta);
    ExponentTriple t;
    t.E1 = beta * ((10.0 - 8.0 * p) / (3.0 * p) + (2.0 - p) / (2.0 * p) * tail)
           - (2.0 - p) / p;
    t.E2 = 10.0 / 3.0 - 2.0 * p * beta + tail - p;
    t.E3 = 10.0 / 3.0 - 2.0 * beta + tail - 1.0;
    return t;
}

/// Limits of the triple as p -> 1+ and delta -> 0+:
/// E1 -> beta*alpha/3 - 1 and E2, E3 -> 2*(1/2 + alpha/3 - beta).
struct ExponentLimits {
    double E1_limit = 0.0;
    double E23_limit = 0.0;
};

inline ExponentLimits exponent_limits(double alpha, double beta) {
    return {beta * alpha / 3.0 - 1.0, 2.0 * (0.5 + alpha / 3.0 - beta)};
}

/// Builds the audit report for a concrete witness.
inline FeasibilityReport make_feasibility_report(const ExponentParams& w) {
    FeasibilityReport r;
    r.alpha = w.alpha;
    r.alpha_star = alpha_star();
    try {
        const BetaInterval bi = beta_interval(w.alpha);
        r.beta_lo = bi.lo;
        r.beta_hi = bi.hi;
    } catch (const Error&) {
        r.beta_lo = r.beta_hi = std::numeric_limits<double>::quiet_NaN();
    }
    r.beta = w.beta;
    r.p = w.p;
    r.delta = w.delta;
    const ExponentTriple t = exponent_triple(w.alpha, w.beta, w.p, w.delta);
    r.E1 = t.E1;
    r.E2 = t.E2;
    r.E3 = t.E3;
    const bool in_interval = (w.beta > r.beta_lo) && (w.beta < r.beta_hi);
    r.feasible = (t.E1 > 0.0) && (t.E2 > 0.0) && (t.E3 > 0.0) && in_interval;
    return r;
}

/// Searches for a feasible witness at the given alpha: beta is pinned to the
/// midpoint of the admissible interval, then (p - 1, delta) shrink
/// geometrically from (1/8, 1/3) until the triple turns positive.
///
/// Returns std::nullopt when alpha is inadmissible (no interval) or the
/// shrink loop exhausts its budget; both outcomes mean "not found".
/// @throws Error{AlphaOutOfRange} for alpha outside (2, 3)
inline std::optional<ExponentParams> find_feasible(double alpha) {
    if (!alpha_admissible(alpha)) return std::nullopt;
    const BetaInterval bi = beta_interval(alpha);
    ExponentParams w;
    w.alpha = alpha;
    w.beta = 0.5 * (bi.lo + bi.hi);
    double pm1 = 1.0 / 8.0;
    double delta = 1.0 / 3.0;
    for (int iter = 0; iter < 60; ++iter) {
        const ExponentTriple t = exponent_triple(alpha, w.beta, 1.0 + pm1, delta);
        if (t.E1 > 0.0 && t.E2 > 0.0 && t.E3 > 0.0) {
            w.p = 1.0 + pm1;
            w.delta = delta;
            return w;
        }
        pm1 *= 0.5;
        delta *= 0.5;
    }
    return std::nullopt;
}

// ============================================================================
// Decaying recurrence
// ============================================================================

/// Closed-form seed threshold for a_k = B^k a_{k-1}^beta: seeds strictly
/// below B^(1 - beta^2/(beta-1)^2) decay doubly-exponentially, seeds above
/// blow up.  Derived by telescoping x_k = -log_B a_k, whose affine part is
/// k/(beta-1) + beta/(beta-1)^2.
///
/// @throws Error{ConfigInvalid} unless B > 1 and beta > 1
inline double decay_threshold(double B, double beta) {
    if (!(B > 1.0)) {
        throw Error(ErrorCode::ConfigInvalid, "recurrence constant B must exceed 1");
    }
    if (!(beta > 1.0)) {
        throw Error(ErrorCode::ConfigInvalid, "recurrence exponent beta must exceed 1");
    }
    const double bm1 = beta - 1.0;
    const double exponent = 1.0 - (beta * beta) / (bm1 * bm1);
    return std::pow(B, exponent);
}

/// Iterates the recurrence in the log domain (the only stable way once the
/// values leave double range).  a_k underflows to 0 / overflows to +inf in
/// the convenience copy; log_a stays finite until it saturates double.
///
/// @throws Error{ConfigInvalid} unless B > 0, beta > 1, a1 > 0, k_max >= 1
inline RecurrenceSequence iterate_recurrence(const RecurrenceParams& params, int k_max) {
    if (!(params.B > 0.0) || !(params.beta > 1.0) || !(params.a1 > 0.0) || k_max < 1) {
        throw Error(ErrorCode::ConfigInvalid,
                    "iterate_recurrence requires B > 0, beta > 1, a1 > 0, k_max >= 1");
    }
    RecurrenceSequence seq;
    seq.log_a.reserve(static_cast<std::size_t>(k_max));
    seq.a.reserve(static_cast<std::size_t>(k_max));
    const double logB = std::log(params.B);
    double la = std::log(params.a1);
    seq.log_a.push_back(la);
    seq.a.push_back(params.a1);
    for (int k = 2; k <= k_max; ++k) {
        la = static_cast<double>(k) * logB + params.beta * la;
        seq.log_a.push_back(la);
        seq.a.push_back(std::exp(la));
    }
    return seq;
}

}  // namespace swirllab::analysis
