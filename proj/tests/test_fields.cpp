/// @file test_fields.cpp
/// @brief Tests for the swirl profile construction, the induced tube field,
///        profile validation, and streamline growth reports.

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "swirllab/core.hpp"
#include "swirllab/fields.hpp"
#include "swirllab/geometry.hpp"

namespace {

using swirllab::Error;
using swirllab::ErrorCode;
using swirllab::Point3;
using swirllab::Vec3;
using namespace swirllab::fields;

constexpr double kC1 = 4.0 / (3.0 * swirllab::kPi);  // budget burden of annulus 1

// ---------------------------------------------------------------------------
// Oracles (independent of the library implementation)
// ---------------------------------------------------------------------------

/// Bisection root of |A_1| * log(S/(S - m)) = C for the first milestone.
double oracle_first_milestone() {
    const double area = swirllab::kPi * (1.0 - 0.25);
    double lo = 0.0, hi = 0.999;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (area * std::log(1.0 / (1.0 - mid)) < 1.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Hand-written per-annulus schedule in plain arithmetic (safe for shallow
/// annuli only), mirroring the construction's definition text: envelope,
/// then max(descent, min(start, guard)), then flat.
double oracle_schedule(double c, double alpha, double eps, double margin,
                       double tau) {
    const double m1 = 1.0 + margin;
    const double le = 0.5 - eps;
    const double start = std::exp(-c / alpha);
    auto descent = [&](double t) {
        return start - m1 * 1.2 * (std::exp(-c * 5.0 / 6.0) -
                                   std::exp(-t * 5.0 / 6.0));
    };
    auto guard = [&](double t) { return std::min(start, m1 * std::exp(-le * t)); };
    if (tau <= c) return std::exp(-tau / alpha);
    const double t_eff = std::min(tau, 2.0 * c);
    return std::max(descent(t_eff), guard(t_eff));
}

/// Brute-force feasibility of an annulus: pure descent stays strictly above
/// the margin-inflated lower envelope across a dense window lattice.
double oracle_min_gap(double c, double alpha, double eps, double margin) {
    const double m1 = 1.0 + margin;
    const double le = 0.5 - eps;
    const double start = std::exp(-c / alpha);
    double min_gap = std::numeric_limits<double>::infinity();
    const int n = 200001;
    for (int i = 0; i < n; ++i) {
        const double tau = c + c * i / (n - 1);
        const double desc = start - m1 * 1.2 * (std::exp(-c * 5.0 / 6.0) -
                                                std::exp(-tau * 5.0 / 6.0));
        const double g = m1 * std::exp(-le * tau);
        min_gap = std::min(min_gap, desc - g);
    }
    return min_gap;
}

TubeField reference_field(FluxShape shape = FluxShape::rolloff) {
    return make_tube_field(build_reference_profile(), shape);
}

// ---------------------------------------------------------------------------
// Reference construction: milestones and budget
// ---------------------------------------------------------------------------

TEST(ReferenceProfile, FirstMilestoneMatchesBisectionOracle) {
    const SwirlProfile p = build_reference_profile();
    ASSERT_EQ(p.annuli.size(), 8u);
    const double oracle = oracle_first_milestone();
    EXPECT_NEAR(p.annuli[0].S_j, oracle, 1e-12);
    EXPECT_NEAR(p.annuli[0].S_j, 0.34584646, 1e-8);   // frozen from the oracle
    EXPECT_NEAR(p.annuli[0].S_j, 0.3458, 1e-3);       // coarse display value
    EXPECT_NEAR(p.annuli[0].S_tilde_j, 0.57208314, 1e-8);
}

TEST(ReferenceProfile, BudgetIdentityPerAnnulus) {
    const SwirlProfile p = build_reference_profile();
    for (const AnnulusInfo& an : p.annuli) {
        // |A_j| * c_j == C_budget exactly by construction.
        EXPECT_NEAR(an.area * an.c, p.C_budget, 1e-12) << "annulus " << an.j;
        // Dyadic geometry: c_{j+1} = 4 c_j, |A_j| = 3 pi 4^{-j}.
        EXPECT_NEAR(an.c, kC1 * std::pow(4.0, an.j - 1), 1e-10 * an.c);
        if (an.j <= 3) {  // milestones representable in plain doubles
            EXPECT_NEAR(-std::log1p(-an.S_j), an.c, 1e-10);
            EXPECT_NEAR(-std::log1p(-an.S_tilde_j), 2.0 * an.c, 1e-9);
        }
    }
}

TEST(ReferenceProfile, ParameterGuards) {
    ReferenceParams bad;
    bad.alpha = 2.0;
    EXPECT_THROW(build_reference_profile(bad), Error);
    bad.alpha = 3.0;
    EXPECT_THROW(build_reference_profile(bad), Error);
    bad = ReferenceParams{};
    bad.epsilon = 0.3;  // >= 1/2 - 1/alpha = 0.1
    try {
        build_reference_profile(bad);
        FAIL() << "epsilon guard did not fire";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::EpsilonTooLarge);
    }
    bad.epsilon = 0.0;
    EXPECT_THROW(build_reference_profile(bad), Error);
}

TEST(ReferenceProfile, StrictModeRejectsInfeasibleAnnulus) {
    ReferenceParams strict;
    strict.strict = true;
    try {
        build_reference_profile(strict);
        FAIL() << "strict build accepted an infeasible annulus";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InfeasibleAnnulus);
        EXPECT_EQ(e.index(), 1);
    }
}

// ---------------------------------------------------------------------------
// Feasibility flags vs brute force
// ---------------------------------------------------------------------------

TEST(ReferenceProfile, FeasibilityFlagsMatchBruteForce) {
    const SwirlProfile p = build_reference_profile();
    EXPECT_FALSE(p.annuli[0].descent_feasible);  // steep descent would cross the guard
    for (std::size_t i = 1; i < p.annuli.size(); ++i) {
        EXPECT_TRUE(p.annuli[i].descent_feasible) << "annulus " << i + 1;
    }
    EXPECT_EQ(p.feasible_j_max_hint(), 8);
    // Closed-form minimum against a dense lattice (shallow annuli, where the
    // plain-arithmetic oracle is numerically meaningful).
    for (std::size_t i = 0; i < 3; ++i) {
        const AnnulusInfo& an = p.annuli[i];
        const double brute = oracle_min_gap(an.c, p.alpha, p.epsilon, p.margin);
        EXPECT_NEAR(an.min_gap, brute, 1e-6) << "annulus " << an.j;
        EXPECT_EQ(an.min_gap > 0.0, brute > 0.0);
        EXPECT_EQ(an.min_log_gap > 0.0, brute > 0.0);
    }
    // The first feasible annulus clears the guard by a real margin.
    EXPECT_GT(p.annuli[1].min_gap, 0.005);
    EXPECT_LT(p.annuli[1].min_gap, 0.05);
    EXPECT_LT(p.annuli[0].min_gap, -0.01);
    // Deep annuli: independent closed-form lower bound on the log margin.
    // The descent barely dents the envelope there (its relative drop is
    // <= 1.26 e^{-(5/6-1/alpha)c}), so log(descent/guard) at the window
    // start alone is (1/2-eps-1/alpha)c - log(1+m) up to that dent.
    for (std::size_t i = 3; i < p.annuli.size(); ++i) {
        const AnnulusInfo& an = p.annuli[i];
        EXPECT_GE(an.min_log_gap, 0.05 * an.c - 0.1) << "annulus " << an.j;
    }
}

// ---------------------------------------------------------------------------
// Schedule values: branches against the plain-arithmetic oracle
// ---------------------------------------------------------------------------

TEST(SwirlSchedule, MatchesPlainArithmeticOracleOnShallowAnnuli) {
    const SwirlProfile p = build_reference_profile();
    // Pure-core radii of annuli 1..3 and a dense tau sweep (plain arithmetic
    // is safe for tau up to ~30).
    const double radii[] = {0.7, 0.3, 0.15};
    for (int j = 1; j <= 3; ++j) {
        const double c = p.annuli[static_cast<std::size_t>(j - 1)].c;
        for (int i = 0; i <= 400; ++i) {
            const double tau = 30.0 * i / 400.0;
            const double got =
                std::exp(p.eval_log(radii[j - 1], tau).log_omega);
            const double want =
                oracle_schedule(c, p.alpha, p.epsilon, p.margin, tau);
            EXPECT_NEAR(got, want, 1e-12 + 1e-12 * want)
                << "annulus " << j << " tau " << tau;
        }
    }
}

TEST(SwirlSchedule, EnvelopeSegmentIsExact) {
    const SwirlProfile p = build_reference_profile();
    // z below the first milestone of the covering annulus: omega = (1-z)^{1/alpha}.
    EXPECT_NEAR(p.omega_z(0.3, 0.2), std::pow(0.8, 0.4), 1e-14);
    EXPECT_NEAR(p.omega_z(0.7, 0.1), std::pow(0.9, 0.4), 1e-14);
    // Core disc: envelope all the way up.
    for (double z : {0.1, 0.5, 0.9, 0.999, 0.9999999}) {
        EXPECT_NEAR(p.omega_z(0.001, z), std::pow(1.0 - z, 0.4),
                    1e-13 * std::pow(1.0 - z, 0.4));
    }
}

TEST(SwirlSchedule, FlatTailValueHasClosedForm) {
    const SwirlProfile p = build_reference_profile();
    // Annulus 1 rides the guard to the end of its window, so its flat value
    // is (1+m) e^{-(1/2-eps) 2 c_1}.
    const double flat1 = 1.05 * std::exp(-0.45 * 2.0 * kC1);
    EXPECT_NEAR(p.omega_z(0.7, 0.9), flat1, 1e-12);
    EXPECT_NEAR(flat1, 0.71664, 1e-4);  // frozen
    // Annulus 2 completes its descent, so its flat value is the descent end.
    const double c2 = 4.0 * kC1;
    const double flat2 = std::exp(-c2 / 2.5) -
                         1.05 * 1.2 * (std::exp(-c2 * 5.0 / 6.0) -
                                       std::exp(-2.0 * c2 * 5.0 / 6.0));
    EXPECT_NEAR(p.omega_z(0.3, 0.97), flat2, 1e-12);
    EXPECT_NEAR(flat2, 0.27523, 1e-4);  // frozen
}

TEST(SwirlSchedule, ContinuousAcrossBranchesBandsAndBoundaries) {
    const SwirlProfile p = build_reference_profile();
    // tau sweep at fixed radii: no jumps (slopes bound the increments).
    for (double r : {0.7, 0.495, 0.3, 0.13, 0.06, 0.001}) {
        double prev = p.eval_log(r, 0.0).log_omega;
        for (int i = 1; i <= 24000; ++i) {
            const double tau = 12.0 * i / 24000.0;
            const double cur = p.eval_log(r, tau).log_omega;
            EXPECT_LE(std::abs(cur - prev), 0.002)
                << "log-omega jump at r=" << r << " tau=" << tau;
            prev = cur;
        }
    }
    // radial sweep at fixed heights: bands keep the blend C^1-small.
    for (double z : {0.1, 0.55, 0.93}) {
        const double tau = swirllab::tau_of_z(z, 1.0);
        double prev = p.eval_log(1.0995, tau).log_omega;
        for (int i = 1; i <= 120000; ++i) {
            const double r = 1.0995 - (1.0995 - 0.001) * i / 120000.0;
            const double cur = p.eval_log(r, tau).log_omega;
            EXPECT_LE(std::abs(cur - prev), 0.005)
                << "log-omega jump at z=" << z << " r=" << r;
            prev = cur;
        }
    }
}

TEST(SwirlSchedule, BlendBandInterpolatesNeighborSchedules) {
    const SwirlProfile p = build_reference_profile();
    const double tau = 2.2;  // annulus 2 mid-descent, annulus 1 already flat
    const double p2 = std::exp(p.eval_log(0.3, tau).log_omega);
    const double p1 = std::exp(p.eval_log(0.7, tau).log_omega);
    // At the boundary radius the blend hits the outer schedule exactly.
    EXPECT_NEAR(std::exp(p.eval_log(0.5, tau).log_omega), p1, 1e-13);
    // Just inside the band start it matches the host schedule.
    EXPECT_NEAR(std::exp(p.eval_log(0.48749, tau).log_omega), p2, 1e-13);
    // Interior point: convex combination with the smoothstep weight.
    const double t = 3.0 * 0.6 * 0.6 - 2.0 * 0.6 * 0.6 * 0.6;  // smoothstep(0.6)
    EXPECT_NEAR(std::exp(p.eval_log(0.495, tau).log_omega),
                (1.0 - t) * p2 + t * p1, 1e-12);
}

// ---------------------------------------------------------------------------
// Axial slope (the direction divergence) vs finite differences
// ---------------------------------------------------------------------------

TEST(SwirlSchedule, SlopeMatchesCentralDifferences) {
    const SwirlProfile p = build_reference_profile();
    struct Probe { double r, tau, h; };
    const Probe probes[] = {
        {0.7, 0.20, 1e-7},    // annulus 1 envelope
        {0.7, 0.60, 1e-7},    // annulus 1 riding the guarded floor
        {0.3, 0.80, 1e-7},    // annulus 2 envelope
        {0.3, 2.20, 1e-8},    // annulus 2 mid-descent
        {0.495, 2.20, 1e-8},  // blend band, descent x flat mix
        {0.15, 4.50, 1e-8},   // annulus 3 envelope deeper in
        {0.001, 8.00, 1e-9},  // core envelope, stretched region
        {1.05, 0.60, 1e-7},   // support skirt follows annulus 1
    };
    for (const Probe& pr : probes) {
        const double z = -std::expm1(-pr.tau);
        const double analytic = p.domega_dz(pr.r, z);
        const double fd =
            (p.omega_z(pr.r, z + pr.h) - p.omega_z(pr.r, z - pr.h)) /
            (2.0 * pr.h);
        EXPECT_NEAR(analytic, fd, 1e-6 * (1.0 + std::abs(analytic)))
            << "r=" << pr.r << " tau=" << pr.tau;
        EXPECT_LT(analytic, 0.0);
    }
}

TEST(SwirlSchedule, SlopeIsZeroOnCapAndFlatSegments) {
    const SwirlProfile p = build_reference_profile();
    // Annulus 1: guard still above the start value right after the milestone.
    EXPECT_EQ(p.domega_dz(0.7, -std::expm1(-0.45)), 0.0);
    // Annulus 1 and 2 flat tails.
    EXPECT_EQ(p.domega_dz(0.7, 0.9), 0.0);
    EXPECT_EQ(p.domega_dz(0.3, 0.98), 0.0);
}

// ---------------------------------------------------------------------------
// Tube field: velocity, divergence, direction divergence
// ---------------------------------------------------------------------------

TEST(TubeFieldTest, SpeedEqualsFluxOverOmega) {
    const TubeField f = reference_field();
    const Point3 pts[] = {{0.3, 0.1, 0.2}, {-0.2, 0.4, 0.6}, {0.05, -0.02, 0.95},
                          {0.6, 0.3, 0.4}, {0.95, 0.0, 0.3}};
    for (const Point3& q : pts) {
        const double r = std::hypot(q.x, q.y);
        const Vec3 u = evaluate_velocity(f, q);
        const double expected = f.flux(r) / f.profile.omega_z(r, q.z);
        EXPECT_NEAR(norm(u), expected, 1e-12 * expected);
        EXPECT_NEAR(u.z, f.flux(r), 1e-15);           // axial part is the flux
        EXPECT_NEAR(u.x * q.x + u.y * q.y, 0.0, 1e-12);  // no radial part
    }
}

TEST(TubeFieldTest, ZeroOutsideSupportAndThrowingF) {
    const TubeField f = reference_field();
    for (const Point3& q : {Point3{1.15, 0.0, 0.5}, Point3{0.3, 0.0, -0.01},
                            Point3{0.3, 0.0, 1.0}}) {
        const Vec3 u = evaluate_velocity(f, q);
        EXPECT_EQ(norm(u), 0.0);
        try {
            (void)evaluate_F(f, q);
            FAIL() << "direction divergence defined outside support";
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::OutsideSupport);
        }
    }
}

TEST(TubeFieldTest, FluxShapes) {
    const TubeField roll = reference_field(FluxShape::rolloff);
    EXPECT_EQ(roll.flux(0.0), 1.0);
    EXPECT_EQ(roll.flux(0.9), 1.0);
    EXPECT_NEAR(roll.flux(0.95), 0.75, 1e-12);  // halfway down the rolloff
    EXPECT_NEAR(roll.flux(1.0), 0.5, 1e-12);
    EXPECT_NEAR(roll.flux(1.05), 0.25, 1e-12);  // halfway down the skirt
    EXPECT_EQ(roll.flux(1.1), 0.0);
    const TubeField cons = reference_field(FluxShape::constant);
    EXPECT_EQ(cons.flux(0.9), 1.0);
    EXPECT_EQ(cons.flux(1.0), 1.0);
    EXPECT_NEAR(cons.flux(1.05), 0.5, 1e-12);
    EXPECT_EQ(cons.flux(1.1), 0.0);
}

TEST(TubeFieldTest, CentralDifferenceDivergenceVanishes) {
    const TubeField f = reference_field();
    const double h = 1e-4;
    const Point3 pts[] = {{0.3, 0.1, 0.2},  {-0.15, 0.22, 0.55}, {0.6, -0.1, 0.4},
                          {0.05, 0.02, 0.8}, {0.7, 0.2, 0.65},   {0.1, -0.3, 0.35}};
    for (const Point3& q : pts) {
        const auto u = [&](Point3 s) { return evaluate_velocity(f, s); };
        const double div =
            (u({q.x + h, q.y, q.z}).x - u({q.x - h, q.y, q.z}).x +
             u({q.x, q.y + h, q.z}).y - u({q.x, q.y - h, q.z}).y +
             u({q.x, q.y, q.z + h}).z - u({q.x, q.y, q.z - h}).z) /
            (2.0 * h);
        const double scale = norm(evaluate_velocity(f, q));
        EXPECT_LE(std::abs(div), 1e-4 * std::max(1.0, scale))
            << "at (" << q.x << "," << q.y << "," << q.z << ")";
    }
}

TEST(TubeFieldTest, DirectionDivergenceMatchesSlope) {
    const TubeField f = reference_field();
    const Point3 q{0.3, -0.1, -std::expm1(-2.2)};
    const double r = std::hypot(q.x, q.y);
    EXPECT_NEAR(evaluate_F(f, q), f.profile.domega_dz(r, q.z), 1e-15);
    EXPECT_LT(evaluate_F(f, q), 0.0);
}

TEST(TubeFieldTest, SingularSwirlGuard) {
    SwirlProfile tiny = SwirlProfile::from_kernel(
        [](double, double) {
            OmegaLog v;
            v.log_omega = -800.0;
            return v;
        },
        2.5, 0.05, 1.0, 1.0);
    const TubeField f = make_tube_field(std::move(tiny), FluxShape::constant);
    try {
        (void)evaluate_velocity(f, {0.3, 0.0, 0.5});
        FAIL() << "singular swirl accepted";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::SingularSwirl);
    }
}

// ---------------------------------------------------------------------------
// Streamlines through tube fields
// ---------------------------------------------------------------------------

TEST(TubeStreamlines, UnitAxialScheduleGivesStraightLine) {
    // omega_z == 1 everywhere: u = e_z inside the tube; a seed at mid-radius
    // travels straight up half the cap height in arclength S/2.
    SwirlProfile straight = SwirlProfile::from_kernel(
        [](double, double) { return OmegaLog{0.0, -std::numeric_limits<double>::infinity(), 0}; },
        2.5, 0.05, 1.0, 1.0);
    const TubeField f = make_tube_field(std::move(straight), FluxShape::constant);
    const auto vel = [&f](Point3 q) { return evaluate_velocity(f, q); };
    const auto line = swirllab::geometry::integrate_streamline(
        vel, {0.5, 0.0, 0.0}, 1e-3, 0.5);
    const Point3 end = line.samples.back().p;
    EXPECT_NEAR(end.x, 0.5, 1e-10);
    EXPECT_NEAR(end.y, 0.0, 1e-10);
    EXPECT_NEAR(end.z, 0.5, 1e-10);
}

TEST(TubeStreamlines, ReferenceFieldPreservesRadius) {
    const TubeField f = reference_field(FluxShape::constant);
    const auto vel = [&f](Point3 q) { return evaluate_velocity(f, q); };
    for (double r0 : {0.3, 0.65}) {
        const auto line = swirllab::geometry::integrate_streamline(
            vel, {r0, 0.0, 0.1}, 1e-3, 0.6);
        for (std::size_t i = 0; i < line.samples.size(); i += 100) {
            const Point3& q = line.samples[i].p;
            EXPECT_NEAR(std::hypot(q.x, q.y), r0, 1e-8);
            EXPECT_GE(q.z, 0.1 - 1e-12);  // drifts upward only
        }
    }
}

// ---------------------------------------------------------------------------
// Profile validation
// ---------------------------------------------------------------------------

TEST(ValidateProfileTest, ReferenceVerdicts) {
    const SwirlProfile p = build_reference_profile();
    const ConditionReport rep = validate_profile(p);
    ASSERT_EQ(rep.annuli.size(), 8u);
    EXPECT_EQ(rep.feasible_j_max, 8);

    const AnnulusVerdict& first = rep.annuli[0];
    EXPECT_TRUE(first.lower_env);
    EXPECT_TRUE(first.upper_env);
    EXPECT_FALSE(first.steepness);  // the guarded floor halts the mandated descent
    EXPECT_TRUE(first.budget);
    EXPECT_FALSE(first.certified);

    int certified = 0;
    for (std::size_t i = 1; i < rep.annuli.size(); ++i) {
        const AnnulusVerdict& v = rep.annuli[i];
        EXPECT_TRUE(v.certified) << "annulus " << v.j;
        certified += v.certified;
        // Margins carry the designed safety factors.
        EXPECT_NEAR(v.margin_steep, p.margin, 1e-9) << "annulus " << v.j;
        EXPECT_GT(v.margin_lower, 0.0);
        EXPECT_GE(v.margin_upper, -1e-12);
        EXPECT_NEAR(v.margin_budget, 0.0, 1e-12);
    }
    EXPECT_GE(certified, 6);  // comfortably many certified annuli

    // Blend bands are honest: raw envelope violations inside the excluded
    // bands are visible as data.
    long total_band_violations = 0;
    for (const AnnulusVerdict& v : rep.annuli) {
        total_band_violations += v.band_upper_violations;
    }
    EXPECT_GT(total_band_violations, 0);
}

TEST(ValidateProfileTest, LatticeAndKernelGuards) {
    const SwirlProfile p = build_reference_profile();
    ValidateOptions opt;
    opt.samples_per_window = 32;  // below the floor
    EXPECT_THROW(validate_profile(p, opt), Error);
    SwirlProfile kern = SwirlProfile::from_kernel(
        [](double, double) { return OmegaLog{0.0, 0.0, 0}; }, 2.5, 0.05, 1.0, 1.0);
    EXPECT_THROW(validate_profile(kern), Error);
}

// ---------------------------------------------------------------------------
// Streamline growth reports
// ---------------------------------------------------------------------------

/// Control schedule omega_z = e^{-z/L}: direction divergence magnitude is
/// bounded and its relative growth rate along streamlines is omega/L <= 1/L.
SwirlProfile exponential_control(double L) {
    return SwirlProfile::from_kernel(
        [L](double, double tau) {
            OmegaLog v;
            const double z = -std::expm1(-tau);
            v.log_omega = -z / L;
            v.log_abs_dz = -std::log(L) - z / L;
            v.sign_dz = -1;
            return v;
        },
        2.5, 0.05, 1.0, 1.0);
}

TEST(GrowthReportTest, ControlFieldStaysUnderCap) {
    const TubeField f =
        make_tube_field(exponential_control(1.0), FluxShape::constant);
    GrowthOptions opt;
    opt.starts = {{0.3, 0.0, 0.0}};
    opt.step = 1e-3;
    opt.s_max = 1.6;
    const GrowthReport rep = streamline_growth_report(f, 0.2, 1.0, opt);
    EXPECT_GT(rep.n_qualifying, 0);
    EXPECT_GT(rep.A_emp, 0.5);   // the rate really is ~e^{-z}, not degenerate
    EXPECT_LE(rep.A_emp, 1.0);   // and never exceeds the control cap
    EXPECT_FALSE(rep.cap_exceeded);
}

TEST(GrowthReportTest, EmptyQualifyingSetReportsZero) {
    const TubeField f =
        make_tube_field(exponential_control(1.0), FluxShape::constant);
    GrowthOptions opt;
    opt.starts = {{0.3, 0.0, 0.0}};
    opt.step = 1e-3;
    opt.s_max = 1.0;
    // |F| = e^{-z} <= 1 never reaches the floor 1.5.
    const GrowthReport rep = streamline_growth_report(f, 1.5, 1.0, opt);
    EXPECT_EQ(rep.n_qualifying, 0);
    EXPECT_EQ(rep.A_emp, 0.0);
    EXPECT_FALSE(rep.cap_exceeded);
}

TEST(GrowthReportTest, ReferenceCoreGrowthIsSteep) {
    // Along the core the envelope gives |dF/ds|/|F| = (alpha-1)|F|, so the
    // empirical rate at height z approaches 0.6 (1-z)^{-0.6}.
    const TubeField f = reference_field(FluxShape::constant);
    GrowthOptions opt;
    opt.starts = {{0.002, 0.0, 0.0}};
    opt.step = 1e-4;
    const double x_stop = 0.05;
    opt.z_stop = 1.0 - x_stop;
    opt.s_max = (1.0 - std::pow(x_stop, 0.6)) / 0.6 + 0.1;
    const GrowthReport rep = streamline_growth_report(f, 1.0, 2.0, opt);
    EXPECT_GT(rep.n_qualifying, 100);
    const double expected = 0.6 * std::pow(x_stop, -0.6);
    EXPECT_NEAR(rep.A_emp, expected, 0.05 * expected);
    EXPECT_TRUE(rep.cap_exceeded);
    EXPECT_NEAR(rep.sup_z, opt.z_stop, 0.02);  // sup attained at the top
}

TEST(GrowthReportTest, InputGuards) {
    const TubeField f = reference_field();
    EXPECT_THROW(streamline_growth_report(f, 0.0, 1.0, {}), Error);
    EXPECT_THROW(streamline_growth_report(f, 1.0, 0.0, {}), Error);
}

}  // namespace
