/// @file core.hpp
/// @brief Shared primitives for the swirl laboratory: error model, small
///        3-vector algebra, and numeric helpers used across all modules.
///
/// Everything in this library is header-only; functions are `inline` and
/// types are aggregates unless they guard an invariant.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace swirllab {

// ============================================================================
// Error model
// ============================================================================

/// Machine-readable failure categories.  Every throwing operation documents
/// which codes it can raise; callers can branch on the code without parsing
/// message text.
enum class ErrorCode : std::uint8_t {
    // geometry
    ZeroVelocityAtStart,
    StepUnderflow,
    OnAxis,
    ZeroVelocity,
    DegenerateSection,
    // fields
    InfeasibleAnnulus,
    EpsilonTooLarge,
    SingularSwirl,
    OutsideSupport,
    // norms
    NonFiniteSample,
    AnnulusNotCertified,
    UnsortedLevels,
    // truncation energies
    NonpositiveSpeed,
    TimeRangeUncovered,
    DeltaOutOfRange,
    QOutOfRange,
    DegenerateFit,
    // exponent arithmetic
    AlphaOutOfRange,
    NotAdmissible,
    POutOfRange,
    // driver / configuration
    ConfigInvalid,
    UnknownSubcommand,
};

/// Name of an error code, for diagnostics and CLI output.
inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::ZeroVelocityAtStart: return "ZeroVelocityAtStart";
        case ErrorCode::StepUnderflow:       return "StepUnderflow";
        case ErrorCode::OnAxis:              return "OnAxis";
        case ErrorCode::ZeroVelocity:        return "ZeroVelocity";
        case ErrorCode::DegenerateSection:   return "DegenerateSection";
        case ErrorCode::InfeasibleAnnulus:   return "InfeasibleAnnulus";
        case ErrorCode::EpsilonTooLarge:     return "EpsilonTooLarge";
        case ErrorCode::SingularSwirl:       return "SingularSwirl";
        case ErrorCode::OutsideSupport:      return "OutsideSupport";
        case ErrorCode::NonFiniteSample:     return "NonFiniteSample";
        case ErrorCode::AnnulusNotCertified: return "AnnulusNotCertified";
        case ErrorCode::UnsortedLevels:      return "UnsortedLevels";
        case ErrorCode::NonpositiveSpeed:    return "NonpositiveSpeed";
        case ErrorCode::TimeRangeUncovered:  return "TimeRangeUncovered";
        case ErrorCode::DeltaOutOfRange:     return "DeltaOutOfRange";
        case ErrorCode::QOutOfRange:         return "QOutOfRange";
        case ErrorCode::DegenerateFit:       return "DegenerateFit";
        case ErrorCode::AlphaOutOfRange:     return "AlphaOutOfRange";
        case ErrorCode::NotAdmissible:       return "NotAdmissible";
        case ErrorCode::POutOfRange:         return "POutOfRange";
        case ErrorCode::ConfigInvalid:       return "ConfigInvalid";
        case ErrorCode::UnknownSubcommand:   return "UnknownSubcommand";
    }
    return "UnknownError";
}

/// Exception carrying an ErrorCode plus an optional integer payload
/// (e.g. the offending annulus index).
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what_arg, long index = -1)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what_arg),
          code_(code),
          index_(index) {}

    ErrorCode code() const noexcept { return code_; }
    /// Context-dependent integer payload (annulus index, iteration, ...);
    /// -1 when not applicable.
    long index() const noexcept { return index_; }

  private:
    ErrorCode code_;
    long index_;
};

// ============================================================================
// 3-vector algebra
// ============================================================================

/// Cartesian point / vector in R^3.  Aggregate on purpose: brace-init and
/// structured bindings keep call sites terse.
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// Points and displacement vectors share a representation.
using Point3 = Vec3;

inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
inline Vec3 operator*(Vec3 a, double s) { return s * a; }
inline Vec3 operator/(Vec3 a, double s) { return {a.x / s, a.y / s, a.z / s}; }

inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(Vec3 a, Vec3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }
inline double norm2(Vec3 a) { return dot(a, a); }

inline bool finite(Vec3 a) {
    return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

// ============================================================================
// Numeric helpers
// ============================================================================

inline constexpr double kPi = std::numbers::pi;

/// Cubic smoothstep on [0,1]: 3t^2 - 2t^3, clamped outside.  C^1 with zero
/// slope at both ends; maximum slope 3/2 at t = 1/2.
inline double smoothstep01(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return t * t * (3.0 - 2.0 * t);
}

/// Derivative of smoothstep01 (zero outside [0,1]).
inline double smoothstep01_deriv(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return 6.0 * t * (1.0 - t);
}

/// log(exp(a) + exp(b)) without overflow; handles -inf operands (absent terms).
inline double log_sum_exp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(std::min(a, b) - m));
}

/// Map axial coordinate z in [0, S) to the stretched coordinate
/// tau = -ln(S - z) used for near-cap resolution.  Exact for S = 1 via log1p.
inline double tau_of_z(double z, double S) {
    if (S == 1.0) return -std::log1p(-z);
    return -std::log(S - z);
}

/// Inverse of tau_of_z.
inline double z_of_tau(double tau, double S) {
    if (S == 1.0) return -std::expm1(-tau);
    return S - std::exp(-tau);
}

/// Least-squares slope of y against x (simple linear regression).
/// Returns {slope, intercept}.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

template <class XS, class YS>
LineFit fit_line(const XS& xs, const YS& ys) {
    const std::size_t n = xs.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double denom = n * sxx - sx * sx;
    LineFit f;
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    return f;
}

}  // namespace swirllab
