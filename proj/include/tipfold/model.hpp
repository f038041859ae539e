#pragma once

// Domain types and closed-form segment solutions for
//
//     dx/dt = 2|x| - mu(t) + f(t),   mu(t) = mu0 - eps t,   f(t) = A cos(omega t - phase)
//
// plus the smoothed (2 sqrt(x^2 + alpha^2) - 2 alpha) and saddle-node (x^2 / alpha)
// relatives used by smoothsim.

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>

#include "tipfold/errors.hpp"

namespace tipfold {

enum class SystemKind { NonSmoothPWL, SmoothedNSF, SNB };

inline std::string_view to_string(SystemKind kind) {
    switch (kind) {
    case SystemKind::NonSmoothPWL: return "pwl";
    case SystemKind::SmoothedNSF: return "smoothed";
    case SystemKind::SNB: return "snb";
    }
    return "pwl";
}

inline SystemKind parse_system_kind(std::string_view text) {
    if (text == "pwl" || text == "nonsmooth") return SystemKind::NonSmoothPWL;
    if (text == "smoothed" || text == "nsf") return SystemKind::SmoothedNSF;
    if (text == "snb") return SystemKind::SNB;
    throw ConfigError("unknown system kind '" + std::string(text) + "' (expected pwl|smoothed|snb)");
}

/// Full parameterisation of one scenario. Defaults are the reference scenario
/// mu0 = 1, x0 = -1/2, eps = 0.1, A = 1, omega = 1, K = 10.
struct SystemConfig {
    double mu0 = 1.0;
    double eps = 0.1;
    double A = 1.0;
    double omega = 1.0;
    double phase = 0.0; ///< forcing phase offset: f(t) = A cos(omega t - phase)
    double alpha = 0.0;
    double K = 10.0;
    double x0 = -0.5;
    SystemKind kind = SystemKind::NonSmoothPWL;

    [[nodiscard]] double mu(double t) const noexcept { return mu0 - eps * t; }

    [[nodiscard]] double forcing(double t) const noexcept {
        if (A == 0.0) return 0.0;
        return A * std::cos(omega * t - phase);
    }

    /// Throws ConfigError naming the first violated invariant.
    void validate() const {
        auto fail = [](const std::string& what) { throw ConfigError("invalid config: " + what); };
        auto finite = [](double v) { return std::isfinite(v); };
        if (!finite(mu0) || !finite(eps) || !finite(A) || !finite(omega) || !finite(phase) ||
            !finite(alpha) || !finite(K) || !finite(x0))
            fail("all parameters must be finite");
        if (eps < 0.0) fail("eps >= 0");
        if (A < 0.0) fail("A >= 0");
        if (omega < 0.0) fail("omega >= 0");
        if (!(K > 0.0)) fail("K > 0");
        if (alpha < 0.0) fail("alpha >= 0");
        if (kind == SystemKind::NonSmoothPWL && alpha != 0.0) fail("kind = pwl requires alpha = 0");
        if (kind == SystemKind::SmoothedNSF && !(alpha > 0.0)) fail("kind = smoothed requires alpha > 0");
        if (kind == SystemKind::SNB && !(alpha > 0.0)) fail("kind = snb requires alpha > 0");
    }

    friend bool operator==(const SystemConfig&, const SystemConfig&) = default;
};

enum class Region { Negative, Positive };

inline std::string_view to_string(Region r) { return r == Region::Negative ? "-" : "+"; }

/// Drive parameters shared by every segment of one trajectory.
struct Drive {
    double mu0 = 0.0;
    double eps = 0.0;
    double A = 0.0;
    double omega = 0.0;
    double phase = 0.0;

    static Drive from(const SystemConfig& cfg) noexcept {
        return {cfg.mu0, cfg.eps, cfg.A, cfg.omega, cfg.phase};
    }

    [[nodiscard]] double mu(double t) const noexcept { return mu0 - eps * t; }
    [[nodiscard]] double forcing(double t) const noexcept {
        return A == 0.0 ? 0.0 : A * std::cos(omega * t - phase);
    }

    /// Periodic part of the particular solution in `region`:
    /// Q+-(t) = A/(4 + omega^2) (omega sin(theta) -+ 2 cos(theta)), theta = omega t - phase.
    [[nodiscard]] double periodic_part(Region region, double t) const noexcept {
        if (A == 0.0) return 0.0;
        const double theta = omega * t - phase;
        const double s = std::sin(theta);
        const double c = std::cos(theta);
        const double scale = A / (4.0 + omega * omega);
        return region == Region::Positive ? scale * (omega * s - 2.0 * c) : scale * (omega * s + 2.0 * c);
    }

    [[nodiscard]] double periodic_part_dt(Region region, double t) const noexcept {
        if (A == 0.0) return 0.0;
        const double theta = omega * t - phase;
        const double s = std::sin(theta);
        const double c = std::cos(theta);
        const double scale = A * omega / (4.0 + omega * omega);
        return region == Region::Positive ? scale * (omega * c + 2.0 * s) : scale * (omega * c - 2.0 * s);
    }

    /// Exponential-free solution of the linear ODE valid in `region`.
    [[nodiscard]] double particular(Region region, double t) const noexcept {
        const double sign = region == Region::Positive ? 1.0 : -1.0;
        return sign * mu(t) / 2.0 - eps / 4.0 + periodic_part(region, t);
    }

    [[nodiscard]] double particular_dt(Region region, double t) const noexcept {
        const double sign = region == Region::Positive ? 1.0 : -1.0;
        return -sign * eps / 2.0 + periodic_part_dt(region, t);
    }

    /// Right-hand side of the non-smooth system.
    [[nodiscard]] double rhs(double t, double x) const noexcept {
        return 2.0 * std::abs(x) - mu(t) + forcing(t);
    }
};

/// Closed-form solution on one side of x = 0:
///   x(t) = P(t) + C exp(-+2 (t - t_ref))   (- for Negative, + for Positive)
/// The exponential is anchored at t_ref so it never overflows for large t.
struct SegmentSolution {
    Region region = Region::Negative;
    double t_ref = 0.0;
    double C = 0.0;
    Drive drive;

    /// Segment through (t_ref, x_ref).
    static SegmentSolution through(const Drive& drive, Region region, double t_ref, double x_ref) noexcept {
        return {region, t_ref, x_ref - drive.particular(region, t_ref), drive};
    }

    [[nodiscard]] double rate() const noexcept { return region == Region::Positive ? 2.0 : -2.0; }

    [[nodiscard]] double value(double t) const noexcept {
        return drive.particular(region, t) + C * std::exp(rate() * (t - t_ref));
    }

    [[nodiscard]] double derivative(double t) const noexcept {
        return drive.particular_dt(region, t) + rate() * C * std::exp(rate() * (t - t_ref));
    }
};

/// f(t) = A cos(omega t - phase).
inline double forcing(const SystemConfig& cfg, double t) noexcept { return cfg.forcing(t); }

/// Particular solution x_P(t) of the x > 0 equation.
inline double x_particular(const SystemConfig& cfg, double t) {
    if (cfg.kind != SystemKind::NonSmoothPWL)
        throw ConfigError("x_particular requires kind = pwl");
    return Drive::from(cfg).particular(Region::Positive, t);
}

inline double segment_value(const SegmentSolution& seg, double t) noexcept { return seg.value(t); }

/// Smoothed absolute-value term 2 sqrt(x^2 + alpha^2) - 2 alpha, written without
/// cancellation for alpha >> |x|.
inline double smoothed_abs_term(double x, double alpha) noexcept {
    if (alpha == 0.0) return 2.0 * std::abs(x);
    return 2.0 * x * x / (std::sqrt(x * x + alpha * alpha) + alpha);
}

inline std::string describe(const SystemConfig& cfg) {
    std::ostringstream os;
    os.precision(6);
    os << "kind=" << to_string(cfg.kind) << " mu0=" << cfg.mu0 << " eps=" << cfg.eps << " A=" << cfg.A
       << " omega=" << cfg.omega << " phase=" << cfg.phase << " alpha=" << cfg.alpha << " K=" << cfg.K
       << " x0=" << cfg.x0;
    return os.str();
}

} // namespace tipfold
