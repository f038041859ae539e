#pragma once

// Closed-form asymptotic estimates and the small-frequency phase analysis.
//
// Phase analysis: with Omega = omega / eps, the non-smooth-fold condition along
// the drifting parameter is g(mu) = -mu + A cos(Omega (mu0 - mu)) = 0. Roots with
// g'(mu) < 0 are the candidate tipping plateaus; as omega grows they move and new
// ones appear, which is what produces the staircase of sharp transitions.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <vector>

#include "tipfold/errors.hpp"
#include "tipfold/model.hpp"
#include "tipfold/orbit.hpp"
#include "tipfold/roots.hpp"

namespace tipfold {

namespace constants {
inline constexpr double c0 = 2.33810741; ///< first zero of Ai(-x)
inline constexpr double L = 0.7;         ///< empirical large-omega fold correction
inline const double M = c0 * std::cbrt(std::numbers::pi / 2.0);
} // namespace constants

/// Slow-drift tipping value of the unforced problem.
inline double mu_eps(double eps, double K) {
    if (eps == 0.0) return 0.0;
    const double lg = std::log(2.0 * K / eps);
    return -eps / 2.0 - eps / 2.0 * lg - eps * eps / (8.0 * K) * lg;
}

inline double mu_cf_large_omega(double A, double omega, double L = constants::L) {
    return 4.0 * A / (std::numbers::pi * omega) * (1.0 - L / (omega * omega));
}

inline double mu_cf_small_omega(double A, double omega) { return A / (1.0 + omega * omega / 4.0); }

/// 4A/(pi omega) - M (A eps^2 / omega)^(1/3).
inline double mu_tp_large_omega(double A, double omega, double eps) {
    return 4.0 * A / (std::numbers::pi * omega) - constants::M * std::cbrt(A * eps * eps / omega);
}

inline double snb_mu_tp(double alpha, double eps) {
    return -constants::c0 * std::cbrt(alpha) * std::cbrt(eps * eps);
}

/// True when drift is fast enough that x_P stays negative for all t > 0, so no
/// sharp transitions can occur.
inline bool drift_dominates(double eps, double mu0, double A, double omega) {
    return eps > 2.0 * mu0 + 2.0 * A / std::sqrt(1.0 + omega * omega / 4.0);
}

/// Smoothing thresholds: below alpha0 the smoothed system tips like the
/// non-smooth one, above alpha1 the threshold K is reached before the quadratic
/// regime matters.
inline double alpha0(double eps, double K) {
    const double h = std::log(2.0 * K / eps) / 2.0;
    return eps * h * h * h;
}

inline double alpha1(double eps, double K) { return std::pow(K, 1.5) / std::sqrt(eps); }

struct EstimateSet {
    double mu_eps = 0.0;
    double mu_g = 0.0;
    std::optional<double> mu_cf_large;       ///< needs omega > 0
    double mu_cf_small = 0.0;
    std::optional<double> mu_tp_large_omega; ///< needs omega > 0
    std::optional<double> snb_mu_tp;         ///< needs alpha > 0
    double c0 = constants::c0;
    double L = constants::L;
    double M = constants::M;
};

inline EstimateSet estimates(const SystemConfig& cfg) {
    EstimateSet e;
    e.mu_eps = cfg.eps > 0.0 ? mu_eps(cfg.eps, cfg.K) : 0.0;
    e.mu_g = grazing_mu(cfg.A, cfg.omega);
    e.mu_cf_small = mu_cf_small_omega(cfg.A, cfg.omega);
    if (cfg.omega > 0.0) {
        e.mu_cf_large = mu_cf_large_omega(cfg.A, cfg.omega);
        e.mu_tp_large_omega = mu_tp_large_omega(cfg.A, cfg.omega, cfg.eps);
    }
    if (cfg.alpha > 0.0 && cfg.eps > 0.0) e.snb_mu_tp = snb_mu_tp(cfg.alpha, cfg.eps);
    return e;
}

// ---------------------------------------------------------------------------
// Phase analysis

struct PhaseRoot {
    double mu_r = 0.0;
    int derivative_sign = 0; ///< sign of g'(mu_r)
    double slope = 0.0;      ///< d mu_r / d Omega
};

struct PhaseAnalysis {
    double Omega = 0.0;
    std::vector<PhaseRoot> roots; ///< ascending in mu_r
    std::optional<double> omega_star;
    std::optional<int> n_max;
    double lower = 0.0; ///< mu_TP bounds
    double upper = 0.0;
    double jump_scale = 0.0;
};

inline double g_ns(double mu, double mu0, double A, double Omega) {
    return -mu + A * std::cos(Omega * (mu0 - mu));
}

inline double g_ns_prime(double mu, double mu0, double A, double Omega) {
    return -1.0 + Omega * A * std::sin(Omega * (mu0 - mu));
}

inline double phase_slope(double mu_r, double mu0, double A, double Omega) {
    const double s = A * std::sin(Omega * (mu0 - mu_r));
    return -((mu0 - mu_r) * s) / (1.0 - Omega * s);
}

/// Sharp-transition frequency of the first plateau; absent when
/// 1 + mu_eps/A is outside [-1, 1] or the denominator is not positive.
inline std::optional<double> omega_star(double eps, double A, double mu0, double K) {
    if (!(A > 0.0)) return std::nullopt;
    const double me = mu_eps(eps, K);
    const double arg = 1.0 + me / A;
    const double den = mu0 - A - me;
    if (arg < -1.0 || arg > 1.0 || !(den > 0.0)) return std::nullopt;
    return eps * std::acos(arg) / den;
}

/// Largest n with omega - eps 2 n pi / (mu0 - A - mu_eps) > 0, where mu0 is
/// mu0_fn evaluated at zero frequency (for mu0 = m mu_G(omega) this is m A).
inline int n_max(double omega, double eps, double A, const std::function<double(double)>& mu0_fn, double K = 10.0) {
    const double mu0 = mu0_fn(0.0);
    const double den = mu0 - A - mu_eps(eps, K);
    if (!(den > 0.0))
        throw DomainError("n_max requires mu0 > A + mu_eps (mu0 = " + std::to_string(mu0) +
                          ", A + mu_eps = " + std::to_string(A + mu_eps(eps, K)) + ")");
    const double x = omega * den / (2.0 * std::numbers::pi * eps);
    int n = static_cast<int>(std::floor(x));
    if (n >= 1 && static_cast<double>(n) == x) --n; // strict inequality
    return std::max(n, 0);
}

inline PhaseAnalysis phase_roots(const SystemConfig& cfg, const std::function<double(double)>& mu0_fn = {}) {
    if (!(cfg.eps > 0.0)) throw ConfigError("phase analysis requires eps > 0");
    PhaseAnalysis pa;
    const double A = cfg.A;
    const double mu0 = cfg.mu0;
    pa.Omega = cfg.omega / cfg.eps;
    const double Om = pa.Omega;
    const double me = mu_eps(cfg.eps, cfg.K);
    pa.upper = A + me;
    pa.jump_scale = cfg.omega > 0.0 ? 2.0 * std::numbers::pi * cfg.eps / cfg.omega : 0.0;
    pa.lower = cfg.omega > 0.0 ? A + me - pa.jump_scale : pa.upper;
    pa.omega_star = omega_star(cfg.eps, A, mu0, cfg.K);
    try {
        pa.n_max = n_max(cfg.omega, cfg.eps, A, mu0_fn ? mu0_fn : [mu0](double) { return mu0; }, cfg.K);
    } catch (const DomainError&) {
        pa.n_max = std::nullopt;
    }

    auto annotate = [&](double mu) {
        const double gp = g_ns_prime(mu, mu0, A, Om);
        return PhaseRoot{mu, gp < 0.0 ? -1 : (gp > 0.0 ? 1 : 0), phase_slope(mu, mu0, A, Om)};
    };
    if (A == 0.0) {
        pa.roots.push_back(annotate(0.0));
        return pa;
    }
    if (Om == 0.0) {
        pa.roots.push_back(annotate(A));
        return pa;
    }

    const double lo = -A - 1.0;
    const double hi = std::min(mu0, A);
    if (!(hi > lo)) return pa;
    // Oscillation period in mu is 2 pi / Omega; 20 samples per period, and
    // extra resolution when the linear term is small against A Omega.
    const double step = std::numbers::pi / (10.0 * Om * std::max(1.0, A * Om / 10.0));
    const auto n = static_cast<long>(std::ceil((hi - lo) / step));
    auto g = [&](double mu) { return g_ns(mu, mu0, A, Om); };
    double prev_mu = lo;
    double prev_g = g(lo);
    if (prev_g == 0.0) pa.roots.push_back(annotate(lo));
    for (long i = 1; i <= n; ++i) {
        const double mu = i == n ? hi : lo + static_cast<double>(i) * (hi - lo) / static_cast<double>(n);
        const double gv = g(mu);
        if (gv == 0.0) {
            pa.roots.push_back(annotate(mu));
        } else if (prev_g != 0.0 && (gv < 0.0) != (prev_g < 0.0)) {
            pa.roots.push_back(annotate(roots::bisect(g, prev_mu, mu, 1e-15)));
        }
        prev_mu = mu;
        prev_g = gv;
    }
    return pa;
}

} // namespace tipfold
