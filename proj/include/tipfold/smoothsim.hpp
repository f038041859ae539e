#pragma once

// Adaptive integration of the smoothed system
//
//     dx/dt = 2 sqrt(x^2 + alpha^2) - 2 alpha - mu(t) + f(t)
//
// and of the saddle-node reference dy/dt = y^2/alpha - mu(t) + f(t), with the
// same tipping contract as the exact simulator (x reaches K while rising).
// Dormand-Prince 5(4) with dense output from Boost.Odeint; the tip is bracketed
// per step and bisected on the dense output.

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tipfold/asym.hpp"
#include "tipfold/errors.hpp"
#include "tipfold/exactsim.hpp"
#include "tipfold/model.hpp"
#include "tipfold/roots.hpp"

namespace tipfold {

enum class AlphaRegime { NonSmoothLike, SNBLike, ThresholdLimited };

inline std::string_view to_string(AlphaRegime r) {
    switch (r) {
    case AlphaRegime::NonSmoothLike: return "nonsmooth_like";
    case AlphaRegime::SNBLike: return "snb_like";
    case AlphaRegime::ThresholdLimited: return "threshold_limited";
    }
    return "";
}

inline AlphaRegime classify_alpha(double alpha, double eps, double K) {
    if (alpha < alpha0(eps, K)) return AlphaRegime::NonSmoothLike;
    if (alpha < alpha1(eps, K)) return AlphaRegime::SNBLike;
    return AlphaRegime::ThresholdLimited;
}

struct SmoothTipResult {
    double alpha = 0.0;
    bool tipped = false;
    double t_tp = std::numeric_limits<double>::quiet_NaN();
    double mu_tp = std::numeric_limits<double>::quiet_NaN();
    double t_end = 0.0;
    double x_end = 0.0;
    AlphaRegime regime = AlphaRegime::NonSmoothLike;
    double alpha0 = 0.0;
    double alpha1 = 0.0;
    std::size_t steps = 0;
};

struct IntegratorOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double event_tol = 1e-9;
    double min_step = 1e-13; ///< relative to max(1, |t|)
    std::size_t max_steps = 20'000'000;
};

/// Right-hand side for any of the three system kinds. The pwl form is only used
/// as a brute-force oracle for the exact simulator.
inline double smooth_rhs(const SystemConfig& cfg, double t, double x) {
    const double drive = -cfg.mu(t) + cfg.forcing(t);
    switch (cfg.kind) {
    case SystemKind::NonSmoothPWL: return 2.0 * std::abs(x) + drive;
    case SystemKind::SmoothedNSF: return smoothed_abs_term(x, cfg.alpha) + drive;
    case SystemKind::SNB: return x * x / cfg.alpha + drive;
    }
    return drive;
}

namespace detail {

using Dopri5 = boost::numeric::odeint::runge_kutta_dopri5<double, double, double, double,
                                                           boost::numeric::odeint::vector_space_algebra>;

// Integrates from (0, x0) until x = K is crossed upwards or t_max. The observer,
// if given, is called as obs(dense, t_lo, t_hi) after every accepted step so
// callers can sample the dense output.
template <class Observer>
SmoothTipResult integrate_impl(const SystemConfig& cfg, double t_max, const IntegratorOptions& opt, Observer&& obs) {
    namespace odeint = boost::numeric::odeint;
    auto sys = [&cfg](const double& x, double& dxdt, double t) { dxdt = smooth_rhs(cfg, t, x); };
    auto dense = odeint::make_dense_output(opt.atol, opt.rtol, Dopri5{});

    SmoothTipResult res;
    res.alpha = cfg.alpha;
    if (cfg.eps > 0.0) {
        res.alpha0 = alpha0(cfg.eps, cfg.K);
        res.alpha1 = alpha1(cfg.eps, cfg.K);
        res.regime = classify_alpha(cfg.alpha, cfg.eps, cfg.K);
    }

    double dt0 = 1e-3;
    if (cfg.omega > 0.0) dt0 = std::min(dt0, 0.01 / cfg.omega);
    dense.initialize(cfg.x0, 0.0, dt0);

    while (dense.current_time() < t_max) {
        if (res.steps++ > opt.max_steps) throw StepFloorReached("step count cap reached (" + describe(cfg) + ")");
        const double x_lo = dense.current_state();
        const auto [t_lo, t_hi] = dense.do_step(sys);
        if (dense.current_time_step() < opt.min_step * std::max(1.0, std::abs(t_hi)))
            throw StepFloorReached("step size collapsed at t = " + std::to_string(t_hi) + " (" + describe(cfg) + ")");
        const double x_hi = dense.current_state();
        if (!std::isfinite(x_hi)) throw StepFloorReached("non-finite state at t = " + std::to_string(t_hi));
        obs(dense, t_lo, std::min(t_hi, t_max));

        if (x_lo < cfg.K && x_hi >= cfg.K) {
            double x_mid = 0.0;
            auto below = [&](double t) {
                dense.calc_state(t, x_mid);
                return x_mid < cfg.K;
            };
            auto [lo, hi] = roots::bisect_predicate(below, t_lo, t_hi, opt.event_tol);
            const double t_tip = 0.5 * (lo + hi);
            dense.calc_state(t_tip, x_mid);
            if (t_tip <= t_max && smooth_rhs(cfg, t_tip, x_mid) > 0.0) {
                res.tipped = true;
                res.t_tp = t_tip;
                res.mu_tp = cfg.mu(t_tip);
                res.t_end = t_tip;
                res.x_end = cfg.K;
                return res;
            }
        }
        // Past the threshold by a wide margin without a recorded tip: the
        // quadratic system may be heading for blow-up, stop here.
        if (x_hi > 10.0 * cfg.K) break;
    }
    res.t_end = std::min(dense.current_time(), t_max);
    dense.calc_state(res.t_end, res.x_end);
    return res;
}

inline void check_smooth_config(const SystemConfig& cfg) {
    cfg.validate();
    if (cfg.kind == SystemKind::NonSmoothPWL) throw ConfigError("smooth integration requires kind = smoothed or snb");
}

} // namespace detail

/// Integrates cfg (any kind) up to t_max without throwing on a missing tip.
inline SmoothTipResult integrate_until(const SystemConfig& cfg, double t_max, const IntegratorOptions& opt = {}) {
    cfg.validate();
    if (!(t_max > 0.0)) throw ConfigError("integration requires t_max > 0");
    return detail::integrate_impl(cfg, t_max, opt, [](auto&, double, double) {});
}

/// First tip with the same doubling budget as the exact simulator.
inline SmoothTipResult integrate_to_tip(const SystemConfig& cfg, const IntegratorOptions& opt = {}) {
    if (!(cfg.eps > 0.0)) throw ConfigError("tipping search requires eps > 0");
    double budget = default_time_budget(cfg);
    for (int attempt = 0; attempt < 4; ++attempt, budget *= 2.0) {
        SmoothTipResult r = integrate_until(cfg, budget, opt);
        if (r.tipped) return r;
    }
    throw NoTipWithinBudget("no tipping within t = " + std::to_string(budget / 2.0) + " (" + describe(cfg) + ")");
}

/// Smoothed non-smooth-fold system. Without t_max the budget is extended as in
/// tipping_point and NoTipWithinBudget is raised if it runs out.
inline SmoothTipResult integrate_smoothed(const SystemConfig& cfg, std::optional<double> t_max = std::nullopt,
                                          const IntegratorOptions& opt = {}) {
    if (cfg.kind != SystemKind::SmoothedNSF) throw ConfigError("integrate_smoothed requires kind = smoothed");
    detail::check_smooth_config(cfg);
    return t_max ? integrate_until(cfg, *t_max, opt) : integrate_to_tip(cfg, opt);
}

inline SystemConfig snb_config(double alpha, double eps, double A, double omega, double K, double mu0, double x0) {
    SystemConfig cfg;
    cfg.kind = SystemKind::SNB;
    cfg.alpha = alpha;
    cfg.eps = eps;
    cfg.A = A;
    cfg.omega = omega;
    cfg.K = K;
    cfg.mu0 = mu0;
    cfg.x0 = x0;
    return cfg;
}

inline SmoothTipResult integrate_snb(double alpha, double eps, double A, double omega, double K, double mu0, double x0,
                                     std::optional<double> t_max = std::nullopt, const IntegratorOptions& opt = {}) {
    const SystemConfig cfg = snb_config(alpha, eps, A, omega, K, mu0, x0);
    detail::check_smooth_config(cfg);
    return t_max ? integrate_until(cfg, *t_max, opt) : integrate_to_tip(cfg, opt);
}

/// One tipping result per alpha (ascending). The base kind is kept when it is
/// snb, otherwise the smoothed system is used.
inline std::vector<SmoothTipResult> alpha_sweep(const SystemConfig& base, const std::vector<double>& alphas,
                                                const IntegratorOptions& opt = {}) {
    if (!std::is_sorted(alphas.begin(), alphas.end())) throw ConfigError("alpha_sweep requires ascending alphas");
    std::vector<SmoothTipResult> out;
    out.reserve(alphas.size());
    for (double a : alphas) {
        SystemConfig cfg = base;
        cfg.alpha = a;
        if (cfg.kind == SystemKind::NonSmoothPWL) cfg.kind = SystemKind::SmoothedNSF;
        detail::check_smooth_config(cfg);
        out.push_back(integrate_to_tip(cfg, opt));
    }
    return out;
}

/// x on a time grid (ascending, starting at >= 0) from the dense output; NaN
/// after the tip or the end of integration.
inline std::vector<double> sample_path(const SystemConfig& cfg, const std::vector<double>& grid,
                                       const IntegratorOptions& opt = {}) {
    cfg.validate();
    std::vector<double> out(grid.size(), std::numeric_limits<double>::quiet_NaN());
    if (grid.empty()) return out;
    std::size_t next = 0;
    while (next < grid.size() && grid[next] <= 0.0) out[next++] = cfg.x0;
    const double t_max = grid.back();
    if (!(t_max > 0.0)) return out;
    const SmoothTipResult r = detail::integrate_impl(cfg, t_max, opt, [&](auto& dense, double lo, double hi) {
        while (next < grid.size() && grid[next] <= hi) {
            if (grid[next] >= lo) dense.calc_state(grid[next], out[next]);
            ++next;
        }
    });
    const double t_stop = r.tipped ? r.t_tp : r.t_end;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (grid[i] > t_stop) out[i] = std::numeric_limits<double>::quiet_NaN();
    return out;
}

} // namespace tipfold
