#pragma once

// Periodic orbits of dx/dt = 2|x| - mu + A cos(omega t) (no drift) that cross x = 0.
//
// With theta = omega t, the orbit is positive on theta in [a, b] and negative on
// [b, a + 2 pi]. On each side it is the exact linear solution
//
//   x+(theta) =  mu/2 + C+ exp( 2 (theta - a) / omega) + Q+(theta)
//   x-(theta) = -mu/2 + C- exp(-2 (theta - b) / omega) + Q-(theta)
//
// and the four zero conditions x+(a) = x+(b) = x-(b) = x-(a + 2 pi) = 0 pin
// (a, b, C+, C-). Newton with the analytic Jacobian solves them; natural
// continuation in mu from the grazing orbit runs down to the cyclic fold.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tipfold/errors.hpp"

namespace tipfold {

struct PeriodicOrbit {
    double mu = 0.0;
    double omega = 0.0;
    double A = 0.0;
    double a = 0.0; ///< phase where x crosses upwards (theta = omega t)
    double b = 0.0; ///< phase where x crosses downwards
    double c_plus = 0.0;
    double c_minus = 0.0;
    double residual = 0.0; ///< max-norm of the four zero conditions
    double mean_x = 0.0;   ///< period average

    [[nodiscard]] double q_scale() const noexcept { return A / (4.0 + omega * omega); }
    [[nodiscard]] double q_plus(double theta) const noexcept {
        return q_scale() * (omega * std::sin(theta) - 2.0 * std::cos(theta));
    }
    [[nodiscard]] double q_minus(double theta) const noexcept {
        return q_scale() * (omega * std::sin(theta) + 2.0 * std::cos(theta));
    }

    [[nodiscard]] double value_positive(double theta) const noexcept {
        return mu / 2.0 + c_plus * std::exp(2.0 * (theta - a) / omega) + q_plus(theta);
    }
    [[nodiscard]] double value_negative(double theta) const noexcept {
        return -mu / 2.0 + c_minus * std::exp(-2.0 * (theta - b) / omega) + q_minus(theta);
    }

    /// x(t) on the periodic orbit, for any t.
    [[nodiscard]] double value(double t) const noexcept {
        constexpr double two_pi = 2.0 * std::numbers::pi;
        double theta = omega * t;
        theta = a + std::fmod(std::fmod(theta - a, two_pi) + two_pi, two_pi);
        return theta <= b ? value_positive(theta) : value_negative(theta);
    }

    [[nodiscard]] double period() const noexcept { return 2.0 * std::numbers::pi / omega; }

    /// Fraction of the period spent in x > 0.
    [[nodiscard]] double positive_fraction() const noexcept { return (b - a) / (2.0 * std::numbers::pi); }
};

enum class BranchTermination { FoldDetected, StepFloor, Diverged };

inline std::string_view to_string(BranchTermination t) {
    switch (t) {
    case BranchTermination::FoldDetected: return "fold_detected";
    case BranchTermination::StepFloor: return "step_floor";
    case BranchTermination::Diverged: return "diverged";
    }
    return "";
}

struct ContinuationBranch {
    std::vector<PeriodicOrbit> points; ///< from mu_G downwards
    double mu_cf = 0.0;                ///< refined fold value
    double mu_last = 0.0;              ///< last converged mu (the "solver fails below here" value)
    PeriodicOrbit fold_orbit;
    BranchTermination termination = BranchTermination::Diverged;
};

/// mu_G = A / sqrt(1 + omega^2 / 4).
inline double grazing_mu(double A, double omega) noexcept { return A / std::sqrt(1.0 + omega * omega / 4.0); }

namespace orbit_detail {

using Vec4 = Eigen::Vector4d;

inline Vec4 pack(const PeriodicOrbit& o) { return {o.a, o.b, o.c_plus, o.c_minus}; }

inline void unpack(PeriodicOrbit& o, const Vec4& u) {
    o.a = u[0];
    o.b = u[1];
    o.c_plus = u[2];
    o.c_minus = u[3];
}

inline Vec4 residuals(double mu, double omega, double A, const Vec4& u) {
    PeriodicOrbit o;
    o.mu = mu;
    o.omega = omega;
    o.A = A;
    unpack(o, u);
    const double e_plus = std::exp(2.0 * (o.b - o.a) / omega);
    const double e_minus = std::exp(-2.0 * (2.0 * std::numbers::pi + o.a - o.b) / omega);
    return {mu / 2.0 + o.c_plus + o.q_plus(o.a),
            mu / 2.0 + o.c_plus * e_plus + o.q_plus(o.b),
            -mu / 2.0 + o.c_minus + o.q_minus(o.b),
            -mu / 2.0 + o.c_minus * e_minus + o.q_minus(o.a)};
}

inline Eigen::Matrix4d jacobian(double omega, double A, const Vec4& u) {
    const double a = u[0], b = u[1], cp = u[2], cm = u[3];
    const double s = A / (4.0 + omega * omega);
    auto dq_plus = [&](double th) { return s * (omega * std::cos(th) + 2.0 * std::sin(th)); };
    auto dq_minus = [&](double th) { return s * (omega * std::cos(th) - 2.0 * std::sin(th)); };
    const double e_plus = std::exp(2.0 * (b - a) / omega);
    const double e_minus = std::exp(-2.0 * (2.0 * std::numbers::pi + a - b) / omega);
    const double k = 2.0 / omega;
    Eigen::Matrix4d J;
    J << dq_plus(a), 0.0, 1.0, 0.0,
         -k * cp * e_plus, k * cp * e_plus + dq_plus(b), e_plus, 0.0,
         0.0, dq_minus(b), 0.0, 1.0,
         -k * cm * e_minus + dq_minus(a), k * cm * e_minus, 0.0, e_minus;
    return J;
}

} // namespace orbit_detail

/// Period average of x by exact integration of both exponential+trig pieces.
inline double mean_x(const PeriodicOrbit& o) {
    const double w = o.omega;
    const double s = o.q_scale();
    // integral over theta of Q+-(theta) d theta
    auto int_q_plus = [&](double th) { return s * (-w * std::cos(th) - 2.0 * std::sin(th)); };
    auto int_q_minus = [&](double th) { return s * (-w * std::cos(th) + 2.0 * std::sin(th)); };
    const double len_plus = o.b - o.a;
    const double len_minus = 2.0 * std::numbers::pi + o.a - o.b;
    // integrals in theta; dt = d theta / omega cancels against the period 2 pi / omega
    const double i_plus = o.mu / 2.0 * len_plus + o.c_plus * (w / 2.0) * std::expm1(2.0 * len_plus / w) +
                          int_q_plus(o.b) - int_q_plus(o.a);
    const double i_minus = -o.mu / 2.0 * len_minus - o.c_minus * (w / 2.0) * std::expm1(-2.0 * len_minus / w) +
                           int_q_minus(o.a + 2.0 * std::numbers::pi) - int_q_minus(o.b);
    return (i_plus + i_minus) / (2.0 * std::numbers::pi);
}

/// Orbit at mu = mu_G: entirely in x <= 0, touching zero at theta = atan(omega / 2).
inline PeriodicOrbit grazing_orbit(double A, double omega) {
    if (!(A > 0.0)) throw DomainError("grazing_orbit requires A > 0");
    PeriodicOrbit o;
    o.A = A;
    o.omega = omega;
    o.mu = grazing_mu(A, omega);
    o.a = o.b = std::atan2(omega, 2.0);
    o.c_minus = 0.0;
    o.c_plus = -o.mu / 2.0 - o.q_plus(o.a);
    if (omega > 0.0) o.residual = orbit_detail::residuals(o.mu, omega, A, orbit_detail::pack(o)).cwiseAbs().maxCoeff();
    o.mean_x = -o.mu / 2.0;
    return o;
}

struct OrbitSolveOptions {
    int max_iter = 50;
    int max_halvings = 8;
    double accept_residual = 1e-10;
    double max_step = 4.0; ///< Newton steps larger than this (in a, b) count as divergence
    int physicality_grid = 512;
};

/// True when x+ >= 0 on the positive arc and x- <= 0 on the negative arc (grid check).
inline bool is_physical(const PeriodicOrbit& o, int grid = 512, double tol = 1e-10) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double len_plus = o.b - o.a;
    if (len_plus < -1e-12 || len_plus >= two_pi) return false;
    const double scale = std::max({1.0, std::abs(o.mu), o.A});
    for (int i = 1; i < grid; ++i) {
        const double f = static_cast<double>(i) / grid;
        if (len_plus > 0.0 && o.value_positive(o.a + f * len_plus) < -tol * scale) return false;
        if (o.value_negative(o.b + f * (two_pi - len_plus)) > tol * scale) return false;
    }
    return true;
}

/// Newton solution of the four zero conditions at (mu, omega, A), started from `guess`.
inline PeriodicOrbit solve_orbit(double mu, double omega, double A, const PeriodicOrbit& guess,
                                 const OrbitSolveOptions& opt = {}) {
    using namespace orbit_detail;
    if (!(omega > 0.0)) throw DomainError("solve_orbit requires omega > 0");
    Vec4 u = pack(guess);
    Vec4 F = residuals(mu, omega, A, u);
    double r = F.cwiseAbs().maxCoeff();
    const double tiny = 1e-14 * std::max(1.0, A);

    for (int iter = 0; iter < opt.max_iter && r > tiny; ++iter) {
        const Eigen::Matrix4d J = jacobian(omega, A, u);
        const Vec4 du = J.fullPivLu().solve(-F);
        if (!du.allFinite() || std::abs(du[0]) > opt.max_step || std::abs(du[1]) > opt.max_step)
            throw NewtonDiverged("Newton step exploded at mu = " + std::to_string(mu));
        double lambda = 1.0;
        bool improved = false;
        for (int k = 0; k <= opt.max_halvings; ++k, lambda *= 0.5) {
            const Vec4 trial = u + lambda * du;
            const Vec4 Ft = residuals(mu, omega, A, trial);
            const double rt = Ft.cwiseAbs().maxCoeff();
            if (std::isfinite(rt) && rt < r) {
                u = trial;
                F = Ft;
                r = rt;
                improved = true;
                break;
            }
        }
        if (!improved) break;
        if (du.cwiseAbs().maxCoeff() < 1e-15) break;
    }
    if (!(r < opt.accept_residual))
        throw NewtonDiverged("Newton did not converge at mu = " + std::to_string(mu) +
                             " (residual " + std::to_string(r) + ")");

    PeriodicOrbit o;
    o.mu = mu;
    o.omega = omega;
    o.A = A;
    // keep a in (-pi, pi]
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double shift = two_pi * std::round(u[0] / two_pi);
    u[0] -= shift;
    u[1] -= shift;
    unpack(o, u);
    o.residual = r;
    if (!is_physical(o, opt.physicality_grid))
        throw Unphysical("orbit at mu = " + std::to_string(mu) + " violates the sign conditions");
    o.mean_x = mean_x(o);
    return o;
}

struct ContinuationOptions {
    double step_floor = 1e-8;
    double first_step_fraction = 1e-4; ///< first step below mu_G, relative to mu_G
    int max_steps = 20000;
    int fold_fit_points = 5;
    OrbitSolveOptions newton;
};

namespace orbit_detail {

// Seed just below grazing: the negative orbit pokes above zero on a window of
// half-width sqrt(2 (mu_G - mu) / mu_G) around the graze phase.
inline PeriodicOrbit seed_below_grazing(const PeriodicOrbit& graze, double mu) {
    PeriodicOrbit s = graze;
    s.mu = mu;
    const double delta = std::sqrt(std::max(0.0, 2.0 * (graze.mu - mu) / graze.mu));
    s.a = graze.a - delta;
    s.b = graze.a + delta;
    s.c_plus = -mu / 2.0 - s.q_plus(s.a);
    s.c_minus = mu / 2.0 - s.q_minus(s.b);
    return s;
}

inline PeriodicOrbit extrapolate(const PeriodicOrbit& p0, const PeriodicOrbit& p1, double mu) {
    const double t = (mu - p1.mu) / (p1.mu - p0.mu);
    PeriodicOrbit s = p1;
    s.mu = mu;
    s.a = p1.a + t * (p1.a - p0.a);
    s.b = p1.b + t * (p1.b - p0.b);
    s.c_plus = p1.c_plus + t * (p1.c_plus - p0.c_plus);
    s.c_minus = p1.c_minus + t * (p1.c_minus - p0.c_minus);
    return s;
}

// Least-squares parabola mu = c0 + c1 a + c2 a^2 through the trailing points;
// returns the vertex mu when it is a plausible refinement of the last point.
inline std::optional<double> parabola_fold(const std::vector<PeriodicOrbit>& pts, int n) {
    if (static_cast<int>(pts.size()) < n + 1 || n < 3) return std::nullopt;
    Eigen::MatrixXd M(n, 3);
    Eigen::VectorXd y(n);
    const double a_ref = pts.back().a;
    for (int i = 0; i < n; ++i) {
        const PeriodicOrbit& p = pts[pts.size() - n + i];
        const double da = p.a - a_ref;
        M(i, 0) = 1.0;
        M(i, 1) = da;
        M(i, 2) = da * da;
        y[i] = p.mu;
    }
    const Eigen::Vector3d c = M.colPivHouseholderQr().solve(y);
    if (!c.allFinite() || !(c[2] > 0.0)) return std::nullopt;
    const double vertex = c[0] - c[1] * c[1] / (4.0 * c[2]);
    const double last = pts.back().mu;
    const double span = pts[pts.size() - n].mu - last;
    if (!(vertex <= last) || last - vertex > std::max(span, 1e-6)) return std::nullopt;
    return vertex;
}

} // namespace orbit_detail

/// Natural continuation in mu from the grazing orbit down to the cyclic fold.
/// The step is halved on every Newton failure; once it falls below the floor
/// the last converged mu is the fold estimate, refined by a parabola fit of
/// mu against a over the trailing points.
inline ContinuationBranch continue_to_fold(double omega, double A, double step0 = 0.01,
                                           const ContinuationOptions& opt = {}) {
    if (!(A > 0.0)) throw DomainError("continue_to_fold requires A > 0");
    if (omega < 0.0) throw DomainError("continue_to_fold requires omega >= 0");

    ContinuationBranch branch;
    const PeriodicOrbit graze = grazing_orbit(A, omega);
    branch.points.push_back(graze);
    if (omega == 0.0) {
        // Constant forcing: the stable point -(mu - A)/2 exists down to mu = A = mu_G.
        branch.mu_cf = branch.mu_last = graze.mu;
        branch.fold_orbit = graze;
        branch.termination = BranchTermination::FoldDetected;
        return branch;
    }
    if (!(graze.residual < opt.newton.accept_residual))
        throw ContinuationDiverged("grazing orbit does not satisfy the zero conditions");

    const double step_max = step0 * graze.mu;
    double h = std::min(step_max, opt.first_step_fraction * graze.mu);
    bool grow = true;
    for (int step = 0; step < opt.max_steps && h >= opt.step_floor; ++step) {
        const PeriodicOrbit& last = branch.points.back();
        const double mu = last.mu - h;
        const PeriodicOrbit seed = branch.points.size() < 2
                                       ? orbit_detail::seed_below_grazing(graze, mu)
                                       : orbit_detail::extrapolate(branch.points[branch.points.size() - 2], last, mu);
        try {
            PeriodicOrbit next = solve_orbit(mu, omega, A, seed, opt.newton);
            const bool continuous = std::abs(next.a - seed.a) < 0.5 && std::abs(next.b - seed.b) < 0.5 &&
                                    next.b - next.a > 0.0;
            if (!continuous) throw NewtonDiverged("jumped branch");
            branch.points.push_back(next);
            if (grow) h = std::min(2.0 * h, step_max);
        } catch (const Error&) {
            grow = false;
            h *= 0.5;
        }
    }

    if (branch.points.size() < 2) {
        branch.mu_cf = branch.mu_last = graze.mu;
        branch.fold_orbit = graze;
        branch.termination = BranchTermination::StepFloor;
        return branch;
    }
    branch.fold_orbit = branch.points.back();
    branch.mu_last = branch.fold_orbit.mu;
    branch.mu_cf = orbit_detail::parabola_fold(branch.points, opt.fold_fit_points).value_or(branch.mu_last);
    branch.termination = BranchTermination::FoldDetected;
    return branch;
}

/// Orbit at a given mu in [mu_CF, mu_G], by continuation from grazing.
inline PeriodicOrbit orbit_at(double mu, double omega, double A, const ContinuationOptions& opt = {}) {
    const PeriodicOrbit graze = grazing_orbit(A, omega);
    if (mu >= graze.mu) return graze;
    PeriodicOrbit current = graze;
    PeriodicOrbit previous = graze;
    double h = opt.first_step_fraction * graze.mu;
    int accepted = 0;
    bool grow = true;
    for (int step = 0; step < opt.max_steps && h >= opt.step_floor; ++step) {
        const double target = std::max(mu, current.mu - h);
        const PeriodicOrbit seed = accepted == 0 ? orbit_detail::seed_below_grazing(graze, target)
                                                 : orbit_detail::extrapolate(previous, current, target);
        try {
            PeriodicOrbit next = solve_orbit(target, omega, A, seed, opt.newton);
            if (!(next.b - next.a > 0.0)) throw NewtonDiverged("degenerate orbit");
            previous = current;
            current = next;
            ++accepted;
            if (current.mu == mu) return current;
            if (grow) h = std::min(2.0 * h, 0.01 * graze.mu);
        } catch (const Error&) {
            grow = false;
            h *= 0.5;
        }
    }
    throw NewtonDiverged("no periodic orbit at mu = " + std::to_string(mu) + " (below the cyclic fold?)");
}

/// Leading-order large-omega relation pi mu = (4 A / omega) (a sin a + cos a).
inline std::vector<std::pair<double, double>> a_of_mu_curve(double omega, double A, const std::vector<double>& a_grid) {
    std::vector<std::pair<double, double>> out;
    out.reserve(a_grid.size());
    for (double a : a_grid)
        out.emplace_back(4.0 * A / (std::numbers::pi * omega) * (a * std::sin(a) + std::cos(a)), a);
    return out;
}

} // namespace tipfold
