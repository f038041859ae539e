#pragma once

// Parameter sweeps of the tipping value, sharp-transition detection, the
// (eps, omega) surface and the fold table.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "tipfold/asym.hpp"
#include "tipfold/errors.hpp"
#include "tipfold/exactsim.hpp"
#include "tipfold/model.hpp"
#include "tipfold/orbit.hpp"
#include "tipfold/smoothsim.hpp"

namespace tipfold {

// ---------------------------------------------------------------------------
// Parallel map

/// Worker count: TIPFOLD_THREADS if set and positive, else the logical cores.
inline unsigned sweep_threads() {
    if (const char* env = std::getenv("TIPFOLD_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && n > 0) return static_cast<unsigned>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// out[i] = fn(i) for i < n. Results land in index order whatever the schedule.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t n, Fn&& fn, unsigned threads = sweep_threads()) {
    std::vector<T> out(n);
    threads = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), std::max<std::size_t>(n, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) out[i] = fn(i);
        });
    for (auto& t : pool) t.join();
    return out;
}

// ---------------------------------------------------------------------------
// Symbolic mu0 / x0

/// mu0 as a literal or as m * mu_G(omega).
struct Mu0Spec {
    bool relative = false;
    double value = 1.0;

    static Mu0Spec literal(double v) { return {false, v}; }
    static Mu0Spec times_grazing(double m) { return {true, m}; }

    [[nodiscard]] double at(double A, double omega) const { return relative ? value * grazing_mu(A, omega) : value; }
    friend bool operator==(const Mu0Spec&, const Mu0Spec&) = default;
};

/// x0 as a literal or as -mu0/2 (start on the stable branch).
struct X0Spec {
    bool half_mu0 = false;
    double value = -0.5;

    static X0Spec literal(double v) { return {false, v}; }
    static X0Spec stable_branch() { return {true, 0.0}; }

    [[nodiscard]] double at(double mu0) const { return half_mu0 ? -mu0 / 2.0 : value; }
    friend bool operator==(const X0Spec&, const X0Spec&) = default;
};

struct SweepSetup {
    SystemConfig base;
    std::optional<Mu0Spec> mu0;  ///< absent: base.mu0
    std::optional<X0Spec> x0;    ///< absent: base.x0
    bool with_orbits = true;     ///< co-compute mu_CF and mu_G
    bool refine = true;          ///< bisect flagged cells
    int refine_passes = 3;

    /// base with omega/eps/alpha replaced and mu0, x0 resolved.
    [[nodiscard]] SystemConfig resolve(SystemConfig cfg) const {
        if (mu0) cfg.mu0 = mu0->at(cfg.A, cfg.omega);
        if (x0) cfg.x0 = x0->at(cfg.mu0);
        return cfg;
    }
};

// ---------------------------------------------------------------------------
// Point evaluation

struct TipSample {
    std::optional<double> mu_tp;
    std::optional<double> t_tp;
    std::optional<std::size_t> cross_ups; ///< CrossUp events before the tip (exact runs only)
    std::string error;
};

/// Exact simulator for the pwl system, adaptive integration otherwise. Library
/// errors are recorded, not thrown.
inline TipSample evaluate_tip(const SystemConfig& cfg) {
    TipSample s;
    try {
        if (cfg.kind == SystemKind::NonSmoothPWL) {
            cfg.validate();
            if (!(cfg.eps > 0.0)) throw ConfigError("sweep points need eps > 0");
            double budget = default_time_budget(cfg);
            for (int attempt = 0; attempt < 4; ++attempt, budget *= 2.0) {
                const Trajectory tr = simulate(cfg, budget);
                if (tr.tipped) {
                    s.mu_tp = tr.mu_tp;
                    s.t_tp = tr.t_tp;
                    s.cross_ups = tr.count(EventKind::CrossUp);
                    return s;
                }
            }
            throw NoTipWithinBudget("no tipping within t = " + std::to_string(budget / 2.0));
        }
        const SmoothTipResult r = integrate_to_tip(cfg);
        s.mu_tp = r.mu_tp;
        s.t_tp = r.t_tp;
    } catch (const Error& e) {
        s.error = e.what();
    }
    return s;
}

// ---------------------------------------------------------------------------
// Transition detection

struct Transition {
    double location = 0.0;   ///< refined abscissa
    double drop = 0.0;       ///< mu_TP(right) - mu_TP(left) across the flagged grid cell
    double cell_lo = 0.0;
    double cell_hi = 0.0;
    std::size_t cell = 0;    ///< index i of the cell [grid[i], grid[i+1]]
};

struct TransitionOptions {
    double factor = 5.0;     ///< outlier threshold on |first difference| / local median
    std::size_t window = 8;  ///< neighbouring differences on each side
    double floor = 1e-3;     ///< differences below this are never transitions
};

/// Flags cells whose |d mu_TP| exceeds factor * median of the neighbouring
/// |differences|. Cells touching a missing value are skipped; adjacent flagged
/// cells with the same sign collapse to the larger one.
inline std::vector<Transition> detect_transitions(const std::vector<double>& grid,
                                                  const std::vector<std::optional<double>>& values,
                                                  const TransitionOptions& opt = {}) {
    std::vector<Transition> out;
    const std::size_t n = grid.size();
    if (n < 3) return out;
    std::vector<double> d(n - 1, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (values[i] && values[i + 1]) d[i] = *values[i + 1] - *values[i];

    std::vector<double> nb;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (std::isnan(d[i]) || std::abs(d[i]) <= opt.floor) continue;
        nb.clear();
        const std::size_t lo = i > opt.window ? i - opt.window : 0;
        const std::size_t hi = std::min(d.size() - 1, i + opt.window);
        for (std::size_t j = lo; j <= hi; ++j)
            if (j != i && !std::isnan(d[j])) nb.push_back(std::abs(d[j]));
        if (nb.empty()) continue;
        std::nth_element(nb.begin(), nb.begin() + static_cast<long>(nb.size() / 2), nb.end());
        double med = nb[nb.size() / 2];
        if (nb.size() % 2 == 0) {
            const double upper = med;
            med = 0.5 * (upper + *std::max_element(nb.begin(), nb.begin() + static_cast<long>(nb.size() / 2)));
        }
        if (std::abs(d[i]) <= opt.factor * med) continue;

        Transition t{0.5 * (grid[i] + grid[i + 1]), d[i], grid[i], grid[i + 1], i};
        if (!out.empty() && out.back().cell + 1 == i && (out.back().drop < 0.0) == (d[i] < 0.0)) {
            if (std::abs(d[i]) > std::abs(out.back().drop)) out.back() = t;
            continue;
        }
        out.push_back(t);
    }
    return out;
}

/// Halves the flagged cell `passes` times, keeping the half with the larger
/// |d mu_TP|; the location becomes the midpoint of the final bracket.
inline void refine_transition(Transition& tr, double v_lo, double v_hi,
                              const std::function<std::optional<double>(double)>& eval, int passes) {
    double lo = tr.cell_lo, hi = tr.cell_hi;
    for (int p = 0; p < passes; ++p) {
        const double mid = 0.5 * (lo + hi);
        const auto vm = eval(mid);
        if (!vm) break;
        if (std::abs(*vm - v_lo) >= std::abs(v_hi - *vm)) {
            hi = mid;
            v_hi = *vm;
        } else {
            lo = mid;
            v_lo = *vm;
        }
    }
    tr.location = 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Sweeps

enum class SweepAxis { Omega, Eps, Alpha };

inline std::string_view to_string(SweepAxis a) {
    switch (a) {
    case SweepAxis::Omega: return "omega";
    case SweepAxis::Eps: return "eps";
    case SweepAxis::Alpha: return "alpha";
    }
    return "";
}

inline SweepAxis parse_sweep_axis(std::string_view s) {
    if (s == "omega") return SweepAxis::Omega;
    if (s == "eps") return SweepAxis::Eps;
    if (s == "alpha") return SweepAxis::Alpha;
    throw ConfigError("unknown sweep axis '" + std::string(s) + "' (expected omega|eps|alpha)");
}

struct SweepResult {
    SweepAxis axis = SweepAxis::Omega;
    std::vector<double> grid;
    std::vector<SystemConfig> configs; ///< resolved config per point
    std::vector<std::optional<double>> mu_tp;
    std::vector<std::optional<double>> t_tp;
    std::vector<std::optional<std::size_t>> cross_ups;
    std::vector<std::optional<double>> mu_cf;
    std::vector<std::optional<double>> mu_g;
    std::vector<std::string> errors;
    std::vector<Transition> transitions;

    [[nodiscard]] std::size_t succeeded() const {
        return static_cast<std::size_t>(std::count_if(mu_tp.begin(), mu_tp.end(), [](const auto& v) { return v.has_value(); }));
    }
};

namespace detail {

inline void check_grid(const std::vector<double>& grid) {
    if (grid.empty()) throw ConfigError("sweep grid is empty");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw ConfigError("sweep grid must be strictly increasing");
}

inline SystemConfig place(const SweepSetup& setup, SweepAxis axis, double v) {
    SystemConfig cfg = setup.base;
    switch (axis) {
    case SweepAxis::Omega: cfg.omega = v; break;
    case SweepAxis::Eps: cfg.eps = v; break;
    case SweepAxis::Alpha:
        cfg.alpha = v;
        if (cfg.kind == SystemKind::NonSmoothPWL) cfg.kind = SystemKind::SmoothedNSF;
        break;
    }
    return setup.resolve(cfg);
}

} // namespace detail

/// Generic one-axis sweep; see sweep_omega / sweep_eps / sweep_alpha.
inline SweepResult sweep_axis(const SweepSetup& setup, SweepAxis axis, const std::vector<double>& grid,
                              unsigned threads = sweep_threads()) {
    detail::check_grid(grid);
    SweepResult res;
    res.axis = axis;
    res.grid = grid;
    const std::size_t n = grid.size();
    for (double v : grid) res.configs.push_back(detail::place(setup, axis, v));

    const auto samples = parallel_map<TipSample>(n, [&](std::size_t i) { return evaluate_tip(res.configs[i]); }, threads);
    for (const auto& s : samples) {
        res.mu_tp.push_back(s.mu_tp);
        res.t_tp.push_back(s.t_tp);
        res.cross_ups.push_back(s.cross_ups);
        res.errors.push_back(s.error);
    }

    res.mu_cf.assign(n, std::nullopt);
    res.mu_g.assign(n, std::nullopt);
    if (setup.with_orbits && setup.base.A > 0.0) {
        auto fold = [&](double omega) -> std::optional<double> {
            try {
                return continue_to_fold(omega, setup.base.A).mu_cf;
            } catch (const Error&) {
                return std::nullopt;
            }
        };
        if (axis == SweepAxis::Omega) {
            res.mu_cf = parallel_map<std::optional<double>>(n, [&](std::size_t i) { return fold(grid[i]); }, threads);
            for (std::size_t i = 0; i < n; ++i) res.mu_g[i] = grazing_mu(setup.base.A, grid[i]);
        } else {
            const auto cf = fold(setup.base.omega);
            res.mu_cf.assign(n, cf);
            res.mu_g.assign(n, grazing_mu(setup.base.A, setup.base.omega));
        }
    }

    if (axis != SweepAxis::Alpha) {
        res.transitions = detect_transitions(grid, res.mu_tp);
        if (setup.refine)
            for (auto& tr : res.transitions) {
                auto eval = [&](double v) { return evaluate_tip(detail::place(setup, axis, v)).mu_tp; };
                refine_transition(tr, *res.mu_tp[tr.cell], *res.mu_tp[tr.cell + 1], eval, setup.refine_passes);
            }
    }
    return res;
}

inline SweepResult sweep_omega(const SweepSetup& setup, const std::vector<double>& omega_grid) {
    return sweep_axis(setup, SweepAxis::Omega, omega_grid);
}

/// Grid of positive eps; mu_CF at the base frequency is the eps -> 0 anchor.
inline SweepResult sweep_eps(const SweepSetup& setup, const std::vector<double>& eps_grid) {
    if (!eps_grid.empty() && !(eps_grid.front() > 0.0)) throw ConfigError("eps sweep needs eps > 0");
    return sweep_axis(setup, SweepAxis::Eps, eps_grid);
}

inline SweepResult sweep_alpha(const SweepSetup& setup, const std::vector<double>& alpha_grid) {
    if (!alpha_grid.empty() && !(alpha_grid.front() > 0.0)) throw ConfigError("alpha sweep needs alpha > 0");
    return sweep_axis(setup, SweepAxis::Alpha, alpha_grid);
}

// ---------------------------------------------------------------------------
// Surface

struct Surface {
    std::vector<double> eps_grid;
    std::vector<double> omega_grid;
    std::vector<std::vector<std::optional<double>>> mu_tp;          ///< [eps][omega]
    std::vector<std::vector<std::optional<std::size_t>>> cross_ups; ///< [eps][omega]
    std::vector<std::pair<double, double>> t_curve;                 ///< (eps_T, omega_T)
    std::vector<Transition> row_transition;                         ///< one per t_curve point
    std::optional<std::pair<double, double>> terminus;
};

/// mu_TP over eps x omega; per eps row the largest omega-transition is a point
/// of the curve, and the terminus is the curve point with the largest eps.
inline Surface surface(const SweepSetup& setup, const std::vector<double>& eps_grid,
                       const std::vector<double>& omega_grid, unsigned threads = sweep_threads()) {
    detail::check_grid(eps_grid);
    detail::check_grid(omega_grid);
    Surface s;
    s.eps_grid = eps_grid;
    s.omega_grid = omega_grid;
    const std::size_t ne = eps_grid.size(), no = omega_grid.size();
    auto cell_cfg = [&](std::size_t ie, double omega) {
        SystemConfig cfg = setup.base;
        cfg.eps = eps_grid[ie];
        cfg.omega = omega;
        return setup.resolve(cfg);
    };
    const auto samples = parallel_map<TipSample>(
        ne * no, [&](std::size_t k) { return evaluate_tip(cell_cfg(k / no, omega_grid[k % no])); }, threads);

    s.mu_tp.assign(ne, {});
    s.cross_ups.assign(ne, {});
    for (std::size_t ie = 0; ie < ne; ++ie)
        for (std::size_t io = 0; io < no; ++io) {
            s.mu_tp[ie].push_back(samples[ie * no + io].mu_tp);
            s.cross_ups[ie].push_back(samples[ie * no + io].cross_ups);
        }

    for (std::size_t ie = 0; ie < ne; ++ie) {
        auto trs = detect_transitions(omega_grid, s.mu_tp[ie]);
        if (trs.empty()) continue;
        Transition best = *std::max_element(trs.begin(), trs.end(), [](const Transition& a, const Transition& b) {
            return std::abs(a.drop) < std::abs(b.drop);
        });
        if (setup.refine) {
            auto eval = [&](double omega) { return evaluate_tip(cell_cfg(ie, omega)).mu_tp; };
            refine_transition(best, *s.mu_tp[ie][best.cell], *s.mu_tp[ie][best.cell + 1], eval, setup.refine_passes);
        }
        s.t_curve.emplace_back(eps_grid[ie], best.location);
        s.row_transition.push_back(best);
    }
    if (!s.t_curve.empty()) s.terminus = s.t_curve.back();
    return s;
}

// ---------------------------------------------------------------------------
// Fold table and orbit snapshots

struct FoldRow {
    double omega = 0.0;
    std::optional<double> mu_cf;
    double mu_g = 0.0;
    std::optional<double> mu_cf_large_est;
    double mu_cf_small_est = 0.0;
    std::string error;
};

/// Frequencies of the published A = 1 fold table, descending.
inline const std::vector<double>& fold_table_omegas() {
    static const std::vector<double> rows = {20, 15, 10, 8, 5, 4, 3, 2.5, 2, 1.9, 1.8, 1.7,
                                             1.6, 1.5, 1.4, 1.2, 1, 0.8, 0.5, 0.3, 0.2, 0.1, 0};
    return rows;
}

inline FoldRow fold_row(double omega, double A) {
    FoldRow r;
    r.omega = omega;
    r.mu_g = grazing_mu(A, omega);
    r.mu_cf_small_est = mu_cf_small_omega(A, omega);
    if (omega > 0.0) r.mu_cf_large_est = mu_cf_large_omega(A, omega);
    try {
        r.mu_cf = continue_to_fold(omega, A).mu_cf;
    } catch (const Error& e) {
        r.error = e.what();
    }
    return r;
}

inline std::vector<FoldRow> fold_table(const std::vector<double>& omegas = fold_table_omegas(), double A = 1.0,
                                           unsigned threads = sweep_threads()) {
    return parallel_map<FoldRow>(omegas.size(), [&](std::size_t i) { return fold_row(omegas[i], A); }, threads);
}

struct OrbitSnapshot {
    double mu = 0.0;
    PeriodicOrbit orbit;
    std::vector<double> t;
    std::vector<double> x;
    double mean_x = 0.0;
    double positive_fraction = 0.0;
    double x_min = 0.0;
    double x_max = 0.0;
};

/// One period of the orbit at each mu, sampled on n points starting at t = 0.
inline std::vector<OrbitSnapshot> orbit_snapshots(double omega, double A, const std::vector<double>& mus,
                                                      std::size_t n = 1024) {
    if (!(omega > 0.0)) throw DomainError("orbit snapshots need omega > 0");
    std::vector<OrbitSnapshot> out;
    for (double mu : mus) {
        OrbitSnapshot s;
        s.mu = mu;
        s.orbit = orbit_at(mu, omega, A);
        const double T = s.orbit.period();
        s.t.resize(n);
        s.x.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            s.t[i] = T * static_cast<double>(i) / static_cast<double>(n);
            s.x[i] = s.orbit.value(s.t[i]);
        }
        s.mean_x = s.orbit.mean_x;
        s.positive_fraction = s.orbit.positive_fraction();
        s.x_min = *std::min_element(s.x.begin(), s.x.end());
        s.x_max = *std::max_element(s.x.begin(), s.x.end());
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace tipfold
