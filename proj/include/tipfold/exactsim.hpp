#pragma once

// Event-driven exact simulation of dx/dt = 2|x| - mu(t) + f(t).
//
// The trajectory is a chain of closed-form SegmentSolutions. Inside a segment the
// formula is exact, so the only numerical work is locating the crossings of
// x = 0 and x = K: the segment is scanned on a sampling interval short compared
// with the forcing period, each interval is split at an interior extremum of x
// (so that grazing excursions are never stepped over), and sign changes are
// bisected down to the time tolerance.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "tipfold/errors.hpp"
#include "tipfold/model.hpp"
#include "tipfold/roots.hpp"

namespace tipfold {

enum class EventKind { CrossUp, CrossDown, Tip };

inline std::string_view to_string(EventKind k) {
    switch (k) {
    case EventKind::CrossUp: return "cross_up";
    case EventKind::CrossDown: return "cross_down";
    case EventKind::Tip: return "tip";
    }
    return "";
}

struct Event {
    double t = 0.0;
    double x = 0.0; ///< 0 at crossings, K at tipping
    EventKind kind = EventKind::CrossUp;
};

struct TimedSegment {
    SegmentSolution solution;
    double t_begin = 0.0;
    double t_end = 0.0;
};

struct Trajectory {
    SystemConfig config;
    std::vector<TimedSegment> segments;
    std::vector<Event> events;
    bool tipped = false;
    std::optional<double> t_tp;
    std::optional<double> mu_tp;
    double t_end = 0.0;

    /// x(t) for t in [0, t_end].
    [[nodiscard]] double value(double t) const {
        auto it = std::lower_bound(segments.begin(), segments.end(), t,
                                   [](const TimedSegment& s, double v) { return s.t_end < v; });
        if (it == segments.end()) --it;
        return it->solution.value(t);
    }

    [[nodiscard]] Region region_at(double t) const {
        auto it = std::lower_bound(segments.begin(), segments.end(), t,
                                   [](const TimedSegment& s, double v) { return s.t_end < v; });
        if (it == segments.end()) --it;
        return it->solution.region;
    }

    [[nodiscard]] std::size_t count(EventKind kind) const {
        return static_cast<std::size_t>(
            std::count_if(events.begin(), events.end(), [kind](const Event& e) { return e.kind == kind; }));
    }
};

struct SimulationOptions {
    std::size_t max_events = 10000;
    double time_tol = 1e-12;     ///< bisection tolerance on event times
    double graze_probe = 1e-8;   ///< look-ahead used to classify tangential crossings
    double max_sample = 0.1;     ///< upper bound on the scan interval
};

/// (mu0 + 20) / max(eps, 1e-6): time for mu to fall 20 units below mu0.
inline double default_time_budget(const SystemConfig& cfg) {
    return (std::max(cfg.mu0, 0.0) + 20.0) / std::max(cfg.eps, 1e-6);
}

namespace detail {

struct FoundEvent {
    double t;
    EventKind kind;
};

inline double scan_interval(const SystemConfig& cfg, const SimulationOptions& opt) {
    double h = opt.max_sample;
    if (cfg.omega > 0.0) h = std::min(h, std::numbers::pi / (4.0 * cfg.omega));
    return h;
}

// First crossing of x = 0 (leaving the segment's region) or of x = K upwards,
// on (ta, tb]. The segment is assumed to be inside its region at ta.
inline std::optional<FoundEvent> find_event(const SegmentSolution& seg, double ta, double tb, double K,
                                            double tol) {
    const double s = seg.region == Region::Positive ? 1.0 : -1.0;
    auto inside = [&](double t) { return s * seg.value(t) >= 0.0; };

    double pieces[3] = {ta, tb, tb};
    int n_pieces = 1;
    const double da = seg.derivative(ta);
    const double db = seg.derivative(tb);
    if ((da > 0.0 && db < 0.0) || (da < 0.0 && db > 0.0)) {
        const bool rising_at_a = da > 0.0;
        auto [lo, hi] = roots::bisect_predicate([&](double t) { return (seg.derivative(t) > 0.0) == rising_at_a; },
                                                ta, tb, tol);
        pieces[1] = 0.5 * (lo + hi);
        pieces[2] = tb;
        n_pieces = 2;
    }

    for (int i = 0; i < n_pieces; ++i) {
        const double p = pieces[i];
        const double q = pieces[i + 1];
        if (q <= p) continue;
        if (!inside(q)) {
            auto [lo, hi] = roots::bisect_predicate(inside, p, q, tol);
            return FoundEvent{0.5 * (lo + hi), s > 0 ? EventKind::CrossDown : EventKind::CrossUp};
        }
        if (seg.region == Region::Positive && seg.value(q) >= K && seg.value(p) < K) {
            auto [lo, hi] = roots::bisect_predicate([&](double t) { return seg.value(t) < K; }, p, q, tol);
            const double t_tip = 0.5 * (lo + hi);
            if (seg.derivative(t_tip) > 0.0) return FoundEvent{t_tip, EventKind::Tip};
        }
    }
    return std::nullopt;
}

} // namespace detail

/// Simulates up to min(t_tp, t_max). Throws MaxEventsExceeded when the number of
/// events exceeds opt.max_events.
inline Trajectory simulate(const SystemConfig& cfg, double t_max, const SimulationOptions& opt = {}) {
    cfg.validate();
    if (cfg.kind != SystemKind::NonSmoothPWL) throw ConfigError("simulate requires kind = pwl");
    if (!(t_max > 0.0)) throw ConfigError("simulate requires t_max > 0");

    const Drive drive = Drive::from(cfg);
    const double h = detail::scan_interval(cfg, opt);

    Region region;
    if (cfg.x0 < 0.0)
        region = Region::Negative;
    else if (cfg.x0 > 0.0)
        region = Region::Positive;
    else
        region = (-cfg.mu0 + cfg.forcing(0.0)) > 0.0 ? Region::Positive : Region::Negative;

    Trajectory traj;
    traj.config = cfg;
    SegmentSolution seg = SegmentSolution::through(drive, region, 0.0, cfg.x0);
    double seg_begin = 0.0;
    double t = 0.0;

    auto close_segment = [&](double t_close) { traj.segments.push_back({seg, seg_begin, t_close}); };

    while (t < t_max) {
        const double tb = std::min(t + h, t_max);
        const auto found = detail::find_event(seg, t, tb, cfg.K, opt.time_tol);
        if (!found) {
            t = tb;
            continue;
        }
        const double te = found->t;
        if (found->kind == EventKind::Tip) {
            traj.events.push_back({te, cfg.K, EventKind::Tip});
            close_segment(te);
            traj.tipped = true;
            traj.t_tp = te;
            traj.mu_tp = cfg.mu0 - cfg.eps * te;
            traj.t_end = te;
            return traj;
        }

        const Region next = seg.region == Region::Positive ? Region::Negative : Region::Positive;
        const SegmentSolution candidate = SegmentSolution::through(drive, next, te, 0.0);
        const double s_next = next == Region::Positive ? 1.0 : -1.0;
        if (s_next * candidate.value(te + opt.graze_probe) > 0.0) {
            traj.events.push_back({te, 0.0, found->kind});
            if (traj.events.size() > opt.max_events)
                throw MaxEventsExceeded("event cap of " + std::to_string(opt.max_events) +
                                        " exceeded at t = " + std::to_string(te) + " (" + describe(cfg) + ")");
            close_segment(te);
            seg = candidate;
            seg_begin = te;
        } else {
            // Tangential touch: the trajectory returns to the side it came from.
            seg = SegmentSolution::through(drive, seg.region, te, 0.0);
        }
        t = te;
    }

    close_segment(t_max);
    traj.t_end = t_max;
    return traj;
}

struct TipPoint {
    double t_tp = 0.0;
    double mu_tp = 0.0;
};

/// First tipping event; the time budget starts at default_time_budget and is
/// doubled up to three times before giving up with NoTipWithinBudget.
inline TipPoint tipping_point(const SystemConfig& cfg, const SimulationOptions& opt = {}) {
    if (!(cfg.eps > 0.0)) throw ConfigError("tipping_point requires eps > 0");
    double budget = default_time_budget(cfg);
    for (int attempt = 0; attempt < 4; ++attempt, budget *= 2.0) {
        const Trajectory traj = simulate(cfg, budget, opt);
        if (traj.tipped) return {*traj.t_tp, *traj.mu_tp};
    }
    throw NoTipWithinBudget("no tipping within t = " + std::to_string(budget / 2.0) + " (" + describe(cfg) + ")");
}

/// C+ of the positive segment entered at a CrossUp time t_cross; equals -x_P(t_cross).
inline double exit_coefficient(const SystemConfig& cfg, double t_cross) {
    return SegmentSolution::through(Drive::from(cfg), Region::Positive, t_cross, 0.0).C;
}

} // namespace tipfold
