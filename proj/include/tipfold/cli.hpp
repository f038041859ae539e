#pragma once

// Command-line front end. run() is the whole program; tools/tipfold.cpp only
// forwards main() to it so the tests can drive it in-process.
//
// Without --out, the main table (or JSON document) goes to stdout. With
// --out PREFIX every artefact is written next to PREFIX and a
// PREFIX.manifest.json lists them.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tipfold/asym.hpp"
#include "tipfold/errors.hpp"
#include "tipfold/exactsim.hpp"
#include "tipfold/io.hpp"
#include "tipfold/model.hpp"
#include "tipfold/orbit.hpp"
#include "tipfold/smoothsim.hpp"
#include "tipfold/sweep.hpp"

#ifndef TIPFOLD_VERSION
#define TIPFOLD_VERSION "0.0.0"
#endif

namespace tipfold::cli {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failure = 1;
inline constexpr int config = 2;
inline constexpr int budget = 3;
inline constexpr int continuation = 4;
inline constexpr int sweep_degraded = 5;
} // namespace exit_code

/// Raised inside a command to leave with a specific exit code.
struct ExitRequest {
    int code;
    std::string message;
};

namespace detail {

using nlohmann::json;

// Scenario flags shared by the commands. Flags win over --config values.
struct ScenarioFlags {
    std::string config_file;
    std::string kind;
    double mu0 = 0, eps = 0, A = 0, omega = 0, phase = 0, alpha = 0, K = 0, x0 = 0, mu0_mult = 0;
    bool x0_stable = false;
    std::vector<CLI::Option*> opts; // mu0 eps A omega phase alpha K x0 kind mu0-mult
    CLI::Option* config_opt = nullptr;

    void attach(CLI::App* app) {
        config_opt = app->add_option("--config", config_file, "JSON scenario file")->check(CLI::ExistingFile);
        opts = {app->add_option("--mu0", mu0, "initial control value"),
                app->add_option("--eps", eps, "drift rate"),
                app->add_option("--A", A, "forcing amplitude"),
                app->add_option("--omega", omega, "forcing frequency"),
                app->add_option("--phase", phase, "forcing phase offset (rad)"),
                app->add_option("--alpha", alpha, "smoothing parameter"),
                app->add_option("--K", K, "tipping threshold"),
                app->add_option("--x0", x0, "initial state"),
                app->add_option("--kind", kind, "pwl | smoothed | snb"),
                app->add_option("--mu0-mult", mu0_mult, "set mu0 = m * mu_G(omega)")};
        app->add_flag("--x0-stable", x0_stable, "set x0 = -mu0/2");
        opts[9]->excludes(opts[0]);
        opts[7]->excludes("--x0-stable");
    }

    [[nodiscard]] bool given(std::size_t i) const { return opts[i]->count() > 0; }

    [[nodiscard]] std::optional<Mu0Spec> mu0_spec() const {
        if (given(9)) return Mu0Spec::times_grazing(mu0_mult);
        return std::nullopt;
    }
    [[nodiscard]] std::optional<X0Spec> x0_spec() const {
        if (x0_stable) return X0Spec::stable_branch();
        return std::nullopt;
    }

    /// File values, then explicit flags; mu0/x0 stay symbolic (see resolved()).
    [[nodiscard]] SystemConfig base() const {
        SystemConfig c = config_file.empty() ? SystemConfig{} : read_config_file(config_file);
        double* fields[] = {&c.mu0, &c.eps, &c.A, &c.omega, &c.phase, &c.alpha, &c.K, &c.x0};
        const double values[] = {mu0, eps, A, omega, phase, alpha, K, x0};
        for (std::size_t i = 0; i < 8; ++i)
            if (given(i)) *fields[i] = values[i];
        if (given(8)) c.kind = parse_system_kind(kind);
        return c;
    }

    [[nodiscard]] SystemConfig resolved() const {
        SweepSetup s;
        s.mu0 = mu0_spec();
        s.x0 = x0_spec();
        SystemConfig c = s.resolve(base());
        c.validate();
        return c;
    }
};

struct Output {
    std::string prefix; // empty: stdout
    std::string write_config;
};

class Emitter {
public:
    Emitter(std::string command, const Output& o, std::ostream& out) : command_(std::move(command)), o_(o), out_(out) {}

    /// Primary artefact: stdout without --out, PREFIX + suffix otherwise.
    void primary(const std::string& suffix, const std::string& text) {
        if (o_.prefix.empty())
            out_ << text;
        else
            file(suffix, text);
    }

    /// Secondary artefact; dropped without --out unless `to_stdout` is set.
    void secondary(const std::string& suffix, const std::string& text, bool to_stdout = false) {
        if (o_.prefix.empty()) {
            if (to_stdout) out_ << text;
        } else {
            file(suffix, text);
        }
    }

    void add_config(const SystemConfig& c) { configs_.push_back(c); }

    void finish() {
        if (!o_.write_config.empty() && !configs_.empty()) {
            std::ofstream f(o_.write_config);
            if (!f) throw ConfigError("cannot write '" + o_.write_config + "'");
            f << json(configs_.front()).dump(2) << '\n';
        }
        if (o_.prefix.empty()) return;
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        json m{{"command", command_}, {"tool_version", TIPFOLD_VERSION}, {"configs", configs_},
               {"outputs", outputs_}, {"wall_time_s", wall}};
        const std::string path = o_.prefix + ".manifest.json";
        std::ofstream f(path);
        if (!f) throw ConfigError("cannot write '" + path + "'");
        f << m.dump(2) << '\n';
        for (const auto& p : outputs_) out_ << p << '\n';
        out_ << path << '\n';
    }

private:
    void file(const std::string& suffix, const std::string& text) {
        const std::string path = o_.prefix + suffix;
        std::ofstream f(path);
        if (!f) throw ConfigError("cannot write '" + path + "'");
        f << text;
        outputs_.push_back(path);
    }

    std::string command_;
    const Output& o_;
    std::ostream& out_;
    std::vector<SystemConfig> configs_;
    std::vector<std::string> outputs_;
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline std::string opt_str(std::optional<std::size_t> v) { return v ? std::to_string(*v) : ""; }

// --- simulate ------------------------------------------------------------------

inline void cmd_simulate(const ScenarioFlags& sf, std::optional<double> t_max, std::size_t samples, Emitter& em) {
    const SystemConfig cfg = sf.resolved();
    em.add_config(cfg);
    if (!t_max && !(cfg.eps > 0.0)) throw ConfigError("simulate with eps = 0 needs --tmax");

    std::ostringstream csv;
    CsvWriter w(csv, {"t", "x", "mu", "region", "event_kind"});
    json summary{{"command", "simulate"}, {"config", cfg}};

    auto sample_grid = [&](double t_end) {
        std::vector<double> g(samples);
        for (std::size_t i = 0; i < samples; ++i)
            g[i] = samples == 1 ? 0.0 : t_end * static_cast<double>(i) / static_cast<double>(samples - 1);
        return g;
    };

    if (cfg.kind == SystemKind::NonSmoothPWL) {
        Trajectory tr;
        if (t_max) {
            tr = simulate(cfg, *t_max);
        } else {
            double budget = default_time_budget(cfg);
            for (int attempt = 0; attempt < 4 && !tr.tipped; ++attempt, budget *= 2.0) tr = simulate(cfg, budget);
            if (!tr.tipped)
                throw NoTipWithinBudget("no tipping within t = " + std::to_string(budget / 2.0) + " (" + describe(cfg) + ")");
        }
        // Samples and events merged in time order.
        const auto grid = sample_grid(tr.t_end);
        std::size_t ie = 0;
        auto event_row = [&](const Event& e) {
            w.row({csv_number(e.t), csv_number(e.x), csv_number(cfg.mu(e.t)),
                   std::string(to_string(e.kind == EventKind::CrossDown ? Region::Negative : Region::Positive)),
                   std::string(to_string(e.kind))});
        };
        for (double t : grid) {
            while (ie < tr.events.size() && tr.events[ie].t <= t) event_row(tr.events[ie++]);
            w.row({csv_number(t), csv_number(tr.value(t)), csv_number(cfg.mu(t)), std::string(to_string(tr.region_at(t))), ""});
        }
        while (ie < tr.events.size()) event_row(tr.events[ie++]);

        json events = json::array();
        for (const auto& e : tr.events) events.push_back({{"t", e.t}, {"x", e.x}, {"kind", to_string(e.kind)}});
        summary["tipped"] = tr.tipped;
        summary["t_tp"] = json_number(tr.t_tp);
        summary["mu_tp"] = json_number(tr.mu_tp);
        summary["t_end"] = tr.t_end;
        summary["events"] = events;
    } else {
        const SmoothTipResult r = t_max ? integrate_until(cfg, *t_max) : integrate_to_tip(cfg);
        const auto grid = sample_grid(r.t_end);
        const auto xs = sample_path(cfg, grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const bool tip_row = r.tipped && i + 1 == grid.size();
            const double x = tip_row ? cfg.K : xs[i];
            w.row({csv_number(grid[i]), csv_number(x), csv_number(cfg.mu(grid[i])), x >= 0.0 ? "+" : "-",
                   tip_row ? "tip" : ""});
        }
        json events = json::array();
        if (r.tipped) events.push_back({{"t", r.t_tp}, {"x", cfg.K}, {"kind", "tip"}});
        summary["tipped"] = r.tipped;
        summary["t_tp"] = json_number(r.tipped ? std::optional<double>(r.t_tp) : std::nullopt);
        summary["mu_tp"] = json_number(r.tipped ? std::optional<double>(r.mu_tp) : std::nullopt);
        summary["t_end"] = r.t_end;
        summary["events"] = events;
        if (cfg.eps > 0.0) {
            summary["regime"] = to_string(r.regime);
            summary["alpha0"] = r.alpha0;
            summary["alpha1"] = r.alpha1;
        }
    }
    // The summary is the stdout document; the trajectory needs --out.
    em.secondary(".csv", csv.str());
    em.primary(".json", summary.dump(2) + "\n");
}

// --- fold ------------------------------------------------------------------------

inline void cmd_fold(double omega, double A, bool table, Emitter& em) {
    if (!(A > 0.0)) throw ConfigError("fold needs A > 0");
    if (omega < 0.0) throw ConfigError("fold needs omega >= 0");
    const auto rows = table ? fold_table(fold_table_omegas(), A) : std::vector<FoldRow>{fold_row(omega, A)};
    std::ostringstream csv;
    CsvWriter w(csv, {"omega", "mu_cf", "mu_g", "mu_cf_large_est", "mu_cf_small_est"});
    std::string failed;
    for (const auto& r : rows) {
        w.row({csv_number(r.omega), csv_number(r.mu_cf), csv_number(r.mu_g), csv_number(r.mu_cf_large_est),
               csv_number(r.mu_cf_small_est)});
        if (!r.mu_cf) failed += "omega = " + csv_number(r.omega) + ": " + r.error + "\n";
    }
    SystemConfig c;
    c.A = A;
    c.omega = omega;
    em.add_config(c);
    em.primary(".csv", csv.str());
    if (!failed.empty()) throw ExitRequest{exit_code::continuation, "continuation failed\n" + failed};
}

// --- sweep -----------------------------------------------------------------------

inline json transitions_json(const std::vector<Transition>& trs) {
    json a = json::array();
    for (const auto& t : trs)
        a.push_back({{"location", t.location}, {"drop", t.drop}, {"cell", {t.cell_lo, t.cell_hi}}});
    return a;
}

inline void cmd_sweep(const ScenarioFlags& sf, const std::string& axis_name, const std::string& grid_spec,
                      bool no_orbits, bool no_refine, Emitter& em) {
    SweepSetup setup;
    setup.base = sf.base();
    setup.mu0 = sf.mu0_spec();
    setup.x0 = sf.x0_spec();
    setup.with_orbits = !no_orbits;
    setup.refine = !no_refine;
    const SweepAxis axis = parse_sweep_axis(axis_name);
    const auto grid = parse_grid(grid_spec);
    ::tipfold::detail::place(setup, axis, grid.front()).validate();
    const SweepResult r = sweep_axis(setup, axis, grid);
    for (const auto& c : r.configs) em.add_config(c);

    std::ostringstream csv;
    CsvWriter w(csv, {std::string(to_string(axis)), "mu_tp", "t_tp", "cross_ups", "mu_cf", "mu_g", "mu_eps",
                      "mu_tp_large_omega", "mu_cf_large_est", "mu_cf_small_est", "snb_mu_tp", "error"});
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const EstimateSet e = estimates(r.configs[i]);
        std::string err = r.errors[i];
        for (auto& ch : err)
            if (ch == ',' || ch == '\n') ch = ';';
        w.row({csv_number(grid[i]), csv_number(r.mu_tp[i]), csv_number(r.t_tp[i]), opt_str(r.cross_ups[i]),
               csv_number(r.mu_cf[i]), csv_number(r.mu_g[i]), csv_number(e.mu_eps), csv_number(e.mu_tp_large_omega),
               csv_number(e.mu_cf_large), csv_number(e.mu_cf_small), csv_number(e.snb_mu_tp), err});
    }
    json side{{"axis", to_string(axis)}, {"points", grid.size()}, {"succeeded", r.succeeded()},
              {"transitions", transitions_json(r.transitions)}};
    em.primary(".csv", csv.str());
    em.secondary(".transitions.json", side.dump(2) + "\n");
    if (10 * r.succeeded() < 9 * grid.size())
        throw ExitRequest{exit_code::sweep_degraded, "only " + std::to_string(r.succeeded()) + " of " +
                                                         std::to_string(grid.size()) + " sweep points succeeded"};
}

// --- surface ---------------------------------------------------------------------

inline void cmd_surface(const ScenarioFlags& sf, const std::string& eps_spec, const std::string& omega_spec,
                        bool no_refine, Emitter& em) {
    SweepSetup setup;
    setup.base = sf.base();
    setup.mu0 = sf.mu0_spec();
    setup.x0 = sf.x0_spec();
    setup.refine = !no_refine;
    const auto eg = parse_grid(eps_spec);
    const auto og = parse_grid(omega_spec);
    {
        SystemConfig probe = setup.base;
        probe.eps = eg.front();
        probe.omega = og.front();
        setup.resolve(probe).validate();
    }
    const Surface s = surface(setup, eg, og);
    em.add_config(setup.base);

    std::ostringstream csv;
    CsvWriter w(csv, {"eps", "omega", "mu_tp", "cross_ups"});
    std::size_t ok = 0;
    for (std::size_t ie = 0; ie < eg.size(); ++ie)
        for (std::size_t io = 0; io < og.size(); ++io) {
            ok += s.mu_tp[ie][io].has_value();
            w.row({csv_number(eg[ie]), csv_number(og[io]), csv_number(s.mu_tp[ie][io]), opt_str(s.cross_ups[ie][io])});
        }
    json curve = json::array();
    for (const auto& [e, o] : s.t_curve) curve.push_back({e, o});
    json side{{"t_curve", curve},
              {"terminus", s.terminus ? json{s.terminus->first, s.terminus->second} : json(nullptr)}};
    em.primary(".csv", csv.str());
    em.secondary(".curve.json", side.dump(2) + "\n");
    const std::size_t total = eg.size() * og.size();
    if (10 * ok < 9 * total)
        throw ExitRequest{exit_code::sweep_degraded,
                          "only " + std::to_string(ok) + " of " + std::to_string(total) + " surface cells succeeded"};
}

// --- phase / estimate ----------------------------------------------------------

inline void cmd_phase(const ScenarioFlags& sf, Emitter& em) {
    const SystemConfig cfg = sf.resolved();
    em.add_config(cfg);
    std::function<double(double)> mu0_fn = [mu0 = cfg.mu0](double) { return mu0; };
    if (const auto m = sf.mu0_spec()) mu0_fn = [m = *m, A = cfg.A](double w) { return m.at(A, w); };
    const PhaseAnalysis pa = phase_roots(cfg, mu0_fn);
    const int nm = n_max(cfg.omega, cfg.eps, cfg.A, mu0_fn, cfg.K); // DomainError -> exit 2

    json roots = json::array();
    for (const auto& r : pa.roots)
        roots.push_back({{"mu_r", r.mu_r}, {"derivative_sign", r.derivative_sign}, {"slope", json_number(r.slope)}});
    json doc{{"command", "phase"},
             {"config", cfg},
             {"Omega", pa.Omega},
             {"roots", roots},
             {"omega_star", json_number(pa.omega_star)},
             {"n_max", nm},
             {"bounds", {pa.lower, pa.upper}},
             {"jump_scale", pa.jump_scale}};
    em.primary(".json", doc.dump(2) + "\n");
}

inline void cmd_estimate(const ScenarioFlags& sf, Emitter& em) {
    const SystemConfig cfg = sf.resolved();
    em.add_config(cfg);
    const EstimateSet e = estimates(cfg);
    json doc{{"command", "estimate"},
             {"config", cfg},
             {"mu_eps", e.mu_eps},
             {"mu_g", e.mu_g},
             {"mu_cf_large", json_number(e.mu_cf_large)},
             {"mu_cf_small", e.mu_cf_small},
             {"mu_tp_large_omega", json_number(e.mu_tp_large_omega)},
             {"snb_mu_tp", json_number(e.snb_mu_tp)},
             {"constants", {{"c0", e.c0}, {"L", e.L}, {"M", e.M}}},
             {"drift_dominates", drift_dominates(cfg.eps, cfg.mu0, cfg.A, cfg.omega)}};
    if (cfg.eps > 0.0) {
        doc["alpha0"] = alpha0(cfg.eps, cfg.K);
        doc["alpha1"] = alpha1(cfg.eps, cfg.K);
    }
    em.primary(".json", doc.dump(2) + "\n");
}

// --- orbit -----------------------------------------------------------------------

inline void cmd_orbit(double omega, double A, std::vector<double> mus, std::size_t samples, Emitter& em) {
    if (!(A > 0.0) || !(omega > 0.0)) throw ConfigError("orbit needs A > 0 and omega > 0");
    if (mus.empty()) {
        const ContinuationBranch br = continue_to_fold(omega, A);
        mus = {grazing_mu(A, omega), br.mu_last};
    }
    const auto snaps = orbit_snapshots(omega, A, mus, samples);
    std::ostringstream csv;
    CsvWriter w(csv, {"mu", "t", "x"});
    json meta = json::array();
    for (const auto& s : snaps) {
        for (std::size_t i = 0; i < s.t.size(); ++i) w.row({csv_number(s.mu), csv_number(s.t[i]), csv_number(s.x[i])});
        meta.push_back({{"mu", s.mu}, {"a", s.orbit.a}, {"b", s.orbit.b}, {"c_plus", s.orbit.c_plus},
                        {"c_minus", s.orbit.c_minus}, {"mean_x", s.mean_x}, {"positive_fraction", s.positive_fraction},
                        {"x_min", s.x_min}, {"x_max", s.x_max}, {"residual", s.orbit.residual}});
    }
    SystemConfig c;
    c.A = A;
    c.omega = omega;
    em.add_config(c);
    em.primary(".csv", csv.str());
    em.secondary(".json", json{{"omega", omega}, {"A", A}, {"orbits", meta}}.dump(2) + "\n");
}

} // namespace detail

/// Entry point. Returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    using namespace detail;
    CLI::App app{"Tipping, grazing and cyclic folds of dx/dt = 2|x| - mu(t) + A cos(omega t)", "tipfold"};
    app.set_version_flag("--version", TIPFOLD_VERSION);
    app.require_subcommand(1);

    Output output;
    auto add_output = [&](CLI::App* sub) {
        sub->add_option("--out", output.prefix, "write artefacts to PREFIX.* plus PREFIX.manifest.json");
        sub->add_option("--write-config", output.write_config, "write the resolved config as JSON");
    };

    ScenarioFlags sim_flags, sweep_flags, surf_flags, phase_flags, est_flags;

    auto* sim = app.add_subcommand("simulate", "simulate one scenario up to tipping or --tmax");
    sim_flags.attach(sim);
    double t_max = 0.0;
    std::size_t samples = 2001;
    auto* tmax_opt = sim->add_option("--tmax", t_max, "stop time (default: extend until tipping)");
    sim->add_option("--samples", samples, "trajectory samples in the CSV")->check(CLI::PositiveNumber);
    add_output(sim);

    auto* fold = app.add_subcommand("fold", "cyclic fold by continuation from the grazing orbit");
    double f_omega = 1.0, f_A = 1.0;
    bool f_table = false;
    fold->add_option("--omega", f_omega, "forcing frequency");
    fold->add_option("--A", f_A, "forcing amplitude");
    fold->add_flag("--table", f_table, "all rows of the A = 1 reference table");
    add_output(fold);

    auto* sweep = app.add_subcommand("sweep", "tipping value along one parameter axis");
    sweep_flags.attach(sweep);
    std::string axis = "omega", grid;
    bool no_orbits = false, no_refine = false;
    sweep->add_option("--axis", axis, "omega | eps | alpha")->check(CLI::IsMember({"omega", "eps", "alpha"}));
    sweep->add_option("--grid", grid, "start:stop:count or logstart:logstop:countL")->required();
    sweep->add_flag("--no-orbits", no_orbits, "skip the mu_CF / mu_G columns");
    sweep->add_flag("--no-refine", no_refine, "skip transition refinement");
    add_output(sweep);

    auto* surf = app.add_subcommand("surface", "tipping value over an (eps, omega) grid");
    surf_flags.attach(surf);
    std::string eps_grid, omega_grid;
    bool surf_no_refine = false;
    surf->add_option("--eps-grid", eps_grid, "eps grid spec")->required();
    surf->add_option("--omega-grid", omega_grid, "omega grid spec")->required();
    surf->add_flag("--no-refine", surf_no_refine, "skip transition refinement");
    add_output(surf);

    auto* phase = app.add_subcommand("phase", "roots of the non-smooth-fold phase condition");
    phase_flags.attach(phase);
    add_output(phase);

    auto* est = app.add_subcommand("estimate", "closed-form asymptotic estimates");
    est_flags.attach(est);
    add_output(est);

    auto* orb = app.add_subcommand("orbit", "sampled periodic orbits between the fold and grazing");
    double o_omega = 5.0, o_A = 1.0;
    std::vector<double> o_mus;
    std::size_t o_samples = 1024;
    orb->add_option("--omega", o_omega, "forcing frequency");
    orb->add_option("--A", o_A, "forcing amplitude");
    orb->add_option("--mu", o_mus, "mu values (default: grazing and fold)");
    orb->add_option("--samples", o_samples, "points per period")->check(CLI::PositiveNumber);
    add_output(orb);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_code::ok : exit_code::config;
    }

    CLI::App* chosen = app.get_subcommands().front();
    Emitter em(chosen->get_name(), output, out);
    try {
        if (chosen == sim)
            cmd_simulate(sim_flags, tmax_opt->count() ? std::optional<double>(t_max) : std::nullopt, samples, em);
        else if (chosen == fold)
            cmd_fold(f_omega, f_A, f_table, em);
        else if (chosen == sweep)
            cmd_sweep(sweep_flags, axis, grid, no_orbits, no_refine, em);
        else if (chosen == surf)
            cmd_surface(surf_flags, eps_grid, omega_grid, surf_no_refine, em);
        else if (chosen == phase)
            cmd_phase(phase_flags, em);
        else if (chosen == est)
            cmd_estimate(est_flags, em);
        else if (chosen == orb)
            cmd_orbit(o_omega, o_A, o_mus, o_samples, em);
        em.finish();
        return exit_code::ok;
    } catch (const ExitRequest& r) {
        em.finish();
        err << "tipfold: " << r.message << '\n';
        return r.code;
    } catch (const ConfigError& e) {
        err << "tipfold: " << e.what() << '\n';
        return exit_code::config;
    } catch (const DomainError& e) {
        err << "tipfold: " << e.what() << '\n';
        return exit_code::config;
    } catch (const NoTipWithinBudget& e) {
        err << "tipfold: " << e.what() << '\n';
        return exit_code::budget;
    } catch (const MaxEventsExceeded& e) {
        err << "tipfold: " << e.what() << '\n';
        return exit_code::budget;
    } catch (const ContinuationDiverged& e) {
        err << "tipfold: " << e.what() << '\n';
        return exit_code::continuation;
    } catch (const NewtonDiverged& e) {
        err << "tipfold: " << e.what() << '\n';
        return exit_code::continuation;
    } catch (const std::exception& e) {
        err << "tipfold: " << e.what() << '\n';
        return exit_code::failure;
    }
}

} // namespace tipfold::cli
