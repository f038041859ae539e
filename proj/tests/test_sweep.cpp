#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fold_table.hpp"
#include "tipfold/io.hpp"
#include "tipfold/sweep.hpp"

using namespace tipfold;

namespace {

std::vector<double> lin(double a, double b, int n) {
    std::vector<double> g;
    for (int i = 0; i < n; ++i) g.push_back(a + (b - a) * i / (n - 1));
    return g;
}

SweepSetup reference_setup() {
    SweepSetup s;
    s.base.x0 = -0.5;
    return s;
}

SweepSetup grazing_setup(double m, double eps) {
    SweepSetup s;
    s.base.eps = eps;
    s.mu0 = Mu0Spec::times_grazing(m);
    s.x0 = X0Spec::stable_branch();
    return s;
}

} // namespace

TEST(Sweep, ReferenceTransition) {
    const SweepResult r = sweep_omega(reference_setup(), lin(0.02, 3, 150));
    EXPECT_EQ(r.succeeded(), r.grid.size());
    ASSERT_FALSE(r.transitions.empty());
    const auto& t = r.transitions.front();
    EXPECT_GE(t.location, 0.30);
    EXPECT_LE(t.location, 0.35);
    EXPECT_LT(t.drop, -0.5);
    EXPECT_GE(t.location, t.cell_lo);
    EXPECT_LE(t.location, t.cell_hi);
}

TEST(Sweep, ZeroFrequencyIsShiftedSlowDrift) {
    SweepSetup s = reference_setup();
    s.with_orbits = false;
    const SweepResult r = sweep_omega(s, {0.0, 0.01});
    SystemConfig flat = s.base;
    flat.A = 0;
    flat.mu0 = s.base.mu0 - s.base.A;
    flat.omega = 0;
    ASSERT_TRUE(r.mu_tp[0]);
    EXPECT_NEAR(*r.mu_tp[0], s.base.A + tipping_point(flat).mu_tp, 1e-9);
}

TEST(Sweep, LargeOmegaTail) {
    for (double eps : {0.01, 0.025}) {
        SweepSetup s = reference_setup();
        s.base.eps = eps;
        s.with_orbits = false;
        const SweepResult r = sweep_omega(s, lin(5, 20, 16));
        const double band = eps == 0.01 ? 0.02 : 0.04;
        for (std::size_t i = 0; i < r.grid.size(); ++i) {
            ASSERT_TRUE(r.mu_tp[i]);
            EXPECT_LT(std::abs(*r.mu_tp[i] - mu_tp_large_omega(1, r.grid[i], eps)), band) << eps << ' ' << r.grid[i];
        }
    }
    // the gap to the estimate shrinks with the drift rate
    double prev = INFINITY;
    for (double eps : {0.04, 0.025, 0.01, 0.005}) {
        SystemConfig c;
        c.eps = eps;
        c.omega = 12;
        const double gap = std::abs(tipping_point(c).mu_tp - mu_tp_large_omega(1, 12, eps));
        EXPECT_LT(gap, prev) << eps;
        prev = gap;
    }
}

TEST(Sweep, EpsApproachesFoldAtOmega5) {
    SweepSetup s = reference_setup();
    s.base.omega = 5;
    const SweepResult r = sweep_eps(s, {0.005, 0.01, 0.02, 0.04});
    ASSERT_TRUE(r.mu_cf[0]);
    const double cf = *r.mu_cf[0];
    EXPECT_NEAR(cf, 0.24768, 5e-5);
    double prev_gap = 0;
    for (std::size_t i = 0; i < r.grid.size(); ++i) {
        ASSERT_TRUE(r.mu_tp[i]);
        EXPECT_LT(*r.mu_tp[i], cf);
        EXPECT_GT(cf - *r.mu_tp[i], prev_gap);
        prev_gap = cf - *r.mu_tp[i];
    }
}

TEST(Sweep, EpsTransitionAtOmegaHalf) {
    SweepSetup s = grazing_setup(1, 0.1);
    s.base.omega = 0.5;
    const SweepResult r = sweep_eps(s, lin(0.01, 0.5, 50));
    bool found = false;
    for (const auto& t : r.transitions) found |= t.location >= 0.15 && t.location <= 0.25;
    EXPECT_TRUE(found);
}

TEST(Sweep, NoTransitionsWhereDriftDominates) {
    SweepSetup s = reference_setup();
    const auto grid = lin(4, 8, 41);
    for (double e : grid) EXPECT_TRUE(drift_dominates(e, s.base.mu0, s.base.A, s.base.omega));
    EXPECT_TRUE(sweep_eps(s, grid).transitions.empty());
}

TEST(Sweep, TippingBelowFold) {
    for (double m : {1.0, 2.0}) {
        const SweepResult r = sweep_omega(grazing_setup(m, 0.1), lin(0.05, 3, 60));
        for (std::size_t i = 0; i < r.grid.size(); ++i)
            if (r.mu_tp[i] && r.mu_cf[i]) EXPECT_LE(*r.mu_tp[i], *r.mu_cf[i] + 1e-6) << m << ' ' << r.grid[i];
    }
}

TEST(Sweep, MoreTransitionsForLargerStart) {
    std::size_t prev = 0;
    for (double m : {1.0, 1.5, 2.0}) {
        SweepSetup s = grazing_setup(m, 0.1);
        s.with_orbits = false;
        const std::size_t n = sweep_omega(s, lin(0.02, 3, 150)).transitions.size();
        EXPECT_GE(n, prev) << m;
        EXPECT_GE(n, 1u);
        prev = n;
    }
}

TEST(Sweep, DropScaleInMidRange) {
    int checked = 0;
    for (double m : {1.0, 1.5, 2.0}) {
        SweepSetup s = grazing_setup(m, 0.1);
        s.with_orbits = false;
        for (const auto& t : sweep_omega(s, lin(0.02, 3, 150)).transitions) {
            if (t.location < 0.2 || t.location > 1.5) continue;
            const double scale = 2 * std::numbers::pi * 0.1 / t.location;
            EXPECT_GT(std::abs(t.drop), scale / 3) << m << ' ' << t.location;
            EXPECT_LT(std::abs(t.drop), scale * 3) << m << ' ' << t.location;
            ++checked;
        }
    }
    EXPECT_GT(checked, 0);
}

TEST(Sweep, ThreadCountDoesNotChangeResults) {
    SweepSetup s = grazing_setup(1.5, 0.1);
    const auto grid = lin(0.1, 2, 40);
    const SweepResult a = sweep_axis(s, SweepAxis::Omega, grid, 1);
    const SweepResult b = sweep_axis(s, SweepAxis::Omega, grid, 4);
    EXPECT_EQ(a.mu_tp, b.mu_tp);
    EXPECT_EQ(a.mu_cf, b.mu_cf);
    ASSERT_EQ(a.transitions.size(), b.transitions.size());
    for (std::size_t i = 0; i < a.transitions.size(); ++i) EXPECT_EQ(a.transitions[i].location, b.transitions[i].location);
}

TEST(Sweep, ErrorsRecordedPerPoint) {
    SweepSetup s = reference_setup();
    s.with_orbits = false;
    const SweepResult r = sweep_eps(s, {0.1, 0.2});
    EXPECT_EQ(r.succeeded(), 2u);
    SweepSetup bad = s;
    bad.base.K = -1;
    const SweepResult q = sweep_eps(bad, {0.1, 0.2});
    EXPECT_EQ(q.succeeded(), 0u);
    EXPECT_FALSE(q.errors[0].empty());
    EXPECT_THROW(sweep_omega(s, {1.0, 0.5}), ConfigError);
    EXPECT_THROW(sweep_omega(s, {}), ConfigError);
    EXPECT_THROW(sweep_eps(s, {0.0, 0.1}), ConfigError);
}

TEST(Sweep, AlphaAxisUsesSmoothedSystem) {
    SweepSetup s = reference_setup();
    s.with_orbits = false;
    s.base.x0 = 0;
    s.base.A = 0;
    const SweepResult r = sweep_alpha(s, {0.01, 1, 100});
    EXPECT_EQ(r.configs[0].kind, SystemKind::SmoothedNSF);
    EXPECT_LT(*r.t_tp[0], *r.t_tp[1]);
    EXPECT_LT(*r.t_tp[1], *r.t_tp[2]);
}

TEST(Surface, TransitionsCarryOneExtraOscillation) {
    SweepSetup s = grazing_setup(1, 0.1);
    const Surface sf = surface(s, lin(0.02, 0.5, 25), lin(0.05, 3, 60));
    ASSERT_EQ(sf.mu_tp.size(), 25u);
    ASSERT_EQ(sf.mu_tp[0].size(), 60u);
    ASSERT_GE(sf.t_curve.size(), 10u);
    ASSERT_TRUE(sf.terminus);
    EXPECT_EQ(*sf.terminus, sf.t_curve.back());
    int extra = 0;
    for (std::size_t k = 0; k < sf.t_curve.size(); ++k) {
        const auto& tr = sf.row_transition[k];
        const auto ie = static_cast<std::size_t>(std::find(sf.eps_grid.begin(), sf.eps_grid.end(), sf.t_curve[k].first) -
                                                 sf.eps_grid.begin());
        const auto& cu = sf.cross_ups[ie];
        EXPECT_GE(tr.location, tr.cell_lo);
        EXPECT_LE(tr.location, tr.cell_hi);
        if (cu[tr.cell] && cu[tr.cell + 1] && *cu[tr.cell + 1] == *cu[tr.cell] + 1) ++extra;
    }
    EXPECT_GE(extra, static_cast<int>(0.8 * static_cast<double>(sf.t_curve.size())));
}

TEST(Surface, NoTransitionsInDriftDominatedRows) {
    SweepSetup s = grazing_setup(1, 0.1);
    const auto omegas = lin(0.05, 3, 30);
    const Surface sf = surface(s, {4.5, 5.0, 6.0}, omegas);
    EXPECT_TRUE(sf.t_curve.empty());
    EXPECT_FALSE(sf.terminus);
}

TEST(FoldTable, SampleRows) {
    const FoldRow r4 = fold_row(4, 1);
    ASSERT_TRUE(r4.mu_cf);
    EXPECT_NEAR(*r4.mu_cf, 0.3037, 0.002);
    EXPECT_NEAR(r4.mu_g, 0.4472, 5e-5);
    const FoldRow r0 = fold_row(0, 1);
    EXPECT_EQ(*r0.mu_cf, 1.0);
    EXPECT_EQ(r0.mu_g, 1.0);
    EXPECT_FALSE(r0.mu_cf_large_est);
    const FoldRow r2 = fold_row(2, 1);
    EXPECT_NEAR(*r2.mu_cf, 0.545, 0.002);
    EXPECT_NEAR(r2.mu_g, 0.7071, 5e-5);
}

TEST(FoldTable, GrazingColumn) {
    const auto& om = fold_table_omegas();
    ASSERT_EQ(om.size(), std::size(kFoldTable));
    for (std::size_t i = 0; i < om.size(); ++i) {
        EXPECT_EQ(om[i], kFoldTable[i].omega);
        EXPECT_NEAR(grazing_mu(1, om[i]), kFoldTable[i].mu_g, 5e-5);
    }
}

TEST(Snapshots, GrazingOrbitTouchesZero) {
    const double g = grazing_mu(1, 5);
    const auto s = orbit_snapshots(5, 1, {g}).front();
    EXPECT_EQ(s.x.size(), 1024u);
    EXPECT_GE(s.x_min, -2 * g);
    EXPECT_NEAR(s.x_max, 0.0, 1e-4);
    EXPECT_LE(s.x_max, 1e-9);
}

TEST(Snapshots, FoldOrbitIsNearlySymmetric) {
    const double cf = continue_to_fold(5, 1).mu_cf;
    const auto s = orbit_snapshots(5, 1, {cf + 1e-6}).front();
    EXPECT_LT(std::abs(s.mean_x), 0.02);
    EXPECT_THROW(orbit_snapshots(5, 1, {0.2471}), NewtonDiverged);
}

TEST(Snapshots, SlowForcingSpendsLittleTimePositive) {
    const auto s = orbit_snapshots(0.2, 1, {0.9902, 0.9905});
    EXPECT_LT(s[0].positive_fraction, 0.125);
    EXPECT_LT(s[1].positive_fraction, 0.10);
    EXPECT_GT(s[0].positive_fraction, s[1].positive_fraction);
}

TEST(Detector, SyntheticStep) {
    std::vector<double> grid;
    std::vector<std::optional<double>> v;
    for (int i = 0; i < 40; ++i) {
        grid.push_back(i);
        v.push_back(1.0 - 0.01 * i - (i >= 17 ? 0.5 : 0.0));
    }
    auto tr = detect_transitions(grid, v);
    ASSERT_EQ(tr.size(), 1u);
    EXPECT_EQ(tr[0].cell, 16u);
    EXPECT_NEAR(tr[0].drop, -0.51, 1e-12);
    EXPECT_EQ(tr[0].location, 16.5);

    // a missing point hides the cells touching it
    v[17] = std::nullopt;
    EXPECT_TRUE(detect_transitions(grid, v).empty());
}

TEST(Detector, TwoStepRampCollapses) {
    std::vector<double> grid;
    std::vector<std::optional<double>> v;
    for (int i = 0; i < 40; ++i) {
        grid.push_back(i);
        double y = -0.01 * i;
        if (i >= 20) y -= 0.3;
        if (i >= 21) y -= 0.4;
        v.push_back(y);
    }
    auto tr = detect_transitions(grid, v);
    ASSERT_EQ(tr.size(), 1u);
    EXPECT_EQ(tr[0].cell, 20u);
}

TEST(Detector, FloorSuppressesNoise) {
    std::vector<double> grid;
    std::vector<std::optional<double>> v;
    for (int i = 0; i < 30; ++i) {
        grid.push_back(i);
        v.push_back(i == 15 ? 5e-4 : 0.0);
    }
    EXPECT_TRUE(detect_transitions(grid, v).empty());
}

TEST(Detector, RefinementHalvesTowardStep) {
    Transition t{0.5, -1, 0, 1, 0};
    auto eval = [](double x) -> std::optional<double> { return x < 0.3 ? 1.0 : 0.0; };
    refine_transition(t, 1.0, 0.0, eval, 3);
    EXPECT_EQ(t.location, 0.3125);
}

TEST(Parallel, OrderPreservedAndEnvHonoured) {
    const auto out = parallel_map<int>(100, [](std::size_t i) { return static_cast<int>(i * i); }, 4);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(out[i], i * i);
    ::setenv("TIPFOLD_THREADS", "3", 1);
    EXPECT_EQ(sweep_threads(), 3u);
    ::setenv("TIPFOLD_THREADS", "zero", 1);
    EXPECT_GE(sweep_threads(), 1u);
    ::unsetenv("TIPFOLD_THREADS");
}

TEST(Grid, Parse) {
    EXPECT_EQ(parse_grid("0:1:3"), (std::vector<double>{0, 0.5, 1}));
    const auto lg = parse_grid("-1:1:3L");
    EXPECT_NEAR(lg[0], 0.1, 1e-15);
    EXPECT_NEAR(lg[1], 1.0, 1e-15);
    EXPECT_NEAR(lg[2], 10.0, 1e-13);
    EXPECT_EQ(parse_grid("2:2:1"), (std::vector<double>{2}));
    EXPECT_THROW(parse_grid("0:1"), ConfigError);
    EXPECT_THROW(parse_grid("0:1:0"), ConfigError);
    EXPECT_THROW(parse_grid("1:0:5"), ConfigError);
    EXPECT_THROW(parse_grid("a:1:5"), ConfigError);
}

TEST(Specs, SymbolicStarts) {
    EXPECT_NEAR(Mu0Spec::times_grazing(2).at(1, 1), 2 / std::sqrt(1.25), 1e-15);
    EXPECT_EQ(Mu0Spec::literal(0.7).at(1, 3), 0.7);
    EXPECT_EQ(X0Spec::stable_branch().at(0.8), -0.4);
    EXPECT_EQ(X0Spec::literal(0.1).at(0.8), 0.1);
    EXPECT_EQ(parse_sweep_axis("eps"), SweepAxis::Eps);
    EXPECT_THROW(parse_sweep_axis("mu"), ConfigError);
}
