#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "tipfold/asym.hpp"
#include "tipfold/exactsim.hpp"

using namespace tipfold;

TEST(Estimates, SlowDrift) {
    EXPECT_NEAR(mu_eps(0.1, 10), -0.3156, 5e-5);
    EXPECT_LT(mu_eps(1e-8, 10), 0.0);
    EXPECT_GT(mu_eps(1e-8, 10), -1e-6);
}

TEST(Estimates, FoldFormulas) {
    EXPECT_NEAR(mu_cf_large_omega(1, 10), 0.12643, 5e-6);
    EXPECT_NEAR(mu_cf_large_omega(1, 10, 0.0), 4 / (10 * std::numbers::pi), 1e-15);
    EXPECT_NEAR(mu_cf_large_omega(1, 1e6) * 1e6, 4 / std::numbers::pi, 1e-6);
    EXPECT_EQ(mu_cf_small_omega(1, 0), 1.0);
    EXPECT_NEAR(mu_cf_small_omega(1, 0.2), 0.990099, 5e-7);
    EXPECT_NEAR(mu_cf_small_omega(1, 0.3), 0.9780, 5e-5);
}

TEST(Estimates, FoldFormulasOverlapAndStayBelowGrazing) {
    // the gap widens with omega and crosses 0.08 near omega = 2.85
    double prev = 0;
    for (double w = 2.0; w <= 3.0 + 1e-12; w += 0.1) {
        const double gap = std::abs(mu_cf_large_omega(1, w) - mu_cf_small_omega(1, w));
        if (w <= 2.8 + 1e-12) EXPECT_LT(gap, 0.08) << w;
        EXPECT_GT(gap, prev) << w;
        prev = gap;
    }
    EXPECT_NEAR(std::abs(mu_cf_large_omega(1, 3) - mu_cf_small_omega(1, 3)), 0.083711, 1e-6);
    for (double w : {0.05, 0.5, 1.0, 2.0, 5.0, 20.0}) {
        EXPECT_LE(mu_cf_large_omega(1, w), grazing_mu(1, w));
        EXPECT_LE(mu_cf_small_omega(1, w), grazing_mu(1, w));
    }
}

TEST(Estimates, ForcedTipping) {
    EXPECT_NEAR(mu_tp_large_omega(1, 10, 0), 0.12732, 5e-6);
    EXPECT_NEAR(mu_tp_large_omega(1, 10, 0.01), 0.06877, 5e-5);
    EXPECT_NEAR(constants::M, 2.7177, 5e-4);
}

TEST(Estimates, SaddleNode) {
    EXPECT_NEAR(snb_mu_tp(1, 0.1), -0.50372, 1e-5);
    EXPECT_LT(snb_mu_tp(1, 1e-9), 0.0);
    EXPECT_GT(snb_mu_tp(1, 1e-9), -1e-5);
}

TEST(Estimates, DriftDominates) {
    EXPECT_FALSE(drift_dominates(0.1, 1, 1, 1));
    EXPECT_TRUE(drift_dominates(5, 1, 1, 0));
    EXPECT_TRUE(drift_dominates(0.01, 0, 0, 3));
}

TEST(Estimates, Set) {
    SystemConfig c;
    c.omega = 0;
    const EstimateSet e = estimates(c);
    EXPECT_FALSE(e.mu_cf_large);
    EXPECT_FALSE(e.snb_mu_tp);
    EXPECT_EQ(e.mu_g, 1.0);
    c.omega = 5;
    c.kind = SystemKind::SmoothedNSF;
    c.alpha = 1;
    const EstimateSet f = estimates(c);
    EXPECT_NEAR(*f.mu_cf_large, mu_cf_large_omega(1, 5), 0);
    EXPECT_NEAR(*f.snb_mu_tp, snb_mu_tp(1, 0.1), 0);
    EXPECT_EQ(f.c0, 2.33810741);
}

TEST(Estimates, AlphaThresholds) {
    EXPECT_NEAR(alpha0(0.1, 100), 0.1 * std::pow(std::log(2000.0) / 2, 3), 1e-12);
    EXPECT_NEAR(alpha1(0.1, 100), std::pow(100.0, 1.5) / std::sqrt(0.1), 1e-9);
}

namespace {

SystemConfig phase_cfg(double omega, double eps, double mu0, double A = 1) {
    SystemConfig c;
    c.omega = omega;
    c.eps = eps;
    c.mu0 = mu0;
    c.A = A;
    return c;
}

} // namespace

TEST(Phase, TrivialCases) {
    const PhaseAnalysis none = phase_roots(phase_cfg(1, 0.1, 1, 0));
    ASSERT_EQ(none.roots.size(), 1u);
    EXPECT_EQ(none.roots[0].mu_r, 0.0);
    const PhaseAnalysis still = phase_roots(phase_cfg(0, 0.1, 2, 1));
    ASSERT_EQ(still.roots.size(), 1u);
    EXPECT_EQ(still.roots[0].mu_r, 1.0);
    EXPECT_THROW(phase_roots(phase_cfg(1, 0, 1)), ConfigError);
}

TEST(Phase, RootsSatisfyDefiningEquation) {
    for (double omega : {0.1, 0.5, 1.0}) {
        const SystemConfig c = phase_cfg(omega, 0.02, 2 * grazing_mu(1, omega));
        const PhaseAnalysis pa = phase_roots(c);
        ASSERT_FALSE(pa.roots.empty());
        for (const auto& r : pa.roots) {
            EXPECT_LT(std::abs(r.mu_r / c.A - std::cos(pa.Omega * (c.mu0 - r.mu_r))), 1e-10);
            EXPECT_LE(r.mu_r, c.A);
        }
    }
}

// Sign changes of g on a uniform 10^6-point grid, each bisected.
TEST(Phase, MatchesDenseScan) {
    const SystemConfig c = phase_cfg(0.6, 0.03, 1.7);
    const PhaseAnalysis pa = phase_roots(c);
    const double Om = c.omega / c.eps, lo = -c.A - 1, hi = std::min(c.mu0, c.A);
    auto g = [&](double mu) { return -mu + c.A * std::cos(Om * (c.mu0 - mu)); };
    std::vector<double> oracle;
    const int n = 1000000;
    double pm = lo, pg = g(lo);
    for (int i = 1; i <= n; ++i) {
        const double mu = lo + (hi - lo) * i / n, gv = g(mu);
        if ((gv < 0) != (pg < 0)) {
            double a = pm, b = mu;
            for (int k = 0; k < 100; ++k) {
                const double m = 0.5 * (a + b);
                ((g(m) < 0) == (pg < 0) ? a : b) = m;
            }
            oracle.push_back(0.5 * (a + b));
        }
        pm = mu;
        pg = gv;
    }
    ASSERT_EQ(pa.roots.size(), oracle.size());
    for (std::size_t i = 0; i < oracle.size(); ++i) EXPECT_NEAR(pa.roots[i].mu_r, oracle[i], 1e-8);
}

TEST(Phase, SlopeMatchesPerturbedRoots) {
    const SystemConfig c = phase_cfg(0.4, 0.02, 1.8);
    const PhaseAnalysis pa = phase_roots(c);
    const double h = 1e-6;
    int positive = 0, negative = 0;
    for (const auto& r : pa.roots) {
        if (r.derivative_sign >= 0) continue;
        auto root_near = [&](double Om) {
            auto g = [&](double mu) { return g_ns(mu, c.mu0, c.A, Om); };
            return roots::bisect(g, r.mu_r - 1e-3, r.mu_r + 1e-3, 1e-15);
        };
        const double fd = (root_near(pa.Omega + h) - root_near(pa.Omega - h)) / (2 * h);
        EXPECT_NEAR(r.slope, fd, 1e-6 * (1 + std::abs(fd)));
        // with g' < 0 the sign of the slope is opposite to sin(Omega (mu0 - mu_r))
        const double s = std::sin(pa.Omega * (c.mu0 - r.mu_r));
        EXPECT_EQ(r.slope > 0, s < 0);
        (r.slope > 0 ? positive : negative)++;
    }
    EXPECT_GT(positive + negative, 2);
}

TEST(Phase, PublishedMaximalCounts) {
    auto two_graze = [](double w) { return 2 * grazing_mu(1, w); };
    EXPECT_EQ(n_max(1, 0.02, 1, two_graze, 10), 8);
    EXPECT_EQ(n_max(1, 0.05, 1, two_graze, 10), 3);
    EXPECT_THROW(n_max(1, 0.02, 1, [](double) { return 0.5; }, 10), DomainError);
}

TEST(Phase, NoCountBelowFirstTransition) {
    const double eps = 0.05, mu0 = 2.0;
    // 2 pi eps / (mu0 - A - mu_eps) is the first frequency with Q(1) > 0
    const double first = 2 * std::numbers::pi * eps / (mu0 - 1 - mu_eps(eps, 10));
    EXPECT_EQ(n_max(0.99 * first, eps, 1, [=](double) { return mu0; }), 0);
    EXPECT_EQ(n_max(1.01 * first, eps, 1, [=](double) { return mu0; }), 1);
    const auto ws = omega_star(eps, 1, mu0, 10);
    ASSERT_TRUE(ws);
    EXPECT_NEAR(*ws, eps * std::acos(1 + mu_eps(eps, 10)) / (mu0 - 1 - mu_eps(eps, 10)), 1e-15);
    EXPECT_LT(*ws, first);
}

TEST(Phase, BoundsAndJump) {
    const SystemConfig c = phase_cfg(0.5, 0.02, 2);
    const PhaseAnalysis pa = phase_roots(c);
    EXPECT_NEAR(pa.jump_scale, 2 * std::numbers::pi * 0.02 / 0.5, 1e-15);
    EXPECT_NEAR(pa.upper, 1 + mu_eps(0.02, 10), 1e-15);
    EXPECT_NEAR(pa.upper - pa.lower, pa.jump_scale, 1e-15);
    EXPECT_EQ(pa.Omega, 25.0);
}

// Largest root with g' < 0 against the exact tipping value.
TEST(Phase, TracksTippingPlateaus) {
    for (double omega : {0.05, 0.1, 0.2, 0.3, 0.5}) {
        SystemConfig c = phase_cfg(omega, 0.02, 2 * grazing_mu(1, omega));
        c.x0 = -c.mu0 / 2;
        const PhaseAnalysis pa = phase_roots(c);
        double best = -INFINITY;
        for (const auto& r : pa.roots)
            if (r.derivative_sign < 0) best = std::max(best, r.mu_r);
        EXPECT_LT(std::abs(best - tipping_point(c).mu_tp), pa.jump_scale) << omega;
    }
}
