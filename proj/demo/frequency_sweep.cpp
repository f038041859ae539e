// Tipping value against forcing frequency for the reference scenario
// (mu0 = 1, x0 = -1/2, eps = 0.1, A = 1, K = 10), with the cyclic fold and
// grazing values alongside. Prints CSV; pipe it into any plotting tool.

#include <cmath>
#include <cstdio>
#include <vector>

#include "tipfold/sweep.hpp"

int main() {
    using namespace tipfold;
    std::vector<double> grid;
    for (int i = 0; i <= 60; ++i) grid.push_back(0.05 * i);

    SweepSetup setup;
    const SweepResult r = sweep_omega(setup, grid);

    std::printf("omega,mu_tp,mu_cf,mu_g\n");
    for (std::size_t i = 0; i < grid.size(); ++i)
        std::printf("%.3f,%.6f,%.6f,%.6f\n", grid[i], r.mu_tp[i].value_or(NAN), r.mu_cf[i].value_or(NAN),
                    r.mu_g[i].value_or(NAN));
    for (const auto& t : r.transitions)
        std::fprintf(stderr, "sharp transition near omega = %.3f (drop %.3f)\n", t.location, t.drop);
}
