// Periodic orbits at omega = 5 from grazing down to the cyclic fold.

#include <cstdio>

#include "tipfold/orbit.hpp"

int main() {
    using namespace tipfold;
    const double omega = 5.0, A = 1.0;
    const ContinuationBranch br = continue_to_fold(omega, A);
    std::printf("mu_G = %.6f  mu_CF = %.6f  (%zu branch points)\n", grazing_mu(A, omega), br.mu_cf, br.points.size());
    std::printf("%10s %10s %10s %10s %10s %10s\n", "mu", "a", "b", "C+", "C-", "<x>");
    const std::size_t stride = br.points.size() / 12 + 1;
    for (std::size_t i = 0; i < br.points.size(); i += stride) {
        const PeriodicOrbit& o = br.points[i];
        std::printf("%10.6f %10.6f %10.6f %10.6f %10.6f %10.6f\n", o.mu, o.a, o.b, o.c_plus, o.c_minus, o.mean_x);
    }
    const PeriodicOrbit& f = br.fold_orbit;
    std::printf("%10.6f %10.6f %10.6f %10.6f %10.6f %10.6f  <- fold\n", f.mu, f.a, f.b, f.c_plus, f.c_minus, f.mean_x);
}
