#pragma once

#include <cmath>
#include <utility>

namespace tipfold::roots {

/// Bisection on a predicate that is true at `lo` and false at `hi`.
/// Returns the final bracket (lo stays on the true side).
template <class Pred>
std::pair<double, double> bisect_predicate(Pred&& inside, double lo, double hi, double tol, int max_iter = 200) {
    for (int i = 0; i < max_iter && std::abs(hi - lo) > tol; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (inside(mid))
            lo = mid;
        else
            hi = mid;
    }
    return {lo, hi};
}

/// Root of f on [lo, hi] where f(lo) and f(hi) have opposite signs.
template <class F>
double bisect(F&& f, double lo, double hi, double tol, int max_iter = 200) {
    const bool lo_negative = f(lo) < 0.0;
    auto [a, b] = bisect_predicate([&](double t) { return (f(t) < 0.0) == lo_negative; }, lo, hi, tol, max_iter);
    return 0.5 * (a + b);
}

} // namespace tipfold::roots
