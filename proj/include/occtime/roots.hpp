#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace occtime {

struct RootError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BracketOptions {
    double width_tol = 1e-15;  // absolute bracket width at which bisection stops
    int max_bisections = 200;
    int secant_steps = 3;
    /// Called after each bisection with the current bracket and the function
    /// values at its ends.
    std::function<void(double lo, double hi, double f_lo, double f_hi)> trace;
};

struct RootResult {
    double x = 0.0;
    double residual = 0.0;
    int bisections = 0;
};

/// Bisection on [lo, hi] followed by a few secant polish steps that are kept
/// only while they stay inside the final bracket and reduce |f|.
/// f(lo) and f(hi) must have opposite signs (a zero at either end is accepted).
template <class F>
RootResult bisect_secant(F&& f, double lo, double hi, const BracketOptions& opt = {}) {
    double f_lo = f(lo);
    double f_hi = f(hi);
    if (f_lo == 0.0) return {lo, 0.0, 0};
    if (f_hi == 0.0) return {hi, 0.0, 0};
    if ((f_lo < 0.0) == (f_hi < 0.0)) {
        throw RootError("root not bracketed on [" + std::to_string(lo) + ", " + std::to_string(hi) +
                        "]: f(lo)=" + std::to_string(f_lo) + " f(hi)=" + std::to_string(f_hi));
    }
    RootResult res;
    while (hi - lo > opt.width_tol && res.bisections < opt.max_bisections) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double f_mid = f(mid);
        ++res.bisections;
        if (f_mid == 0.0) return {mid, 0.0, res.bisections};
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
        if (opt.trace) opt.trace(lo, hi, f_lo, f_hi);
    }
    double best = std::abs(f_lo) <= std::abs(f_hi) ? lo : hi;
    double f_best = best == lo ? f_lo : f_hi;
    double x0 = lo, x1 = hi, f0 = f_lo, f1 = f_hi;
    for (int i = 0; i < opt.secant_steps && f1 != f0; ++i) {
        const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        if (!(x2 >= lo && x2 <= hi)) break;
        const double f2 = f(x2);
        if (std::abs(f2) < std::abs(f_best)) {
            best = x2;
            f_best = f2;
        }
        if (f2 == 0.0) break;
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
    }
    res.x = best;
    res.residual = f_best;
    return res;
}

}  // namespace occtime
