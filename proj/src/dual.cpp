#include "occtime/dual.hpp"

#include <cmath>
#include <stdexcept>

namespace occtime {

namespace {

void check_domain(const FbpSolution& s, double w, const char* who) {
    if (!(w >= -s.params.L && w <= s.k.safe_level)) {
        throw std::domain_error(std::string(who) + ": wealth outside [-L, c/r]");
    }
}

Region region_for(double w, std::optional<Side> side, const char* who) {
    if (w > 0.0) return Region::inner;
    if (w < 0.0) return Region::outer;
    if (!side) throw std::domain_error(std::string(who) + ": w == 0 requires an explicit side");
    return *side == Side::below ? Region::outer : Region::inner;
}

}  // namespace

double beta_L(const FbpSolution& s) {
    return s.y0 / (s.k.p * std::pow(s.k.safe_level, s.k.p - 1.0));
}

double invert(const FbpSolution& s, double w) {
    check_domain(s, w, "invert");
    const double cr = s.k.safe_level;
    if (w >= 0.0) return s.y0 * std::pow(1.0 - w / cr, 1.0 / (s.k.B1 - 1.0));
    if (w == -s.params.L) return s.yL;
    auto f = [&](double y) { return mhat_derivs_region(s, y, Region::outer).d1 - w; };
    // Within rounding of either end the outer-region derivative may not straddle w.
    if (f(s.y0) <= 0.0) return s.y0;
    if (f(s.yL) >= 0.0) return s.yL;
    BracketOptions opt;
    opt.width_tol = 1e-16 * s.yL;
    return bisect_secant(f, s.y0, s.yL, opt).x;
}

double value(const FbpSolution& s, double w, double a) {
    if (!(a >= 0.0)) throw std::domain_error("value: accrued occupation time must be non-negative");
    const double cr = s.k.safe_level;
    if (w >= cr) return a;
    if (w <= -s.params.L) return a + 1.0 / s.params.lambda;
    if (w > 0.0) return a + beta_L(s) * std::pow(cr - w, s.k.p);
    const double y = invert(s, w);
    return a + mhat_region(s, y, Region::outer) - w * y;
}

double pi_ruin(const MarketConstants& k, const ModelParams& params, double w) {
    if (w >= k.safe_level) return 0.0;
    return params.leverage() * (k.safe_level - w) / (k.p - 1.0);
}

double pi_star(const FbpSolution& s, double w, std::optional<Side> side) {
    if (!(w > -s.params.L && w < s.k.safe_level)) {
        throw std::domain_error("pi_star: wealth must lie strictly inside (-L, c/r)");
    }
    const Region region = region_for(w, side, "pi_star");
    if (region == Region::inner) return pi_ruin(s.k, s.params, w);
    const double y = w == 0.0 ? s.y0 : invert(s, w);
    return -s.params.leverage() * y * mhat_derivs_region(s, y, Region::outer).d2;
}

ValuePoint evaluate(const FbpSolution& s, double w, std::optional<Side> side) {
    check_domain(s, w, "evaluate");
    ValuePoint v;
    v.w = w;
    v.y = invert(s, w);
    v.m = value(s, w);
    v.m1 = -v.y;
    v.pi_ruin = pi_ruin(s.k, s.params, w);
    const double cr = s.k.safe_level;
    if (w == cr || w == -s.params.L) {
        // Endpoints: one-sided derivatives from the adjacent closed form.
        const Region region = w == cr ? Region::inner : Region::outer;
        if (w == cr) {
            const double p = s.k.p;
            v.m2 = p < 2.0 ? INFINITY : (p == 2.0 ? 2.0 * beta_L(s) : 0.0);
            v.m3 = NAN;
            v.pi_star = 0.0;
            return v;
        }
        const MhatDerivs d = mhat_derivs_region(s, v.y, region);
        v.m2 = -1.0 / d.d2;
        v.m3 = d.d3 / (d.d2 * d.d2 * d.d2);
        v.pi_star = -s.params.leverage() * v.y * d.d2;
        return v;
    }
    const Region region = region_for(w, side, "evaluate");
    const MhatDerivs d = mhat_derivs_region(s, v.y, region);
    v.m2 = -1.0 / d.d2;
    v.m3 = d.d3 / (d.d2 * d.d2 * d.d2);
    v.pi_star = region == Region::inner ? v.pi_ruin : -s.params.leverage() * v.y * d.d2;
    return v;
}

}  // namespace occtime
