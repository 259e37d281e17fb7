#include "occtime/fbp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace occtime {

namespace {

// y^e for y > 0, written out so that negative exponents go through one exp/log.
double power(double y, double e) { return std::exp(e * std::log(y)); }

double outer_scale(const FbpSolution& s) { return s.k.safe_level + s.params.L; }

}  // namespace

double ratio_rhs(const MarketConstants& k, double rho) {
    return (k.B1 * (1.0 - k.B2) * power(rho, k.B1 - 1.0) + (k.B1 - 1.0) * k.B2 * power(rho, k.B2 - 1.0)) /
           (k.B1 - k.B2);
}

double solve_ratio(const MarketConstants& k, const ModelParams& params, const BracketOptions& opt) {
    const double target = params.c / (params.c + params.r * params.L);
    auto f = [&](double rho) { return ratio_rhs(k, rho) - target; };
    double lo = 0.5;
    while (f(lo) >= 0.0) {
        lo *= 0.5;
        if (lo < 1e-300) throw RootError("solve_ratio: lower bracket not found");
    }
    return bisect_secant(f, lo, 1.0, opt).x;
}

FbpSolution solve_boundaries(double rho, const MarketConstants& k, const ModelParams& params) {
    if (!(rho > 0.0 && rho < 1.0)) throw RootError("solve_boundaries: ratio outside (0, 1)");
    const double cr = k.safe_level;
    const double scale = cr + params.L;
    const double bracket = -cr / k.B1 + (1.0 - k.B2) / (k.B1 - k.B2) * scale * power(rho, k.B1 - 1.0) +
                           (k.B1 - 1.0) / (k.B1 - k.B2) * scale * power(rho, k.B2 - 1.0);
    if (!(bracket > 0.0)) {
        throw RootError("solve_boundaries: value-matching denominator " + std::to_string(bracket) +
                        " is not positive");
    }
    FbpSolution s;
    s.params = params;
    s.k = k;
    s.rho = rho;
    s.y0 = 1.0 / (params.lambda * bracket);
    s.yL = s.y0 / rho;
    s.D1 = -cr / k.B1 * power(s.y0, 1.0 - k.B1);
    s.d1 = -(1.0 - k.B2) / (k.B1 - k.B2) * power(s.yL, 1.0 - k.B1) * scale;
    s.d2 = -(k.B1 - 1.0) / (k.B1 - k.B2) * power(s.yL, 1.0 - k.B2) * scale;
    return s;
}

FbpSolution solve_fbp(const ModelParams& params) {
    const ModelParams p = validate(params);
    const MarketConstants k = constants(p);
    return solve_boundaries(solve_ratio(k, p), k, p);
}

double mhat_region(const FbpSolution& s, double y, Region region) {
    const double cr = s.k.safe_level;
    if (region == Region::inner) {
        if (y == 0.0) return 0.0;
        return cr * y * (1.0 - power(y / s.y0, s.k.B1 - 1.0) / s.k.B1);
    }
    const double x = y / s.yL;
    const double a = (1.0 - s.k.B2) / (s.k.B1 - s.k.B2) * outer_scale(s);
    const double b = (s.k.B1 - 1.0) / (s.k.B1 - s.k.B2) * outer_scale(s);
    return y * (cr - a * power(x, s.k.B1 - 1.0) - b * power(x, s.k.B2 - 1.0)) + 1.0 / s.params.lambda;
}

double mhat(const FbpSolution& s, double y) {
    if (!(y >= 0.0 && y <= s.yL)) throw std::domain_error("mhat: y outside [0, yL]");
    return mhat_region(s, y, y <= s.y0 ? Region::inner : Region::outer);
}

MhatDerivs mhat_derivs_region(const FbpSolution& s, double y, Region region) {
    const double B1 = s.k.B1, B2 = s.k.B2, cr = s.k.safe_level;
    MhatDerivs d;
    if (region == Region::inner) {
        const double x = y / s.y0;
        d.d1 = cr * (1.0 - power(x, B1 - 1.0));
        d.d2 = -cr * (B1 - 1.0) * power(x, B1 - 2.0) / s.y0;
        d.d3 = -cr * (B1 - 1.0) * (B1 - 2.0) * power(x, B1 - 3.0) / (s.y0 * s.y0);
        return d;
    }
    const double x = y / s.yL;
    const double a = (1.0 - B2) / (B1 - B2) * outer_scale(s);
    const double b = (B1 - 1.0) / (B1 - B2) * outer_scale(s);
    const double p1 = power(x, B1 - 1.0), p2 = power(x, B2 - 1.0);
    d.d1 = cr - B1 * a * p1 - B2 * b * p2;
    d.d2 = -(B1 * (B1 - 1.0) * a * p1 + B2 * (B2 - 1.0) * b * p2) / y;
    d.d3 = -(B1 * (B1 - 1.0) * (B1 - 2.0) * a * p1 + B2 * (B2 - 1.0) * (B2 - 2.0) * b * p2) / (y * y);
    return d;
}

MhatDerivs mhat_derivs(const FbpSolution& s, double y, std::optional<Region> side) {
    if (!(y > 0.0 && y <= s.yL)) throw std::domain_error("mhat_derivs: y outside (0, yL]");
    if (y == s.y0) {
        if (!side) throw std::domain_error("mhat_derivs: y == y0 requires an explicit region");
        return mhat_derivs_region(s, y, *side);
    }
    return mhat_derivs_region(s, y, y < s.y0 ? Region::inner : Region::outer);
}

double upper_envelope(const FbpSolution& s, double y) {
    return std::min(s.k.safe_level * y, 1.0 / s.params.lambda - s.params.L * y);
}

double dual_ode_residual(const FbpSolution& s, double y, std::optional<Region> side) {
    const Region region = y == s.y0 ? side.value_or(Region::inner) : (y < s.y0 ? Region::inner : Region::outer);
    const double m = mhat_region(s, y, region);
    const MhatDerivs d = mhat_derivs_region(s, y, region);
    const double lam = s.params.lambda, r = s.params.r;
    const double source = region == Region::outer ? 1.0 : 0.0;
    return lam * m - (lam - r) * y * d.d1 - s.k.delta * y * y * d.d2 - s.params.c * y - source;
}

}  // namespace occtime
