#include "occtime/verify.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "occtime/dual.hpp"
#include "occtime/hjb_oracle.hpp"

namespace occtime {

namespace {

double rel_margin(double tol, double lhs, double rhs) {
    return tol * std::max(1.0, std::abs(rhs)) - std::abs(lhs - rhs);
}

std::vector<double> open_grid(double lo, double hi, int n) {
    std::vector<double> w;
    for (int i = 1; i <= n; ++i) w.push_back(lo + (hi - lo) * i / (n + 1.0));
    return w;
}

}  // namespace

PropReport check_boundaries(const FbpSolution& s) {
    PropReport rep;
    rep.id = "boundaries";
    rep.params = s.params;
    rep.relation = "boundary and free-boundary conditions within 1e-12 relative";
    rep.tolerance = 1e-12;
    const double cr = s.k.safe_level, L = s.params.L, lam = s.params.lambda, a = 1.25;
    rep.add("M(c/r, a) = a", cr, value(s, cr, a), a, rel_margin(1e-12, value(s, cr, a), a));
    rep.add("M(-L, a) = a + 1/lambda", -L, value(s, -L, a), a + 1.0 / lam,
            rel_margin(1e-12, value(s, -L, a), a + 1.0 / lam));
    rep.add("mhat(0) = 0", 0.0, mhat(s, 0.0), 0.0, rel_margin(1e-12, mhat(s, 0.0), 0.0));
    for (Region r : {Region::inner, Region::outer}) {
        const double d = mhat_derivs_region(s, s.y0, r).d1;
        rep.add(r == Region::inner ? "mhat'(y0-) = 0" : "mhat'(y0+) = 0", s.y0, d, 0.0,
                1e-12 * cr - std::abs(d));
    }
    const double d_yL = mhat_derivs_region(s, s.yL, Region::outer).d1;
    rep.add("mhat'(yL) = -L", s.yL, d_yL, -L, rel_margin(1e-12, d_yL, -L));
    const double m_yL = mhat(s, s.yL);
    rep.add("mhat(yL) = 1/lambda - L yL", s.yL, m_yL, 1.0 / lam - L * s.yL,
            rel_margin(1e-12, m_yL, 1.0 / lam - L * s.yL));
    rep.finish();
    return rep;
}

PropReport check_hjb_residual(const FbpSolution& s, int n_points) {
    PropReport rep;
    rep.id = "hjb_residual";
    rep.params = s.params;
    rep.relation = "closed-form HJB residual <= 1e-8 relative at interior points; value matching and smooth fit "
                   "at w = 0 and M(-L) = 1/lambda within 1e-10 relative";
    rep.tolerance = 1e-8;
    const double cr = s.k.safe_level, L = s.params.L;
    const std::vector<double> ws = open_grid(-L, cr, n_points);
    for (std::size_t i = 0; i < ws.size(); ++i) {
        const double w = ws[i];
        const ResidualReport r = residual_of_closed_form(s, std::span<const double>(&ws[i], 1));
        rep.add("residual", w, r.max_rel, 0.0, 1e-8 - r.max_rel);
    }
    // Each branch evaluated from its own representation at w = 0.
    const double beta = beta_L(s), p = s.k.p;
    const double m_above = beta * std::pow(cr, p), d_above = -beta * p * std::pow(cr, p - 1.0);
    const double y_below = s.y0;
    const double m_below = mhat_region(s, y_below, Region::outer);
    const double d_below = -y_below;
    rep.add("value matching at 0", 0.0, m_above, m_below, rel_margin(1e-10, m_above, m_below));
    rep.add("smooth fit at 0", 0.0, d_above, d_below, rel_margin(1e-10, d_above, d_below));
    const double m_L = mhat_region(s, s.yL, Region::outer) + L * s.yL;
    rep.add("value at -L", -L, m_L, 1.0 / s.params.lambda, rel_margin(1e-10, m_L, 1.0 / s.params.lambda));
    rep.finish();
    return rep;
}

PropReport check_hjb_oracle(const ModelParams& params, int n_nodes) {
    PropReport rep;
    rep.id = "hjb_oracle";
    rep.params = params;
    rep.relation = "policy iteration on " + std::to_string(n_nodes) +
                   " nodes matches the closed form within 1e-4 years; halving h shrinks the error by >= 1.7";
    rep.tolerance = 1e-4;
    const FbpSolution s = solve_fbp(params);
    GridSpec spec;
    spec.n = n_nodes;
    const GridSolution coarse = solve_grid(params, spec);
    spec.n = 2 * n_nodes;
    const GridSolution fine = solve_grid(params, spec);
    const double e_coarse = max_error_vs_closed_form(s, coarse), e_fine = max_error_vs_closed_form(s, fine);
    rep.add("max error", n_nodes, e_coarse, 1e-4, 1e-4 - e_coarse);
    rep.add("refinement ratio", 2 * n_nodes, e_coarse / e_fine, 1.7, e_coarse / e_fine - 1.7);
    rep.add("monotone scheme", n_nodes, coarse.m_matrix && fine.m_matrix ? 1.0 : 0.0, 1.0,
            coarse.m_matrix && fine.m_matrix ? 1.0 : -1.0);
    rep.note = std::to_string(coarse.iterations) + " policy iterations";
    rep.finish();
    return rep;
}

PropReport check_legendre(const FbpSolution& s, int n_points) {
    PropReport rep;
    rep.id = "legendre";
    rep.params = s.params;
    rep.relation = "m(w) = mhat(I(w)) - w I(w) within 1e-10 relative; m'' mhat'' = -1 within 1e-8";
    rep.tolerance = 1e-8;
    const ModelParams& p = s.params;
    const double cr = s.k.safe_level, beta = beta_L(s), pw = s.k.p;
    for (double w : open_grid(-p.L, cr, n_points)) {
        if (w == 0.0) continue;
        const double y = invert(s, w);
        const Region region = w > 0.0 ? Region::inner : Region::outer;
        const double dual = mhat_region(s, y, region) - w * y;
        const double m = value(s, w);
        rep.add("round trip", w, m, dual, rel_margin(1e-10, m, dual));
        double m2;
        if (w > 0.0) {
            m2 = beta * pw * (pw - 1.0) * std::pow(cr - w, pw - 2.0);
        } else {
            // lambda m - 1 - (r w - c) m' + delta m'^2 / m'' = 0 with m' = -y.
            m2 = -s.k.delta * y * y / (p.lambda * m - 1.0 + (p.r * w - p.c) * y);
        }
        const double prod = m2 * mhat_derivs_region(s, y, region).d2;
        rep.add("derivative duality", w, prod, -1.0, 1e-8 - std::abs(prod + 1.0));
    }
    rep.finish();
    return rep;
}

}  // namespace occtime
