#include "occtime/props.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <stdexcept>

#include "occtime/dual.hpp"

namespace occtime {

namespace {

constexpr double kStrict = 1e-9;

double criterion(const FbpSolution& s, double y) {
    const double B1 = s.k.B1, B2 = s.k.B2;
    return B1 * (B1 - 1.0) * std::pow(y / s.yL, B1 - B2) + B2 * (1.0 - B2);
}

std::vector<double> interior(double lo, double hi, int n) {
    std::vector<double> w;
    for (int i = 1; i <= n; ++i) {
        const double x = lo + (hi - lo) * i / (n + 1.0);
        if (x != 0.0) w.push_back(x);
    }
    return w;
}

}  // namespace

void PropReport::add(std::string label, double x, double lhs, double rhs, double margin) {
    points.push_back({std::move(label), x, lhs, rhs, margin, margin > 0.0});
}

void PropReport::finish() {
    pass = !points.empty();
    worst_margin = points.empty() ? 0.0 : points.front().margin;
    for (const PointCheck& p : points) {
        pass = pass && p.pass;
        worst_margin = std::min(worst_margin, p.margin);
    }
}

PropReport check_pi_comparison(const FbpSolution& s, int n_points) {
    PropReport rep;
    rep.id = "pi_comparison";
    rep.params = s.params;
    rep.relation = "pi* = pi_ruin on (0, c/r) within 1e-10 relative; pi* - pi_ruin > 1e-9 on (-L, 0); "
                   "pi*(0-) - pi*(0+) = (mu - r)/(sigma^2 delta y0) within 1e-10 relative";
    rep.tolerance = kStrict;
    const double cr = s.k.safe_level;
    for (double w : interior(0.0, cr, n_points)) {
        const double a = pi_star(s, w), b = pi_ruin(s.k, s.params, w);
        rep.add("equal", w, a, b, 1e-10 * b - std::abs(a - b));
    }
    for (double w : interior(-s.params.L, 0.0, n_points)) {
        const double a = pi_star(s, w), b = pi_ruin(s.k, s.params, w);
        rep.add("dominates", w, a, b, a - b - kStrict);
    }
    const double gap = pi_star(s, 0.0, Side::below) - pi_star(s, 0.0, Side::above);
    const double jump = s.params.leverage() / (s.k.delta * s.y0);
    rep.add("jump_at_zero", 0.0, gap, jump, 1e-10 * jump - std::abs(gap - jump));
    rep.finish();
    return rep;
}

PropReport check_pi_monotone(const FbpSolution& s, int n_points) {
    PropReport rep;
    rep.id = "pi_monotone";
    rep.params = s.params;
    rep.relation = "sign(dpi*/dw) = -sign(B1(B1-1)(y/yL)^(B1-B2) + B2(1-B2)) on (-L, 0), |slope| > 1e-9; "
                   "r < lambda implies B1(B1-1) < -B2(1-B2)";
    rep.tolerance = kStrict;
    const double B1 = s.k.B1, B2 = s.k.B2;
    const double at_y0 = criterion(s, s.y0), at_yL = criterion(s, s.yL);
    if (at_yL < 0.0) {
        rep.note = "increasing on (-L, 0)";
    } else if (at_y0 > 0.0) {
        rep.note = "decreasing on (-L, 0)";
    } else {
        rep.note = "not monotone on (-L, 0)";
    }
    rep.note += "; criterion at y0 = " + std::to_string(at_y0) + ", at yL = " + std::to_string(at_yL);
    for (double w : interior(-s.params.L, 0.0, n_points)) {
        const double h = 1e-4 * std::abs(w);
        const double slope = (pi_star(s, w + h) - pi_star(s, w - h)) / (2.0 * h);
        const double q = criterion(s, invert(s, w));
        rep.add("slope_sign", w, slope, q, -std::copysign(1.0, q) * slope - kStrict);
    }
    if (s.params.r < s.params.lambda) {
        rep.add("r_below_lambda", s.params.r, B1 * (B1 - 1.0), -B2 * (1.0 - B2), -B2 * (1.0 - B2) - B1 * (B1 - 1.0));
    }
    rep.finish();
    return rep;
}

PropReport check_L_monotonicity(const ModelParams& params, const std::vector<double>& L_list, int n_points) {
    if (L_list.size() < 3) throw std::invalid_argument("L monotonicity: at least three L values required");
    for (std::size_t i = 1; i < L_list.size(); ++i) {
        if (!(L_list[i] > L_list[i - 1])) throw std::invalid_argument("L monotonicity: L values must increase");
    }
    PropReport rep;
    rep.id = "L_monotonicity";
    rep.params = params;
    rep.relation = "along increasing L: pi* strictly increasing (> 1e-9) for w < 0, equal within 1e-10 relative "
                   "for w > 0; M_L(w, 0) strictly decreasing (> 1e-9)";
    rep.tolerance = kStrict;
    std::vector<FbpSolution> sols;
    for (double L : L_list) {
        ModelParams p = params;
        p.L = L;
        sols.push_back(solve_fbp(p));
    }
    const std::vector<double> ws = interior(-L_list.front(), params.safe_level(), n_points);
    for (std::size_t i = 1; i < sols.size(); ++i) {
        for (double w : ws) {
            const double a = pi_star(sols[i - 1], w), b = pi_star(sols[i], w);
            if (w < 0.0) {
                rep.add("pi_increases", w, b, a, b - a - kStrict);
            } else {
                rep.add("pi_unchanged", w, b, a, 1e-10 * a - std::abs(b - a));
            }
            const double ma = value(sols[i - 1], w), mb = value(sols[i], w);
            rep.add("M_decreases", w, mb, ma, ma - mb - kStrict);
        }
    }
    rep.finish();
    return rep;
}

PropReport check_M_limit(const ModelParams& params, double w, const std::vector<double>& L_list, double bound) {
    if (L_list.empty()) throw std::invalid_argument("M limit: L list is empty");
    PropReport rep;
    rep.id = "M_limit";
    rep.params = params;
    rep.relation = "M_L(" + std::to_string(w) + ", 0) strictly decreasing along the L list and below " +
                   std::to_string(bound) + " years at its last entry";
    rep.tolerance = kStrict;
    double prev = 0.0;
    for (std::size_t i = 0; i < L_list.size(); ++i) {
        ModelParams p = params;
        p.L = L_list[i];
        const double m = value(solve_fbp(p), w);
        if (i > 0) rep.add("decreases", L_list[i], m, prev, prev - m - kStrict);
        prev = m;
    }
    rep.add("below_bound", L_list.back(), prev, bound, bound - prev);
    rep.finish();
    return rep;
}

LimitConstants limit_constants(const MarketConstants& k, const ModelParams& params) {
    const double B1 = k.B1, B2 = k.B2;
    LimitConstants out;
    out.z = std::pow(-((B1 - 1.0) / B1) * (B2 / (1.0 - B2)), 1.0 / (B1 - B2));
    out.slope = params.leverage() * (B1 - 1.0) * (1.0 - B2) / (B1 - B2) *
                (B1 * std::pow(out.z, B1 - 1.0) - B2 * std::pow(out.z, B2 - 1.0));
    return out;
}

PropReport check_pi_growth(const ModelParams& params, const std::vector<double>& ws, double L_lo, double L_hi,
                           double rel_tol) {
    PropReport rep;
    rep.id = "pi_growth";
    rep.params = params;
    rep.relation = "|pi*_L(w)/L at L = " + std::to_string(L_hi) + " minus the same at L = " + std::to_string(L_lo) +
                   "| <= " + std::to_string(rel_tol) + " relative";
    rep.tolerance = rel_tol;
    ModelParams lo = params, hi = params;
    lo.L = L_lo;
    hi.L = L_hi;
    const FbpSolution a = solve_fbp(lo), b = solve_fbp(hi);
    for (double w : ws) {
        const double s_lo = pi_star(a, w) / L_lo, s_hi = pi_star(b, w) / L_hi;
        rep.add("stable_slope", w, s_hi, s_lo, rel_tol - std::abs(s_hi - s_lo) / s_hi);
    }
    const LimitConstants lim = limit_constants(constants(params), params);
    rep.note = "limit slope " + std::to_string(lim.slope) + ", z = " + std::to_string(lim.z);
    rep.finish();
    return rep;
}

double dyL_dL_closed(const FbpSolution& s) {
    const double B1 = s.k.B1, B2 = s.k.B2, cr = s.k.safe_level, L = s.params.L;
    return s.yL / (cr + L) * (-1.0 + B2 * cr / ((B1 - 1.0) * cr - B1 * B2 / (s.params.lambda * s.y0)));
}

double ratio_power_from_y0(const FbpSolution& s) {
    const double B1 = s.k.B1, B2 = s.k.B2, cr = s.k.safe_level, L = s.params.L;
    return ((B1 - B2) / (B1 * B2) * cr - 1.0 / (s.params.lambda * s.y0)) * B2 / ((1.0 - B2) * (cr + L));
}

PropReport check_dyL_dL(const ModelParams& params) {
    PropReport rep;
    rep.id = "dyL_dL";
    rep.params = params;
    rep.relation = "closed-form dyL/dL matches a central difference (step 1e-4 L) within 1e-6 relative; "
                   "(y0/yL)^(B1-1) rebuilt from 1/y0 matches within 1e-10 relative";
    rep.tolerance = 1e-6;
    const FbpSolution s = solve_fbp(params);
    const double h = 1e-4 * params.L;
    ModelParams up = params, down = params;
    up.L += h;
    down.L -= h;
    const double fd = (solve_fbp(up).yL - solve_fbp(down).yL) / (2.0 * h);
    const double closed = dyL_dL_closed(s);
    rep.add("central_difference", params.L, closed, fd, 1e-6 * std::abs(closed) - std::abs(closed - fd));
    const double direct = std::pow(s.rho, s.k.B1 - 1.0), rebuilt = ratio_power_from_y0(s);
    rep.add("ratio_identity", params.L, rebuilt, direct, 1e-10 * direct - std::abs(rebuilt - direct));
    rep.note = closed < 0.0 ? "dyL/dL negative" : "dyL/dL not negative";
    rep.finish();
    return rep;
}

double master_lhs(const FbpSolution& s, double y) {
    const double B1 = s.k.B1, B2 = s.k.B2, cr = s.k.safe_level;
    const double x = y / s.yL;
    const double x1 = std::pow(x, B1), x2 = std::pow(x, B2);
    const double bracket = -1.0 + B2 * cr / ((B1 - 1.0) * cr - B1 * B2 / (s.params.lambda * s.y0));
    return (B1 - 1.0) * (1.0 - B2) * (x1 - x2) * bracket - ((1.0 - B2) * x1 + (B1 - 1.0) * x2);
}

PropReport check_master_inequality(const FbpSolution& s, int n_points) {
    PropReport rep;
    rep.id = "master_inequality";
    rep.params = s.params;
    rep.relation = "left side of the dM_L/dL < 0 condition is < -1e-9 at y0 (direct and simplified) and on (y0, yL)";
    rep.tolerance = kStrict;
    const double B1 = s.k.B1, B2 = s.k.B2, cr = s.k.safe_level;
    rep.add("at_y0", s.y0, master_lhs(s, s.y0), 0.0, -master_lhs(s, s.y0) - kStrict);
    const double simplified = -(B1 - B2) / B1 * cr + B2 / (s.params.lambda * s.y0);
    rep.add("at_y0_simplified", s.y0, simplified, 0.0, -simplified - kStrict);
    for (int i = 1; i <= n_points; ++i) {
        const double y = s.y0 + (s.yL - s.y0) * i / (n_points + 1.0);
        rep.add("on_grid", y, master_lhs(s, y), 0.0, -master_lhs(s, y) - kStrict);
    }
    rep.finish();
    return rep;
}

std::vector<PropReport> run_all(const ModelParams& params) {
    const ModelParams p = validate(params);
    const FbpSolution s = solve_fbp(p);
    const std::vector<std::function<PropReport()>> tasks = {
        [&] { return check_pi_comparison(s); },
        [&] { return check_pi_monotone(s); },
        [&] { return check_L_monotonicity(p, {0.5 * p.L, p.L, 2.0 * p.L}); },
        [&] { return check_M_limit(p, -1.0, {10.0, 100.0, 1000.0}, 0.05); },
        [&] { return check_pi_growth(p, {-0.5, -1.0, -2.0}); },
        [&] { return check_dyL_dL(p); },
        [&] { return check_master_inequality(s); },
    };
    std::vector<PropReport> out(tasks.size());
    std::vector<std::exception_ptr> errors(tasks.size());
    const int n = static_cast<int>(tasks.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (int i = 0; i < n; ++i) {
        try {
            out[i] = tasks[i]();
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

}  // namespace occtime
