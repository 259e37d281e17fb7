#pragma once

#include <string>
#include <vector>

#include "occtime/fbp.hpp"

namespace occtime {

/// One evaluated inequality. `margin` is the slack by which it holds: the
/// point passes iff margin > 0.
struct PointCheck {
    std::string label;
    double x = 0.0;  // wealth, L or y depending on the check
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    bool pass = false;
};

struct PropReport {
    std::string id;
    ModelParams params;
    std::string relation;  // human-readable statement of what is asserted
    double tolerance = 0.0;
    std::vector<PointCheck> points;
    double worst_margin = 0.0;
    bool pass = false;
    std::string note;  // e.g. which monotonicity branch applies

    void add(std::string label, double x, double lhs, double rhs, double margin);
    void finish();
};

struct LimitConstants {
    double z = 0.0;      // limit of y / y_L as L grows
    double slope = 0.0;  // lim pi*_L(w) / L for every w < 0
};

/// pi*_L equals the ruin-minimizing rule on (0, c/r) and exceeds it on (-L, 0).
PropReport check_pi_comparison(const FbpSolution& sol, int n_points = 60);

/// Sign of dpi*/dw on (-L, 0) against the closed criterion at every point.
PropReport check_pi_monotone(const FbpSolution& sol, int n_points = 60);

/// pi*_L non-decreasing and M_L strictly decreasing along an increasing L list.
PropReport check_L_monotonicity(const ModelParams& params, const std::vector<double>& L_list, int n_points = 60);

/// M_L(w, 0) decreasing along L_list and below `bound` at the last entry.
PropReport check_M_limit(const ModelParams& params, double w, const std::vector<double>& L_list, double bound);

LimitConstants limit_constants(const MarketConstants& k, const ModelParams& params);

/// Relative change of pi*_L(w) / L between L_lo and L_hi stays within rel_tol.
PropReport check_pi_growth(const ModelParams& params, const std::vector<double>& ws, double L_lo = 1e3,
                           double L_hi = 1e4, double rel_tol = 0.01);

/// Closed-form dy_L/dL in terms of y_0 and y_L.
double dyL_dL_closed(const FbpSolution& sol);

/// (y0 / yL)^(B1 - 1) rebuilt from 1 / y0.
double ratio_power_from_y0(const FbpSolution& sol);

/// Closed form against a central difference with step 1e-4 L, plus the
/// consistency of the ratio identity.
PropReport check_dyL_dL(const ModelParams& params);

/// Left side of the inequality that makes dM_L/dL negative, at y.
double master_lhs(const FbpSolution& sol, double y);

/// The inequality at y0 (directly and in simplified form) and on a y grid.
PropReport check_master_inequality(const FbpSolution& sol, int n_points = 60);

/// Everything above for one parameter set, run concurrently.
std::vector<PropReport> run_all(const ModelParams& params);

}  // namespace occtime
