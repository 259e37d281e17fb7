#pragma once

#include <span>
#include <string>
#include <vector>

#include "occtime/fbp.hpp"

namespace occtime {

/// Wealth grid on [-L, c/r]. Spacing is uniform on each side of zero and the
/// two spacings are as close as the node count allows, so w = 0 is a node.
struct GridSpec {
    int n = 4000;             // requested interior nodes (>= 100)
    double tol = 1e-9;        // policy-iteration stopping tolerance on sup |m_k - m_{k-1}|
    int max_iters = 200;
};

struct GridSolution {
    std::vector<double> w;         // all nodes including both boundaries
    std::vector<double> values;    // m at each node
    std::vector<double> policies;  // pi at each node (boundary entries are 0)
    int iterations = 0;
    double residual = 0.0;          // max discrete HJB residual at interior nodes
    bool converged = false;
    double max_increase = 0.0;  // largest node-wise rise between successive policy values
    bool m_matrix = true;             // every assembled system was a diagonally dominant M-matrix
};

struct ConvergenceError : std::runtime_error {
    ConvergenceError(const std::string& what, double last_residual)
        : std::runtime_error(what), last_residual(last_residual) {}
    double last_residual;
};

/// Node positions; zero is always node index `zero_index`.
std::vector<double> make_grid(const ModelParams& params, const GridSpec& spec, int* zero_index = nullptr);

/// Upper clip for policies: 50 (mu - r)/sigma^2 (c/r + L).
double policy_cap(const ModelParams& params);

/// Solves the primal HJB equation by policy iteration. Drift differences are
/// central where that keeps the scheme monotone and upwind elsewhere; the
/// second difference at w = 0 carries a lagged correction for the jump of m''.
/// Throws ConvergenceError when max_iters is exhausted.
GridSolution solve_grid(const ModelParams& params, const GridSpec& spec = {});

/// Value of a fixed feedback policy given at every node (one linear solve).
GridSolution evaluate_policy(const ModelParams& params, const GridSpec& spec, std::span<const double> policy);

/// lambda m - 1{w<0} - (r w - c) m' + delta (m')^2 / m'' for given derivatives.
double hjb_residual(const ModelParams& params, double w, double m, double m1, double m2);

struct ResidualReport {
    double max_abs = 0.0;
    double max_rel = 0.0;  // each residual scaled by the largest term at its node
    double worst_w = 0.0;
};

/// HJB residual of the closed form, skipping w = 0 and the grid ends. The
/// positive branch uses the explicit power form, the negative one the dual.
ResidualReport residual_of_closed_form(const FbpSolution& sol, std::span<const double> w_grid);

/// max |grid value - closed form| over all nodes.
double max_error_vs_closed_form(const FbpSolution& sol, const GridSolution& grid);

}  // namespace occtime
