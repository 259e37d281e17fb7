#pragma once

#include <optional>
#include <vector>

#include "occtime/dual.hpp"
#include "occtime/mc_sim.hpp"
#include "occtime/model.hpp"
#include "occtime/step_penalty.hpp"

namespace occtime {

/// Dual solution for a step penalty f. Segment k covers [bounds[k], bounds[k+1]]
/// in y, with bounds = {0, y_1, ..., y_K, yL}, and there
///   mhat(y) = A[k] y^B1 + C[k] y^B2 + (c/r) y + levels(k) / lambda,
/// where levels(0) = 0. Wealth maps to segment k between thresholds k and k-1.
///
/// Smooth fit at every y_k is assumed by analogy with the single-threshold
/// case; results for K > 1 are conjectural and checked by simulation.
struct MultiFbpSolution {
    ModelParams params;
    MarketConstants k;
    StepPenalty penalty;
    std::vector<double> bounds;  // size K + 2
    std::vector<double> A, C;    // size K + 1
    double yL = 0.0;
    /// f == 0 everywhere: every strategy is optimal and the value is a.
    bool trivial = false;
    int shooting_bisections = 0;

    std::size_t segments() const { return A.size(); }
    double level(std::size_t seg) const { return seg == 0 ? 0.0 : penalty.levels[seg - 1]; }
    /// Wealth at the left end of segment seg in y (its upper wealth end).
    double wealth_top(std::size_t seg) const;
};

struct PenalizedDerivs {
    double d1 = 0.0, d2 = 0.0;
};

MultiFbpSolution solve_penalized(const ModelParams& params, const StepPenalty& penalty);

double mhat_penalized(const MultiFbpSolution& sol, double y, std::size_t seg);
PenalizedDerivs mhat_derivs_penalized(const MultiFbpSolution& sol, double y, std::size_t seg);

/// Segment containing wealth w; at a threshold `below` selects the lower-wealth side.
std::size_t segment_of(const MultiFbpSolution& sol, double w, bool below = false);

/// y solving mhat'(y) = w, for w in [-L, c/r].
double invert_penalized(const MultiFbpSolution& sol, double w);

/// M^f_L(w, a) on the whole real line.
double value_penalized(const MultiFbpSolution& sol, double w, double a = 0.0);

/// Optimal allocation on (-L, c/r). At a threshold a side must be given.
double pi_penalized(const MultiFbpSolution& sol, double w, std::optional<Side> side = std::nullopt);

/// pi_penalized tabulated between consecutive thresholds, for mc-sim.
Strategy penalized_strategy(const MultiFbpSolution& sol, int nodes_per_piece = 20001);

}  // namespace occtime
