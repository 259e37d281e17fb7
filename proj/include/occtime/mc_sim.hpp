#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "occtime/fbp.hpp"
#include "occtime/step_penalty.hpp"

namespace occtime {

struct SimConfig {
    double w0 = 0.0;
    double a0 = 0.0;   // occupation time already accrued
    double dt = 1e-3;  // Euler step in years
    std::int64_t n_paths = 200000;
    std::uint64_t seed = 1;
    std::optional<double> t_max;  // defaults to 40 / lambda
    /// Also stop when a Brownian bridge between consecutive Euler points would
    /// have touched -L or c/r. Without it only the post-step position is checked.
    bool bridge = true;
};

/// Feedback rule pi(w) used on (-L, c/r).
class Strategy {
public:
    static Strategy zero();
    static Strategy constant(double k);
    /// pi(w) = slope (c/r - w), which is the ruin-minimizing rule for slope
    /// (mu - r)/sigma^2 / (p - 1).
    static Strategy linear(std::string name, double slope, double safe_level);
    /// Piecewise-linear table. knots split (-L, c/r) into smooth pieces;
    /// piece(w, k) evaluates the k-th piece, including one-sided limits at its ends.
    static Strategy tabulated(std::string name, std::vector<double> knots,
                              const std::function<double(double, std::size_t)>& piece, int nodes_per_piece);
    static Strategy custom(std::string name, std::function<double(double)> rule);

    const std::string& name() const { return name_; }

    double operator()(double w) const {
        switch (kind_) {
            case Kind::constant: return a_;
            case Kind::linear: return a_ * (b_ - w);
            case Kind::table: return lookup(w);
            case Kind::custom: return rule_(w);
        }
        return 0.0;
    }

private:
    enum class Kind { constant, linear, table, custom };
    struct Piece {
        double lo, hi, inv_h;
        std::vector<double> values;
    };
    double lookup(double w) const;

    Kind kind_ = Kind::constant;
    std::string name_;
    double a_ = 0.0, b_ = 0.0;
    std::vector<Piece> pieces_;
    std::function<double(double)> rule_;
};

/// Optimal feedback pi*_L, tabulated on each side of zero.
Strategy optimal_strategy(const FbpSolution& sol, int nodes_per_piece = 20001);
Strategy ruin_min_strategy(const FbpSolution& sol);

struct MinWealthStats {
    double mean = 0.0;
    double min = 0.0;
    double q05 = 0.0, q50 = 0.0, q95 = 0.0;
};

struct SimEstimate {
    std::string strategy;
    double mean = 0.0;       // a0 + excess_mean
    double excess_mean = 0.0;  // occupation payoff accrued after time 0
    double std_error = 0.0;
    std::int64_t n_paths = 0;
    std::int64_t n_death = 0, n_ruin = 0, n_safe = 0, n_truncated = 0;
    MinWealthStats min_wealth;
    std::vector<std::string> warnings;
};

/// Estimates E[A + f(-L)/lambda 1{ruin}] under the given feedback rule. The
/// weight f defaults to the indicator of negative wealth. Paths run in
/// OpenMP-parallel batches merged in batch order.
SimEstimate simulate(const FbpSolution& sol, const Strategy& strategy, const SimConfig& config,
                     const StepPenalty& weight = indicator_penalty());

/// Single-threaded reference with the same batching; bitwise equal to simulate.
SimEstimate simulate_serial(const FbpSolution& sol, const Strategy& strategy, const SimConfig& config,
                            const StepPenalty& weight = indicator_penalty());

struct Comparison {
    std::vector<SimEstimate> estimates;  // optimal strategy first
    std::vector<double> diff_mean;       // per strategy, paired mean minus the optimal one
    std::vector<double> diff_std_error;
};

/// Common-random-numbers comparison against the optimal strategy.
Comparison compare(const FbpSolution& sol, const std::vector<Strategy>& others, const SimConfig& config);

/// Resolved horizon cap; throws std::invalid_argument for an invalid config.
double checked_t_max(const SimConfig& config, const ModelParams& params);

}  // namespace occtime
