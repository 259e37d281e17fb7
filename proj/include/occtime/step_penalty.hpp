#pragma once

#include <vector>

#include "occtime/model.hpp"

namespace occtime {

/// Piecewise-constant running penalty that grows as wealth falls.
///   f(w) = 0        for w >= thresholds[0]
///   f(w) = levels[k] for thresholds[k+1] <= w < thresholds[k]
///   f(w) = levels[K-1] below the last threshold and at -L.
struct StepPenalty {
    std::vector<double> thresholds;  // strictly decreasing, first <= 0
    std::vector<double> levels;      // non-negative, non-decreasing

    double operator()(double w) const {
        double f = 0.0;
        for (std::size_t k = 0; k < thresholds.size() && w < thresholds[k]; ++k) f = levels[k];
        return f;
    }
    double terminal() const { return levels.back(); }
    std::size_t size() const { return thresholds.size(); }
};

/// f(w) = 1{w < 0}, the plain occupation time below zero.
inline StepPenalty indicator_penalty() { return {{0.0}, {1.0}}; }

/// Throws std::invalid_argument unless the thresholds lie in (-L, 0], are
/// strictly decreasing, and the levels are non-negative and non-decreasing.
void validate(const StepPenalty& f, const ModelParams& params);

}  // namespace occtime
